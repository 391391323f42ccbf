#pragma once

#include "rcf/deviation.hpp"
#include "rcf/json_io.hpp"
#include "rcf/levy.hpp"
#include "rcf/mixing.hpp"

namespace rcf {

// The seed mixer's constants, echoed so that runs can be re-derived elsewhere.
Json seeding_metadata();

// {"method","point","stderr","n","trials","seed","analytic"}
Json to_json(const LevyEstimate& e);
Json to_json(const RateFit& f);
Json to_json(const BoundReport& r);
// Every certificate field plus {"spec","seeds","trials"} metadata.
Json to_json(const ChernoffCertificate& c, const ProcessSpec& spec);
// {"depth","k_max","lags":{lag: tv},"psi_hat":{lag: psi},"noise_envelope":{lag: envelope}, ...}
Json to_json(const MixingEstimate& m);
Json to_json(const GaussMarginalReport& r);

} // namespace rcf
