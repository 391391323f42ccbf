#pragma once

#include "rcf/distribution.hpp"
#include "rcf/process.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace rcf {

using Json = nlohmann::json;

// {"type":"constant","a":1}, {"type":"uniform","K":3}, {"type":"geometric","p":0.5},
// {"type":"zeta","s":3}, {"type":"gauss_kuzmin"}
Json dist_to_json(const Distribution& d);
Distribution dist_from_json(const Json& j);

// {"kind":"iid","dist":{...}}, {"kind":"markov","transition":[[...]],"initial":[...]},
// {"kind":"gauss_stationary","precision_bits":N}, {"kind":"explicit","digits":[...]}
Json spec_to_json(const ProcessSpec& spec);
ProcessSpec spec_from_json(const Json& j);

// Parses JSON text into a spec; malformed input raises ConfigError.
ProcessSpec parse_spec(const std::string& text);

// x rounded to 9 significant digits, so that serialized output prints at most 9.
double round_sig(double x, int digits = 9);

// Printf-style %.9g.
std::string format_number(double x);

} // namespace rcf
