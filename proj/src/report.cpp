#include "rcf/report.hpp"

#include "rcf/seeding.hpp"

#include <string>

namespace rcf {

namespace {

Json num(double x)
{
    return round_sig(x);
}

std::string hex(std::uint64_t x)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llX", static_cast<unsigned long long>(x));
    return buf;
}

} // namespace

Json seeding_metadata()
{
    return Json{{"mixer", "splitmix64"},
                {"gamma", hex(kMixGamma)},
                {"mul1", hex(kMixMul1)},
                {"mul2", hex(kMixMul2)}};
}

Json to_json(const LevyEstimate& e)
{
    Json j{{"method", to_string(e.method)}, {"point", num(e.point)}, {"stderr", num(e.std_error)},
           {"n", e.n},  {"trials", e.trials},    {"seed", e.seed}};
    j["analytic"] = e.analytic ? num(*e.analytic) : Json(nullptr);
    if (e.method == LevyMethod::direct) {
        j["truncation"] = e.truncation;
        j["bias_bound"] = num(e.bias_bound);
    }
    return j;
}

Json to_json(const RateFit& f)
{
    return Json{{"alpha_hat", num(f.alpha_hat)},
                {"B_hat", num(f.B_hat)},
                {"r_squared", num(f.r_squared)},
                {"n_used", f.n_used}};
}

Json to_json(const BoundReport& r)
{
    Json rows = Json::array();
    for (const auto& c : r.checked)
        rows.push_back(Json{{"n", c.n}, {"lower", num(c.lower)}, {"bound", num(c.bound)}, {"ok", c.ok}});
    return Json{{"pass", r.pass}, {"confidence", num(r.confidence)}, {"checked", rows}};
}

Json to_json(const ChernoffCertificate& c, const ProcessSpec& spec)
{
    return Json{
        {"delta", num(c.delta)},
        {"t0", num(c.t0)},
        {"s0", num(c.s0)},
        {"epsilon1", num(c.epsilon1)},
        {"epsilon2", num(c.epsilon2)},
        {"N0", c.N0},
        {"N1", c.N1},
        {"N2", c.N2},
        {"lambda", num(c.lambda)},
        {"tau", num(c.tau)},
        {"alpha1", num(c.alpha1)},
        {"alpha2", num(c.alpha2)},
        {"B1", num(c.B1)},
        {"B2", num(c.B2)},
        {"alpha", num(c.alpha)},
        {"B", num(c.B)},
        {"N", c.N},
        {"mean_log_X", num(c.mean_log_x)},
        {"heuristic", c.heuristic},
        {"mgf_upper_lo", num(c.mgf_upper_lo)},
        {"mgf_lower_lo", num(c.mgf_lower_lo)},
        {"reverify", Json{{"upper", num(c.reverify_upper)}, {"lower", num(c.reverify_lower)}, {"pass", c.reverified}}},
        {"metadata",
         Json{{"spec", spec_to_json(spec)},
              {"seeds", Json{{"master", c.seed}, {"mgf", c.mgf_seed}, {"reverify", c.reverify_seed}}},
              {"trials", Json{{"mgf", c.mgf_trials}, {"reverify", c.mgf_trials}, {"reference", c.reference_trials}}},
              {"truncation", c.truncation},
              {"seeding", seeding_metadata()}}},
    };
}

Json to_json(const MixingEstimate& m)
{
    Json lags = Json::object();
    Json psi = Json::object();
    Json envelope = Json::object();
    Json within = Json::object();
    for (const auto& [lag, tv] : m.stationarity_tv)
        lags[std::to_string(lag)] = num(tv);
    for (const auto& p : m.lags) {
        const auto key = std::to_string(p.lag);
        psi[key] = num(p.psi_hat);
        envelope[key] = num(p.noise_envelope);
        within[key] = p.within_envelope;
    }
    return Json{{"depth", m.depth},
                {"k_max", m.k_max},
                {"trials", m.trials},
                {"lags", lags},
                {"psi_hat", psi},
                {"noise_envelope", envelope},
                {"within_envelope", within},
                {"tv_noise_bound", num(m.tv_noise)}};
}

Json to_json(const GaussMarginalReport& r)
{
    Json pmf = Json::array();
    for (std::size_t k = 0; k < kMarginalCutoff; ++k)
        pmf.push_back(Json{{"k", k + 1}, {"empirical", num(r.marginal.empirical[k])}, {"expected", num(r.marginal.expected[k])}});
    Json cdf = Json::array();
    for (std::size_t j = 0; j < r.cdf_points.size(); ++j)
        cdf.push_back(Json{{"x", num(r.cdf_points[j])}, {"empirical", num(r.cdf_empirical[j])},
                           {"expected", num((j + 1) / 10.0)}});
    return Json{{"trials", r.marginal.trials},
                {"max_abs_diff", num(r.marginal.max_abs_diff)},
                {"total_variation", num(r.marginal.total_variation)},
                {"chi_squared", num(r.marginal.chi_squared)},
                {"dof", r.marginal.dof},
                {"pmf", pmf},
                {"cdf", cdf},
                {"cdf_max_diff", num(r.cdf_max_diff)}};
}

} // namespace rcf
