#include "rcf/levy.hpp"

#include "rcf/convergents.hpp"
#include "rcf/error.hpp"
#include "rcf/seeding.hpp"
#include "rcf/stats.hpp"

#include <cmath>
#include <numbers>

namespace rcf {

std::string to_string(LevyMethod m)
{
    switch (m) {
    case LevyMethod::trajectory:
        return "trajectory";
    case LevyMethod::direct:
        return "direct";
    case LevyMethod::analytic:
        return "analytic";
    }
    return "unknown";
}

double gauss_levy_constant()
{
    return std::numbers::pi * std::numbers::pi / (12.0 * std::numbers::ln2);
}

std::optional<double> levy_analytic(const ProcessSpec& spec)
{
    if (std::holds_alternative<process::GaussStationary>(spec.kind()))
        return gauss_levy_constant();
    if (const Distribution* d = spec.iid_distribution()) {
        if (const auto* c = std::get_if<dist::Constant>(&d->family())) {
            // X = [a, a, ...] solves X = 1/(a + X); Q_n grows like its reciprocal.
            const auto a = static_cast<double>(c->a);
            return std::log((a + std::sqrt(a * a + 4.0)) / 2.0);
        }
    }
    return std::nullopt;
}

std::vector<double> trajectory_samples(const ProcessSpec& spec, std::size_t n, std::size_t trials,
                                       std::uint64_t seed, Execution ex)
{
    const PathSampler sampler(spec);
    const std::uint64_t base = stream_seed(seed, Stream::trajectory);
    return map_trials<double>(
        trials,
        [&](std::size_t i) {
            const auto digits = sampler.digits(n, derive_seed(base, i));
            return log_of(convergent_of(digits).q_cur) / static_cast<double>(n);
        },
        ex);
}

LevyEstimate levy_mc_trajectory(const ProcessSpec& spec, std::size_t n, std::size_t trials, std::uint64_t seed,
                                Execution ex)
{
    if (n < 10)
        throw DomainError("levy_mc_trajectory: n must be >= 10");
    if (trials < 2)
        throw DomainError("levy_mc_trajectory: trials must be >= 2");
    const auto xs = trajectory_samples(spec, n, trials, seed, ex);
    const auto s = summarize(xs);
    LevyEstimate est;
    est.point = s.mean;
    est.std_error = s.std_error;
    est.n = n;
    est.trials = trials;
    est.method = LevyMethod::trajectory;
    est.seed = seed;
    est.analytic = levy_analytic(spec);
    return est;
}

std::vector<TailSample> sample_tail_values(const ProcessSpec& spec, std::size_t trials, std::size_t m,
                                           std::uint64_t seed, Execution ex)
{
    const PathSampler sampler(spec);
    return map_trials<TailSample>(
        trials,
        [&](std::size_t i) {
            const auto digits = sampler.digits(m, derive_seed(seed, i));
            const auto tail = tail_values(digits, 1, m);
            return TailSample{tail.midpoint(), tail.width().get_d(), digits.front()};
        },
        ex);
}

LevyEstimate levy_mc_direct(const ProcessSpec& spec, std::size_t trials, std::size_t m, std::uint64_t seed,
                            Execution ex)
{
    if (trials < 2)
        throw DomainError("levy_mc_direct: trials must be >= 2");
    if (m < 40)
        throw DomainError("levy_mc_direct: truncation depth must be >= 40");
    const auto samples = sample_tail_values(spec, trials, m, stream_seed(seed, Stream::direct), ex);
    std::vector<double> neg_log(samples.size());
    double bias = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        neg_log[i] = -std::log(samples[i].x);
        // |d/dx ln x| = 1/x <= A_1 + 1 on the bracket; the midpoint is within width/2.
        bias += 0.5 * samples[i].width * (static_cast<double>(samples[i].first) + 1.0);
    }
    bias /= static_cast<double>(samples.size());
    const auto s = summarize(neg_log);
    LevyEstimate est;
    est.point = s.mean;
    est.bias_bound = bias;
    est.std_error = s.std_error + bias;
    est.n = 0;
    est.trials = trials;
    est.truncation = m;
    est.method = LevyMethod::direct;
    est.seed = seed;
    est.analytic = levy_analytic(spec);
    return est;
}

ReferenceLevy reference_levy(const ProcessSpec& spec, std::size_t direct_trials, std::uint64_t seed, Execution ex)
{
    if (const auto a = levy_analytic(spec))
        return {*a, 0.0, true, 0};
    const auto est = levy_mc_direct(spec, direct_trials, kDefaultTruncation, stream_seed(seed, Stream::reference), ex);
    return {est.point, est.std_error, false, direct_trials};
}

} // namespace rcf
