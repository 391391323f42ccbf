#pragma once

#include "rcf/distribution.hpp"
#include "rcf/ensemble.hpp"
#include "rcf/process.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rcf {

enum class LevyMethod {
    trajectory,
    direct,
    analytic,
};

std::string to_string(LevyMethod m);

struct LevyEstimate {
    double point = 0.0;     // nats
    double std_error = 0.0; // includes bias_bound for the direct method
    double bias_bound = 0.0;
    std::size_t n = 0;      // trajectory length; 0 for the direct method
    std::size_t trials = 0;
    std::size_t truncation = 0; // depth m for the direct method
    LevyMethod method = LevyMethod::trajectory;
    std::uint64_t seed = 0;
    std::optional<double> analytic;
};

// pi^2 / (12 ln 2)
double gauss_levy_constant();

// pi^2/(12 ln 2) for gauss_stationary, ln((a + sqrt(a^2 + 4))/2) for iid constant(a).
std::optional<double> levy_analytic(const ProcessSpec& spec);

// (1/n) ln Q_n for `trials` independent paths.
std::vector<double> trajectory_samples(const ProcessSpec& spec, std::size_t n, std::size_t trials,
                                       std::uint64_t seed, Execution ex = Execution::parallel);

// Mean of (1/n) ln Q_n over independent paths. Requires n >= 10, trials >= 2.
LevyEstimate levy_mc_trajectory(const ProcessSpec& spec, std::size_t n, std::size_t trials, std::uint64_t seed,
                                Execution ex = Execution::parallel);

// One realization of X_1, bracketed from m partial quotients.
struct TailSample {
    double x = 0.0;       // bracket midpoint
    double width = 0.0;   // bracket width (upper bound on |x - X_1| times 2)
    Digit first = 1;      // A_1
};

std::vector<TailSample> sample_tail_values(const ProcessSpec& spec, std::size_t trials, std::size_t m,
                                           std::uint64_t seed, Execution ex = Execution::parallel);

// Mean of -ln X_1. Requires trials >= 2, m >= 40. The bracket bias, bounded
// per sample by width * (A_1 + 1), is reported in bias_bound and added to std_error.
LevyEstimate levy_mc_direct(const ProcessSpec& spec, std::size_t trials, std::size_t m, std::uint64_t seed,
                            Execution ex = Execution::parallel);

inline constexpr std::size_t kDefaultTruncation = 64;
inline constexpr std::size_t kReferenceTrials = 1'000'000;

// Reference Levy constant for downstream modules: analytic when available,
// otherwise a direct estimate with `direct_trials` trials.
struct ReferenceLevy {
    double value = 0.0;
    double std_error = 0.0;
    bool analytic = false;
    std::size_t trials = 0;
};

ReferenceLevy reference_levy(const ProcessSpec& spec, std::size_t direct_trials, std::uint64_t seed,
                             Execution ex = Execution::parallel);

} // namespace rcf
