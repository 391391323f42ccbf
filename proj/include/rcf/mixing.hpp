#pragma once

#include "rcf/ensemble.hpp"
#include "rcf/process.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace rcf {

// Cylinders of depth d over symbols 1..k_max are indexed 0 .. k_max^d - 1;
// words containing a symbol above k_max map to -1.
long cylinder_index(const Digit* word, std::size_t depth, std::size_t k_max);

inline constexpr std::size_t kMaxCylinders = 4096;
inline constexpr std::size_t kMinCylinderCount = 10;

struct PsiEstimate {
    std::size_t lag = 0;
    double psi_hat = 0.0;
    // Largest Bonferroni 99.9% half-width of the ratio under independence
    // among the pairs that entered the sup.
    double noise_envelope = 0.0;
    // Every pair's |ratio - 1| is inside its own 99.9% half-width.
    bool within_envelope = true;
    std::size_t pairs_used = 0;
};

// Joint cylinder counts for A = (A_1..A_d) and B starting at index d + lag + 1.
struct CylinderTable {
    std::size_t cells = 0;
    std::size_t trials = 0;
    std::vector<std::size_t> count_a;
    std::vector<std::size_t> count_b;
    std::vector<std::size_t> joint; // row-major, a * cells + b
};

CylinderTable tabulate(const std::vector<long>& a, const std::vector<long>& b, std::size_t cells);
PsiEstimate psi_from_table(const CylinderTable& table, std::size_t lag);

// Requires depth >= 1, k_max >= 1, k_max^depth <= kMaxCylinders, trials >= 10^4.
// Throws InsufficientDataError when no pair is well sampled.
PsiEstimate psi_hat(const ProcessSpec& spec, std::size_t lag, std::size_t depth, std::size_t k_max,
                    std::size_t trials, std::uint64_t seed, Execution ex = Execution::parallel);

struct MixingEstimate {
    std::size_t depth = 0;
    std::size_t k_max = 0;
    std::size_t trials = 0;
    std::vector<PsiEstimate> lags;
    std::map<std::size_t, double> stationarity_tv;
    double tv_noise = 0.0;
};

// Total variation between depth-d cylinder laws at offsets 0 and lag, for every lag.
// Rejects explicit specs with ConfigError.
std::map<std::size_t, double> stationarity_check(const ProcessSpec& spec, const std::vector<std::size_t>& lags,
                                                 std::size_t depth, std::size_t k_max, std::size_t trials,
                                                 std::uint64_t seed, Execution ex = Execution::parallel);

// A high-probability ceiling for the TV between two independent empirical laws
// on `cells` cells from `trials` draws each.
double tv_noise_bound(std::size_t cells, std::size_t trials);

MixingEstimate mixing_report(const ProcessSpec& spec, const std::vector<std::size_t>& lags, std::size_t depth,
                             std::size_t k_max, std::size_t trials, std::uint64_t seed,
                             Execution ex = Execution::parallel);

inline constexpr std::size_t kMarginalCutoff = 20;

struct MarginalReport {
    std::size_t index = 1;
    std::size_t trials = 0;
    std::vector<double> empirical; // P(A_index = k), k = 1..20, then the remainder
    std::vector<double> expected;  // gauss_kuzmin_pmf, same layout
    double max_abs_diff = 0.0;     // over k <= 20
    double total_variation = 0.0;
    double chi_squared = 0.0;
    std::size_t dof = 0;
};

// Law of A_index (1-based) under `spec` against the Gauss-Kuzmin pmf.
MarginalReport marginal_check(const ProcessSpec& spec, std::size_t index, std::size_t trials, std::uint64_t seed,
                              Execution ex = Execution::parallel);

struct GaussMarginalReport {
    MarginalReport marginal;
    std::vector<double> cdf_points;    // x with log2(1 + x) = j/10, j = 1..9
    std::vector<double> cdf_empirical; // empirical P(X_1 <= x)
    double cdf_max_diff = 0.0;
};

// Requires trials >= 10^4.
GaussMarginalReport gauss_marginal_check(std::size_t trials, std::uint64_t seed, Execution ex = Execution::parallel);

} // namespace rcf
