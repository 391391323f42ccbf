#pragma once

#include "rcf/ensemble.hpp"
#include "rcf/levy.hpp"
#include "rcf/process.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rcf {

// ln E(X_1^t) from a sample of bracketed tail values.
struct MgfEstimate {
    double t = 0.0;
    double log_mgf = 0.0;
    double std_error = 0.0;  // of log_mgf (delta method)
    double bias_bound = 0.0; // of log_mgf, from the bracket widths
    double mean = 0.0;       // E(X^t) estimate
    double mean_std_error = 0.0;
    double mean_bias = 0.0;  // bracket bias of `mean`
    std::size_t trials = 0;
};

// Throws DomainError unless t in (-1, 1) \ {0}.
MgfEstimate mgf_from_samples(const std::vector<TailSample>& samples, double t);

// Requires m >= 40, trials >= 2.
MgfEstimate mgf_log(const ProcessSpec& spec, double t, std::size_t trials, std::size_t m, std::uint64_t seed,
                    Execution ex = Execution::parallel);

enum class Side {
    upper, // ln E(X^t)/t close to E ln X
    lower, // ln E(X^-s)/s close to -E ln X
};

struct ExponentChoice {
    double t = 0.0;
    double statistic = 0.0; // ln E(X^{+-t})/t
    double target = 0.0;    // E ln X on the upper side, -E ln X on the lower side
    double slack = 0.0;     // propagated sampling and bracket error
    int halvings = 0;
};

inline constexpr int kMaxHalvings = 30;

// Scans t = 1/2, 1/4, ... and returns the largest t with
// |statistic - target| < delta/8 - 3 slack. Throws PrecisionError after kMaxHalvings.
ExponentChoice select_exponent(const std::vector<TailSample>& samples, double mean_log_x, double mean_log_x_se,
                               double delta, Side side);

struct CertificateOptions {
    std::size_t mgf_trials = 200'000;
    std::size_t truncation = kDefaultTruncation;
    std::size_t reference_trials = kReferenceTrials;
    Execution execution = Execution::parallel;
};

ExponentChoice select_exponent(const ProcessSpec& spec, double delta, Side side, std::uint64_t seed,
                               const CertificateOptions& options = {});

using PsiProfile = std::map<std::size_t, double>;

struct ChernoffCertificate {
    double delta = 0.0;
    double t0 = 0.0;
    double s0 = 0.0;
    double epsilon1 = 0.0;
    double epsilon2 = 0.0;
    std::size_t N0 = 0;
    std::size_t N1 = 0;
    std::size_t N2 = 0;
    double lambda = 0.0;
    double tau = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double B1 = 0.0;
    double B2 = 0.0;
    double alpha = 0.0;
    double B = 0.0;
    std::size_t N = 0;
    double mean_log_x = 0.0;
    bool heuristic = false; // psi profile was estimated, not proven

    // Conservative moments entering the N1 / N2 conditions.
    double mgf_upper_lo = 0.0; // E(X^t0) - 3 se - bias
    double mgf_lower_lo = 0.0; // E(X^-s0) - 3 se - bias

    // Re-verification with an independent sample.
    double reverify_upper = 0.0; // |ln E(X^t0)/t0 - mean_log_x|
    double reverify_lower = 0.0; // |ln E(X^-s0)/s0 + mean_log_x|
    bool reverified = false;

    std::uint64_t seed = 0;
    std::uint64_t mgf_seed = 0;
    std::uint64_t reverify_seed = 0;
    std::size_t mgf_trials = 0;
    std::size_t reference_trials = 0; // 0 when the reference is analytic
    std::size_t truncation = 0;

    double bound(std::size_t n) const;
};

// ceil(2 ln 2 / delta)
std::size_t deviation_n0(double delta);

// Smallest N >= 1 with 2^{-(N - offset) t} <= target. target must be in (0, 1].
std::size_t geometric_threshold(double t, double target, int offset);

// Throws ConfigError for a non-iid spec without a psi profile, or a profile that
// never reaches the required epsilon.
ChernoffCertificate chernoff_certificate(const ProcessSpec& spec, double delta, const std::optional<PsiProfile>& psi,
                                         std::uint64_t seed, const CertificateOptions& options = {});

struct DeviationPoint {
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t hits = 0;       // |(1/n) ln Q_n - L| >= delta
    std::size_t hits_above = 0; // (1/n) ln Q_n - L >= delta
    std::size_t hits_below = 0; // L - (1/n) ln Q_n >= delta
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
};

struct DeviationCurve {
    double delta = 0.0;
    double reference_L = 0.0;
    std::vector<DeviationPoint> grid;
};

// One path of length max(n_grid) per trial, read at every grid point.
// Requires trials >= 1000 and a strictly increasing grid.
DeviationCurve empirical_deviation(const ProcessSpec& spec, double delta, const std::vector<std::size_t>& n_grid,
                                   std::size_t trials, std::uint64_t seed, double reference_L,
                                   Execution ex = Execution::parallel);

// CSV with header "n,trials,hits,p_hat,ci_lo,ci_hi".
std::string curve_csv(const DeviationCurve& curve);

struct RateFit {
    double alpha_hat = 0.0;
    double B_hat = 0.0;
    double r_squared = 0.0;
    std::size_t n_used = 0;
};

// Least squares of ln p_hat on n over grid points with p_hat > 0.
// Throws InsufficientDataError with fewer than three such points.
RateFit fit_rate(const DeviationCurve& curve);

struct BoundCheck {
    std::size_t n = 0;
    double lower = 0.0; // one-sided lower confidence limit of p
    double bound = 0.0; // B e^{-alpha n}
    bool ok = true;
};

struct BoundReport {
    bool pass = true;
    double confidence = 0.99;
    std::vector<BoundCheck> checked; // grid points with n >= N
};

// Throws ConfigError when delta or the reference differ between curve and certificate.
BoundReport verify_bound(const DeviationCurve& curve, const ChernoffCertificate& cert, double confidence = 0.99);

// Trajectories flagged by the deviation event at length n (n > N0) must also
// deviate by delta/2 in the tail-product average. Each X_k is bracketed at depth m.
struct ContainmentReport {
    std::size_t flagged = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0; // min over flagged of (|mean log X + L| - delta/2), slack included
};

ContainmentReport containment_check(const ProcessSpec& spec, double delta, std::size_t n, std::size_t trials,
                                    std::size_t m, std::uint64_t seed, double reference_L,
                                    Execution ex = Execution::parallel);

} // namespace rcf
