#include "rcf/deviation.hpp"

#include "rcf/convergents.hpp"
#include "rcf/error.hpp"
#include "rcf/json_io.hpp"
#include "rcf/seeding.hpp"
#include "rcf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rcf {

namespace {

void check_exponent(double t)
{
    if (!(t > -1.0 && t < 1.0) || t == 0.0)
        throw DomainError("mgf: t must lie in (-1, 1) and be nonzero");
}

bool geometric_ok(std::size_t n, double t, double target, int offset)
{
    const double e = (static_cast<double>(n) - offset) * t;
    return std::exp2(-e) <= target;
}

// Smallest profile lag with psi <= eps.
std::size_t psi_threshold(const PsiProfile& psi, double eps)
{
    for (const auto& [lag, value] : psi)
        if (value <= eps)
            return std::max<std::size_t>(lag, 1);
    std::ostringstream msg;
    msg << "psi profile never drops to epsilon = " << eps;
    throw ConfigError(msg.str());
}

enum : unsigned char {
    kAbove = 1,
    kBelow = 2,
};

} // namespace

MgfEstimate mgf_from_samples(const std::vector<TailSample>& samples, double t)
{
    check_exponent(t);
    if (samples.size() < 2)
        throw InsufficientDataError("mgf: need at least two samples");
    std::vector<double> v(samples.size());
    double bias = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        v[i] = std::pow(s.x, t);
        // |d/dx x^t| <= |t| (A_1 + 1)^{1-t} on [1/(A_1+1), 1/A_1]; the midpoint is within width/2.
        const double a = static_cast<double>(s.first) + 1.0;
        bias += 0.5 * s.width * std::abs(t) * std::pow(a, 1.0 - t);
    }
    bias /= static_cast<double>(samples.size());
    const auto sum = summarize(v);
    MgfEstimate est;
    est.t = t;
    est.mean = sum.mean;
    est.mean_std_error = sum.std_error;
    est.mean_bias = bias;
    est.log_mgf = std::log(sum.mean);
    est.std_error = sum.std_error / sum.mean;
    const double floor = sum.mean - bias;
    est.bias_bound = floor > 0.0 ? bias / floor : std::numeric_limits<double>::infinity();
    est.trials = samples.size();
    return est;
}

MgfEstimate mgf_log(const ProcessSpec& spec, double t, std::size_t trials, std::size_t m, std::uint64_t seed,
                    Execution ex)
{
    check_exponent(t);
    if (m < 40)
        throw DomainError("mgf_log: truncation depth must be >= 40");
    if (trials < 2)
        throw DomainError("mgf_log: trials must be >= 2");
    return mgf_from_samples(sample_tail_values(spec, trials, m, stream_seed(seed, Stream::mgf), ex), t);
}

ExponentChoice select_exponent(const std::vector<TailSample>& samples, double mean_log_x, double mean_log_x_se,
                               double delta, Side side)
{
    if (!(delta > 0.0))
        throw DomainError("select_exponent: delta must be > 0");
    const double sign = side == Side::upper ? 1.0 : -1.0;
    const double target = sign * mean_log_x;
    double t = 1.0;
    for (int h = 1; h <= kMaxHalvings; ++h) {
        t *= 0.5;
        const auto est = mgf_from_samples(samples, sign * t);
        const double statistic = est.log_mgf / t;
        const double slack = std::hypot(est.std_error / t, mean_log_x_se) + est.bias_bound / t;
        if (std::abs(statistic - target) < delta / 8.0 - 3.0 * slack)
            return {t, statistic, target, slack, h};
    }
    throw PrecisionError("select_exponent: no exponent within the error budget; raise the trial count");
}

ExponentChoice select_exponent(const ProcessSpec& spec, double delta, Side side, std::uint64_t seed,
                               const CertificateOptions& options)
{
    const auto ref = reference_levy(spec, options.reference_trials, seed, options.execution);
    const auto samples = sample_tail_values(spec, options.mgf_trials, options.truncation,
                                            stream_seed(seed, Stream::mgf), options.execution);
    return select_exponent(samples, -ref.value, ref.std_error, delta, side);
}

double ChernoffCertificate::bound(std::size_t n) const
{
    return B * std::exp(-alpha * static_cast<double>(n));
}

std::size_t deviation_n0(double delta)
{
    if (!(delta > 0.0))
        throw DomainError("delta must be > 0");
    return static_cast<std::size_t>(std::ceil(2.0 * std::numbers::ln2 / delta));
}

std::size_t geometric_threshold(double t, double target, int offset)
{
    if (!(t > 0.0) || !(target > 0.0))
        throw DomainError("geometric_threshold: t and target must be positive");
    const double guess = offset - std::log2(target) / t;
    auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(guess)));
    while (n > 1 && geometric_ok(n - 1, t, target, offset))
        --n;
    while (!geometric_ok(n, t, target, offset))
        ++n;
    return n;
}

ChernoffCertificate chernoff_certificate(const ProcessSpec& spec, double delta, const std::optional<PsiProfile>& psi,
                                         std::uint64_t seed, const CertificateOptions& options)
{
    if (!(delta > 0.0))
        throw DomainError("chernoff_certificate: delta must be > 0");
    const bool iid = spec.is_iid();
    if (!iid && !psi)
        throw ConfigError("chernoff_certificate: a psi profile is required for a non-iid process");

    ChernoffCertificate c;
    c.delta = delta;
    c.seed = seed;
    c.truncation = options.truncation;
    c.mgf_trials = options.mgf_trials;
    c.heuristic = !iid;

    const auto ref = reference_levy(spec, options.reference_trials, seed, options.execution);
    c.mean_log_x = -ref.value;
    c.reference_trials = ref.trials;

    c.mgf_seed = stream_seed(seed, Stream::mgf);
    const auto samples =
        sample_tail_values(spec, options.mgf_trials, options.truncation, c.mgf_seed, options.execution);
    const auto up = select_exponent(samples, c.mean_log_x, ref.std_error, delta, Side::upper);
    const auto lo = select_exponent(samples, c.mean_log_x, ref.std_error, delta, Side::lower);
    c.t0 = up.t;
    c.s0 = lo.t;
    c.epsilon1 = delta * c.t0 / 8.0;
    c.epsilon2 = delta * c.s0 / 8.0;

    const auto e_up = mgf_from_samples(samples, c.t0);
    const auto e_lo = mgf_from_samples(samples, -c.s0);
    c.mgf_upper_lo = e_up.mean - 3.0 * e_up.mean_std_error - e_up.mean_bias;
    c.mgf_lower_lo = e_lo.mean - 3.0 * e_lo.mean_std_error - e_lo.mean_bias;
    if (!(c.mgf_upper_lo > 0.0) || !(c.mgf_lower_lo > 0.0))
        throw PrecisionError("chernoff_certificate: moment estimates too noisy; raise the trial count");

    c.N0 = deviation_n0(delta);
    c.N1 = geometric_threshold(c.t0, 0.5 * c.epsilon1 * c.mgf_upper_lo, 1);
    c.N2 = geometric_threshold(c.s0, 0.5 * c.epsilon2 * c.mgf_lower_lo, 2);
    if (!iid) {
        c.N1 = std::max(c.N1, psi_threshold(*psi, c.epsilon1));
        c.N2 = std::max(c.N2, psi_threshold(*psi, c.epsilon2));
    }

    c.lambda = c.t0 / static_cast<double>(c.N1);
    c.tau = c.s0 / static_cast<double>(c.N2);
    c.alpha1 = c.lambda * delta / 8.0;
    c.alpha2 = c.tau * delta / 8.0;
    c.B1 = std::max(1.0, std::exp(-c.t0 * (c.mean_log_x + 3.0 * delta / 8.0)));
    c.B2 = std::exp(-c.s0 * (c.mean_log_x - 3.0 * delta / 8.0));
    c.alpha = std::min(c.alpha1, c.alpha2);
    c.B = c.B1 + c.B2;
    c.N = std::max({c.N0, c.N1, c.N2});

    c.reverify_seed = stream_seed(seed, Stream::reverify);
    const auto fresh =
        sample_tail_values(spec, options.mgf_trials, options.truncation, c.reverify_seed, options.execution);
    c.reverify_upper = std::abs(mgf_from_samples(fresh, c.t0).log_mgf / c.t0 - c.mean_log_x);
    c.reverify_lower = std::abs(mgf_from_samples(fresh, -c.s0).log_mgf / c.s0 + c.mean_log_x);
    c.reverified = c.reverify_upper < delta / 8.0 && c.reverify_lower < delta / 8.0;
    if (!c.reverified)
        throw PrecisionError("chernoff_certificate: exponent inequalities failed on the independent sample");
    return c;
}

DeviationCurve empirical_deviation(const ProcessSpec& spec, double delta, const std::vector<std::size_t>& n_grid,
                                   std::size_t trials, std::uint64_t seed, double reference_L, Execution ex)
{
    if (!(delta >= 0.0))
        throw DomainError("empirical_deviation: delta must be >= 0");
    if (trials < 1000)
        throw DomainError("empirical_deviation: trials must be >= 1000");
    if (n_grid.empty() || n_grid.front() < 1)
        throw ConfigError("empirical_deviation: grid must be nonempty and positive");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw ConfigError("empirical_deviation: grid must be strictly increasing");

    const PathSampler sampler(spec);
    const std::uint64_t base = stream_seed(seed, Stream::deviation);
    const std::size_t n_max = n_grid.back();
    const auto flags = map_trials<std::vector<unsigned char>>(
        trials,
        [&](std::size_t i) {
            const auto digits = sampler.digits(n_max, derive_seed(base, i));
            std::vector<unsigned char> out(n_grid.size(), 0);
            ConvergentState s = init();
            std::size_t g = 0;
            for (std::size_t k = 0; k < n_max; ++k) {
                step_in_place(s, digits[k]);
                if (k + 1 == n_grid[g]) {
                    const double x = log_of(s.q_cur) / static_cast<double>(k + 1);
                    if (x - reference_L >= delta)
                        out[g] |= kAbove;
                    if (reference_L - x >= delta)
                        out[g] |= kBelow;
                    ++g;
                }
            }
            return out;
        },
        ex);

    DeviationCurve curve;
    curve.delta = delta;
    curve.reference_L = reference_L;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        DeviationPoint p;
        p.n = n_grid[g];
        p.trials = trials;
        for (const auto& f : flags) {
            p.hits_above += (f[g] & kAbove) ? 1 : 0;
            p.hits_below += (f[g] & kBelow) ? 1 : 0;
            p.hits += f[g] ? 1 : 0;
        }
        p.p_hat = static_cast<double>(p.hits) / static_cast<double>(trials);
        const auto ci = clopper_pearson(p.hits, trials, 0.95);
        p.ci_lo = ci.lo;
        p.ci_hi = ci.hi;
        curve.grid.push_back(p);
    }
    return curve;
}

std::string curve_csv(const DeviationCurve& curve)
{
    std::ostringstream out;
    out << "n,trials,hits,p_hat,ci_lo,ci_hi\n";
    for (const auto& p : curve.grid)
        out << p.n << ',' << p.trials << ',' << p.hits << ',' << format_number(p.p_hat) << ','
            << format_number(p.ci_lo) << ',' << format_number(p.ci_hi) << '\n';
    return out.str();
}

RateFit fit_rate(const DeviationCurve& curve)
{
    std::vector<double> xs, ys;
    for (const auto& p : curve.grid) {
        if (p.p_hat > 0.0) {
            xs.push_back(static_cast<double>(p.n));
            ys.push_back(std::log(p.p_hat));
        }
    }
    if (xs.size() < 3)
        throw InsufficientDataError("fit_rate: need at least three grid points with p_hat > 0");
    const auto k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0)
        throw InsufficientDataError("fit_rate: grid points must have distinct n");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }
    RateFit fit;
    fit.alpha_hat = -slope;
    fit.B_hat = std::exp(intercept);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.n_used = xs.size();
    return fit;
}

BoundReport verify_bound(const DeviationCurve& curve, const ChernoffCertificate& cert, double confidence)
{
    if (curve.delta != cert.delta)
        throw ConfigError("verify_bound: curve and certificate use different delta");
    if (std::abs(curve.reference_L + cert.mean_log_x) > 1e-12)
        throw ConfigError("verify_bound: curve and certificate use different reference values");
    BoundReport report;
    report.confidence = confidence;
    for (const auto& p : curve.grid) {
        if (p.n < cert.N)
            continue;
        BoundCheck check;
        check.n = p.n;
        check.lower = proportion_lower_bound(p.hits, p.trials, confidence);
        check.bound = cert.bound(p.n);
        check.ok = check.lower <= check.bound;
        report.pass = report.pass && check.ok;
        report.checked.push_back(check);
    }
    return report;
}

ContainmentReport containment_check(const ProcessSpec& spec, double delta, std::size_t n, std::size_t trials,
                                    std::size_t m, std::uint64_t seed, double reference_L, Execution ex)
{
    if (n <= deviation_n0(delta))
        throw DomainError("containment_check: n must exceed ceil(2 ln 2 / delta)");
    if (m < 1)
        throw DomainError("containment_check: truncation depth must be >= 1");
    const PathSampler sampler(spec);
    const std::uint64_t base = stream_seed(seed, Stream::check);
    struct Outcome {
        bool flagged = false;
        double margin = 0.0;
    };
    const auto outcomes = map_trials<Outcome>(
        trials,
        [&](std::size_t i) {
            const auto digits = sampler.digits(n + m - 1, derive_seed(base, i));
            const std::span<const Digit> head(digits.data(), n);
            const double x = log_of(convergent_of(head).q_cur) / static_cast<double>(n);
            if (std::abs(x - reference_L) < delta)
                return Outcome{};
            Interval sum{0.0, 0.0};
            for (std::size_t k = 1; k <= n; ++k) {
                const auto tail = tail_values(digits, k, m);
                const auto lo = log_interval(tail.value_lo);
                const auto hi = log_interval(tail.value_hi);
                sum = sum + Interval{std::min(lo.lo, hi.lo), std::max(lo.hi, hi.hi)};
            }
            const Interval mean = sum / static_cast<double>(n);
            const double reach = std::max(std::abs(mean.lo + reference_L), std::abs(mean.hi + reference_L));
            return Outcome{true, reach - delta / 2.0};
        },
        ex);
    ContainmentReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
        if (!o.flagged)
            continue;
        ++report.flagged;
        report.violations += o.margin < 0.0 ? 1 : 0;
        report.worst_margin = std::min(report.worst_margin, o.margin);
    }
    if (report.flagged == 0)
        report.worst_margin = 0.0;
    return report;
}

} // namespace rcf
