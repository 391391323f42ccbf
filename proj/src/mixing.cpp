#include "rcf/mixing.hpp"

#include "rcf/distribution.hpp"
#include "rcf/error.hpp"
#include "rcf/gauss_real.hpp"
#include "rcf/seeding.hpp"
#include "rcf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rcf {

namespace {

std::size_t cell_count(std::size_t depth, std::size_t k_max)
{
    if (depth < 1)
        throw ConfigError("mixing: depth must be >= 1");
    if (k_max < 1)
        throw ConfigError("mixing: k_max must be >= 1");
    std::size_t cells = 1;
    for (std::size_t i = 0; i < depth; ++i) {
        cells *= k_max;
        if (cells > kMaxCylinders)
            throw ConfigError("mixing: k_max^depth exceeds " + std::to_string(kMaxCylinders) + " cylinders");
    }
    return cells;
}

void require_ensemble(const ProcessSpec& spec)
{
    if (!spec.is_random())
        throw ConfigError("mixing: an explicit digit list has no ensemble");
}

void require_trials(std::size_t trials, std::size_t minimum)
{
    if (trials < minimum)
        throw DomainError("mixing: trials must be >= " + std::to_string(minimum));
}

} // namespace

long cylinder_index(const Digit* word, std::size_t depth, std::size_t k_max)
{
    long index = 0;
    long scale = 1;
    for (std::size_t i = 0; i < depth; ++i) {
        if (word[i] > k_max)
            return -1;
        index += static_cast<long>(word[i] - 1) * scale;
        scale *= static_cast<long>(k_max);
    }
    return index;
}

CylinderTable tabulate(const std::vector<long>& a, const std::vector<long>& b, std::size_t cells)
{
    CylinderTable t;
    t.cells = cells;
    t.trials = a.size();
    t.count_a.assign(cells, 0);
    t.count_b.assign(cells, 0);
    t.joint.assign(cells * cells, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] >= 0)
            ++t.count_a[static_cast<std::size_t>(a[i])];
        if (b[i] >= 0)
            ++t.count_b[static_cast<std::size_t>(b[i])];
        if (a[i] >= 0 && b[i] >= 0)
            ++t.joint[static_cast<std::size_t>(a[i]) * cells + static_cast<std::size_t>(b[i])];
    }
    return t;
}

PsiEstimate psi_from_table(const CylinderTable& table, std::size_t lag)
{
    const auto n = static_cast<double>(table.trials);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < table.cells; ++a) {
        const auto ca = static_cast<double>(table.count_a[a]);
        if (table.count_a[a] < kMinCylinderCount)
            continue;
        for (std::size_t b = 0; b < table.cells; ++b) {
            const auto cb = static_cast<double>(table.count_b[b]);
            if (table.count_b[b] < kMinCylinderCount || ca * cb / n < static_cast<double>(kMinCylinderCount))
                continue;
            pairs.emplace_back(a, b);
        }
    }
    if (pairs.empty())
        throw InsufficientDataError("psi_hat: no well-sampled cylinder pair");

    const double z = normal_quantile(1.0 - 0.001 / (2.0 * static_cast<double>(pairs.size())));
    PsiEstimate est;
    est.lag = lag;
    est.pairs_used = pairs.size();
    for (const auto& [a, b] : pairs) {
        const auto ca = static_cast<double>(table.count_a[a]);
        const auto cb = static_cast<double>(table.count_b[b]);
        const auto cab = static_cast<double>(table.joint[a * table.cells + b]);
        const double pa = ca / n;
        const double pb = cb / n;
        const double dev = std::abs(n * cab / (ca * cb) - 1.0);
        const double half = z * std::sqrt((1.0 - pa) * (1.0 - pb) / (n * pa * pb));
        est.psi_hat = std::max(est.psi_hat, dev);
        est.noise_envelope = std::max(est.noise_envelope, half);
        if (dev > half + 1e-12)
            est.within_envelope = false;
    }
    return est;
}

PsiEstimate psi_hat(const ProcessSpec& spec, std::size_t lag, std::size_t depth, std::size_t k_max,
                    std::size_t trials, std::uint64_t seed, Execution ex)
{
    const std::size_t cells = cell_count(depth, k_max);
    require_ensemble(spec);
    require_trials(trials, 10'000);
    const PathSampler sampler(spec);
    const std::uint64_t base = stream_seed(seed, Stream::mixing);
    const auto words = map_trials<std::pair<long, long>>(
        trials,
        [&](std::size_t i) {
            const auto digits = sampler.digits(2 * depth + lag, derive_seed(base, i));
            return std::pair{cylinder_index(digits.data(), depth, k_max),
                             cylinder_index(digits.data() + depth + lag, depth, k_max)};
        },
        ex);
    std::vector<long> a(trials), b(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        a[i] = words[i].first;
        b[i] = words[i].second;
    }
    return psi_from_table(tabulate(a, b, cells), lag);
}

std::map<std::size_t, double> stationarity_check(const ProcessSpec& spec, const std::vector<std::size_t>& lags,
                                                 std::size_t depth, std::size_t k_max, std::size_t trials,
                                                 std::uint64_t seed, Execution ex)
{
    const std::size_t cells = cell_count(depth, k_max);
    require_ensemble(spec);
    require_trials(trials, 1'000);
    if (lags.empty())
        return {};
    const std::size_t max_lag = *std::max_element(lags.begin(), lags.end());
    const PathSampler sampler(spec);
    const std::uint64_t base = stream_seed(seed, Stream::mixing);
    // Slot j holds the word at offset lags[j]; the last slot is offset 0.
    const auto words = map_trials<std::vector<long>>(
        trials,
        [&](std::size_t i) {
            const auto digits = sampler.digits(depth + max_lag, derive_seed(base, i));
            std::vector<long> out;
            out.reserve(lags.size() + 1);
            for (std::size_t lag : lags)
                out.push_back(cylinder_index(digits.data() + lag, depth, k_max));
            out.push_back(cylinder_index(digits.data(), depth, k_max));
            return out;
        },
        ex);

    // Cell `cells` collects words outside the family.
    auto histogram = [&](std::size_t slot) {
        std::vector<double> h(cells + 1, 0.0);
        for (const auto& w : words)
            h[w[slot] >= 0 ? static_cast<std::size_t>(w[slot]) : cells] += 1.0;
        for (auto& x : h)
            x /= static_cast<double>(trials);
        return h;
    };
    const auto origin = histogram(lags.size());
    std::map<std::size_t, double> out;
    for (std::size_t j = 0; j < lags.size(); ++j) {
        const auto h = histogram(j);
        double tv = 0.0;
        for (std::size_t c = 0; c <= cells; ++c)
            tv += std::abs(h[c] - origin[c]);
        out[lags[j]] = 0.5 * tv;
    }
    return out;
}

double tv_noise_bound(std::size_t cells, std::size_t trials)
{
    // Mean: Cauchy-Schwarz over cells. Fluctuation: bounded differences, 1e-3 level.
    const auto n = static_cast<double>(trials);
    const auto k = static_cast<double>(cells + 1);
    return 0.5 * std::sqrt(2.0 * k / n) + std::sqrt(2.0 * std::log(1000.0) / n);
}

MixingEstimate mixing_report(const ProcessSpec& spec, const std::vector<std::size_t>& lags, std::size_t depth,
                             std::size_t k_max, std::size_t trials, std::uint64_t seed, Execution ex)
{
    MixingEstimate r;
    r.depth = depth;
    r.k_max = k_max;
    r.trials = trials;
    for (std::size_t lag : lags)
        r.lags.push_back(psi_hat(spec, lag, depth, k_max, trials, seed, ex));
    r.stationarity_tv = stationarity_check(spec, lags, depth, k_max, trials, seed, ex);
    r.tv_noise = tv_noise_bound(cell_count(depth, k_max), trials);
    return r;
}

MarginalReport marginal_check(const ProcessSpec& spec, std::size_t index, std::size_t trials, std::uint64_t seed,
                              Execution ex)
{
    require_ensemble(spec);
    require_trials(trials, 1'000);
    if (index < 1)
        throw DomainError("marginal_check: index is 1-based");
    const PathSampler sampler(spec);
    const std::uint64_t base = stream_seed(seed, Stream::mixing);
    const auto digits = map_trials<Digit>(
        trials, [&](std::size_t i) { return sampler.digits(index, derive_seed(base, i)).back(); }, ex);

    MarginalReport r;
    r.index = index;
    r.trials = trials;
    r.empirical.assign(kMarginalCutoff + 1, 0.0);
    r.expected.assign(kMarginalCutoff + 1, 0.0);
    for (Digit d : digits)
        r.empirical[std::min<Digit>(d, kMarginalCutoff + 1) - 1] += 1.0;
    double covered = 0.0;
    for (std::size_t k = 1; k <= kMarginalCutoff; ++k) {
        r.expected[k - 1] = gauss_kuzmin_pmf(k);
        covered += r.expected[k - 1];
    }
    r.expected[kMarginalCutoff] = 1.0 - covered;
    const auto n = static_cast<double>(trials);
    for (std::size_t c = 0; c < r.empirical.size(); ++c) {
        const double observed = r.empirical[c];
        const double expected = r.expected[c] * n;
        r.chi_squared += (observed - expected) * (observed - expected) / expected;
        r.empirical[c] /= n;
        r.total_variation += 0.5 * std::abs(r.empirical[c] - r.expected[c]);
        if (c < kMarginalCutoff)
            r.max_abs_diff = std::max(r.max_abs_diff, std::abs(r.empirical[c] - r.expected[c]));
    }
    r.dof = r.empirical.size() - 1;
    return r;
}

GaussMarginalReport gauss_marginal_check(std::size_t trials, std::uint64_t seed, Execution ex)
{
    require_trials(trials, 10'000);
    GaussMarginalReport r;
    r.marginal = marginal_check(ProcessSpec::gauss_stationary(kMinGaussPrecision), 1, trials, seed, ex);

    const std::uint64_t base = stream_seed(seed, Stream::mixing);
    const auto xs = map_trials<double>(
        trials, [&](std::size_t i) { return sample_gauss_real(derive_seed(base, i), kMinGaussPrecision).lo.get_d(); },
        ex);
    for (int j = 1; j <= 9; ++j) {
        const double x = std::exp2(j / 10.0) - 1.0;
        const auto below = std::count_if(xs.begin(), xs.end(), [x](double v) { return v <= x; });
        const double f = static_cast<double>(below) / static_cast<double>(trials);
        r.cdf_points.push_back(x);
        r.cdf_empirical.push_back(f);
        r.cdf_max_diff = std::max(r.cdf_max_diff, std::abs(f - j / 10.0));
    }
    return r;
}

} // namespace rcf
