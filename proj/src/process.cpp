#include "rcf/process.hpp"

#include "rcf/error.hpp"
#include "rcf/gauss_real.hpp"
#include "rcf/json_io.hpp"
#include "rcf/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rcf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

using Matrix = std::vector<std::vector<double>>;
using BoolMatrix = std::vector<std::vector<char>>;

void check_probability_vector(const std::vector<double>& v, const char* what)
{
    double sum = 0.0;
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw ConfigError(std::string(what) + ": entries must be finite and >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw ConfigError(std::string(what) + ": entries must sum to 1");
}

BoolMatrix bool_square(const BoolMatrix& m)
{
    const std::size_t k = m.size();
    BoolMatrix out(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (m[i][l])
                for (std::size_t j = 0; j < k; ++j)
                    out[i][j] |= m[l][j];
    return out;
}

// Primitive (irreducible and aperiodic) iff some power is entrywise positive;
// by Wielandt it suffices to test a power >= (K-1)^2 + 1.
bool is_primitive(const Matrix& t)
{
    const std::size_t k = t.size();
    BoolMatrix m(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            m[i][j] = t[i][j] > 0.0;
    const std::size_t bound = (k - 1) * (k - 1) + 1;
    for (std::size_t power = 1; power < bound; power *= 2)
        m = bool_square(m);
    for (const auto& row : m)
        if (std::find(row.begin(), row.end(), 0) != row.end())
            return false;
    return true;
}

std::vector<double> cumulative(const std::vector<double>& p)
{
    std::vector<double> c(p.size());
    std::partial_sum(p.begin(), p.end(), c.begin());
    c.back() = 1.0;
    return c;
}

std::size_t draw_index(const std::vector<double>& cum, double u)
{
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const auto idx = static_cast<std::size_t>(it - cum.begin());
    return std::min(idx, cum.size() - 1);
}

} // namespace

ProcessSpec ProcessSpec::iid(Distribution d)
{
    return ProcessSpec(process::Iid{d});
}

ProcessSpec ProcessSpec::markov(std::vector<std::vector<double>> transition, std::vector<double> initial)
{
    const std::size_t k = transition.size();
    if (k == 0)
        throw ConfigError("markov: transition matrix is empty");
    for (const auto& row : transition) {
        if (row.size() != k)
            throw ConfigError("markov: transition matrix must be square");
        check_probability_vector(row, "markov transition row");
    }
    if (!is_primitive(transition))
        throw ConfigError("markov: chain must be irreducible and aperiodic");
    if (initial.empty())
        initial = stationary_distribution(transition);
    if (initial.size() != k)
        throw ConfigError("markov: initial law must have one entry per state");
    check_probability_vector(initial, "markov initial law");
    return ProcessSpec(process::Markov{std::move(transition), std::move(initial)});
}

ProcessSpec ProcessSpec::gauss_stationary(unsigned precision_bits)
{
    if (precision_bits < 1)
        throw ConfigError("gauss_stationary: precision_bits must be positive");
    return ProcessSpec(process::GaussStationary{precision_bits});
}

ProcessSpec ProcessSpec::explicit_digits(std::vector<Digit> digits)
{
    if (std::find(digits.begin(), digits.end(), Digit{0}) != digits.end())
        throw ConfigError("explicit: digits must be >= 1");
    return ProcessSpec(process::Explicit{std::move(digits)});
}

std::string ProcessSpec::kind_name() const
{
    return std::visit(overloaded{
                          [](const process::Iid&) { return "iid"; },
                          [](const process::Markov&) { return "markov"; },
                          [](const process::GaussStationary&) { return "gauss_stationary"; },
                          [](const process::Explicit&) { return "explicit"; },
                      },
                      kind_);
}

bool ProcessSpec::is_random() const noexcept
{
    return !std::holds_alternative<process::Explicit>(kind_);
}

const Distribution* ProcessSpec::iid_distribution() const noexcept
{
    if (const auto* iid = std::get_if<process::Iid>(&kind_))
        return &iid->dist;
    return nullptr;
}

std::vector<double> stationary_distribution(const Matrix& transition)
{
    const std::size_t k = transition.size();
    std::vector<double> pi(k, 1.0 / static_cast<double>(k));
    std::vector<double> next(k);
    for (int iter = 0; iter < 100000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                next[j] += pi[i] * transition[i][j];
        const double total = std::accumulate(next.begin(), next.end(), 0.0);
        double diff = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            next[j] /= total;
            diff = std::max(diff, std::abs(next[j] - pi[j]));
        }
        pi.swap(next);
        if (diff < 1e-16)
            break;
    }
    return pi;
}

unsigned gauss_path_precision(unsigned floor_bits, std::size_t n)
{
    const auto needed = static_cast<unsigned>(4 * n);
    return std::max({floor_bits, needed, kMinGaussPrecision});
}

PathSampler::PathSampler(ProcessSpec spec) : spec_(std::move(spec)), spec_id_(spec_to_json(spec_).dump())
{
    if (const auto* mk = std::get_if<process::Markov>(&spec_.kind())) {
        for (const auto& row : mk->transition)
            cumulative_.push_back(cumulative(row));
        cumulative_.push_back(cumulative(mk->initial));
    }
}

std::vector<Digit> PathSampler::digits(std::size_t n, std::uint64_t seed) const
{
    return std::visit(
        overloaded{
            [&](const process::Iid& iid) {
                std::vector<Digit> out(n);
                TrialRng rng(seed);
                for (auto& d : out)
                    d = iid.dist.quantile_from_tail(rng.uniform_open());
                return out;
            },
            [&](const process::Markov&) {
                std::vector<Digit> out(n);
                TrialRng rng(seed);
                std::size_t state = draw_index(cumulative_.back(), rng.uniform_open());
                for (std::size_t i = 0; i < n; ++i) {
                    if (i > 0)
                        state = draw_index(cumulative_[state], rng.uniform_open());
                    out[i] = static_cast<Digit>(state + 1);
                }
                return out;
            },
            [&](const process::GaussStationary& g) {
                unsigned bits = gauss_path_precision(g.precision_bits, n);
                for (int attempt = 0; attempt < 4; ++attempt, bits *= 2) {
                    auto ex = partial_quotients_of_real(sample_gauss_real(seed, bits), n);
                    if (ex.digits.size() == n)
                        return std::move(ex.digits);
                }
                throw PrecisionError("gauss_stationary: precision exhausted before " + std::to_string(n) +
                                     " certified partial quotients");
            },
            [&](const process::Explicit& e) {
                if (e.digits.size() < n)
                    throw LengthError("explicit spec has " + std::to_string(e.digits.size()) +
                                      " digits, " + std::to_string(n) + " requested");
                return std::vector<Digit>(e.digits.begin(), e.digits.begin() + static_cast<std::ptrdiff_t>(n));
            },
        },
        spec_.kind());
}

PartialQuotientPath PathSampler::sample(std::size_t n, std::uint64_t seed) const
{
    return {digits(n, seed), seed, spec_id_};
}

PartialQuotientPath sample_path(const ProcessSpec& spec, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw LengthError("sample_path: n must be >= 1");
    return PathSampler(spec).sample(n, seed);
}

std::vector<NamedSpec> builtin_specs()
{
    return {
        {"constant1", ProcessSpec::iid(Distribution::constant(1))},
        {"constant2", ProcessSpec::iid(Distribution::constant(2))},
        {"uniform3", ProcessSpec::iid(Distribution::uniform(3))},
        {"geometric", ProcessSpec::iid(Distribution::geometric(0.5))},
        {"zeta3", ProcessSpec::iid(Distribution::zeta(3.0))},
        {"gauss_kuzmin", ProcessSpec::iid(Distribution::gauss_kuzmin())},
        {"markov2", ProcessSpec::markov({{0.3, 0.7}, {0.6, 0.4}})},
        {"gauss", ProcessSpec::gauss_stationary()},
    };
}

} // namespace rcf
