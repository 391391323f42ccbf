#include "rcf/distribution.hpp"

#include "rcf/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace rcf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// sum_{k >= N} k^(-s) by Euler-Maclaurin; N >= 64 keeps the remainder below 1e-20 relative.
double zeta_tail_from(double s, double N)
{
    const double a = std::pow(N, -s);
    double t = N * a / (s - 1.0) + 0.5 * a;
    t += s * a / (12.0 * N);
    t -= s * (s + 1) * (s + 2) * a / (720.0 * N * N * N);
    t += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * a / (30240.0 * std::pow(N, 5));
    return t;
}

constexpr Digit kZetaDirect = std::tuple_size_v<decltype(dist::Zeta::head_tail)>;

double zeta_tail_count(double s, Digit k)
{
    // sum_{j > k} j^(-s)
    if (k + 1 >= kZetaDirect)
        return zeta_tail_from(s, static_cast<double>(k + 1));
    double t = zeta_tail_from(s, static_cast<double>(kZetaDirect));
    for (Digit j = kZetaDirect - 1; j > k; --j)
        t += std::pow(static_cast<double>(j), -s);
    return t;
}

double gauss_kuzmin_tail(Digit k)
{
    // log2((k+2)/(k+1))
    return std::log1p(1.0 / (static_cast<double>(k) + 1.0)) / std::numbers::ln2;
}

// Smallest k >= 1 with tail(k) <= v, starting from a guess and walking.
Digit refine_quantile(Digit guess, double v, const std::function<double(Digit)>& tail)
{
    Digit k = guess < 1 ? 1 : guess;
    while (k > 1 && tail(k - 1) <= v)
        --k;
    while (tail(k) > v)
        ++k;
    return k;
}

Digit guess_from_double(double x)
{
    if (!(x >= 1.0))
        return 1;
    constexpr double cap = 0x1.0p62;
    return x >= cap ? static_cast<Digit>(cap) : static_cast<Digit>(std::ceil(x));
}

// Convex decreasing tail of a series beyond K: with F(a) = int_a^inf f,
// F(K) - f(K)/2 <= sum_{k>K} f(k) <= F(K + 1/2).
struct TailBracket {
    double lo;
    double hi;
    double quad_error;
};

TailBracket convex_tail(const std::function<double(double)>& f, double K)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    double err_a = 0.0;
    double err_b = 0.0;
    const double from_k = integrator.integrate(f, K, std::numeric_limits<double>::infinity(), 1e-14, &err_a);
    const double from_half =
        integrator.integrate(f, K + 0.5, std::numeric_limits<double>::infinity(), 1e-14, &err_b);
    return {from_k - 0.5 * f(K), from_half, err_a + err_b};
}

// sum_{k>=1} weight(k) pmf(k) for an infinite-support family whose summand
// is convex and decreasing on [1024, inf).
SeriesValue infinite_series(const std::function<double(double)>& summand)
{
    constexpr Digit kStart = 1024;
    constexpr Digit kMax = Digit{1} << 24;
    SeriesValue out;
    for (Digit K = kStart; K <= kMax; K *= 2) {
        double head = 0.0;
        for (Digit k = K; k >= 1; --k)
            head += summand(static_cast<double>(k));
        const auto tb = convex_tail(summand, static_cast<double>(K));
        if (!std::isfinite(tb.lo) || !std::isfinite(tb.hi)) {
            out.converged = false;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        out.value = head + 0.5 * (tb.lo + tb.hi);
        out.error_bound = 0.5 * std::abs(tb.hi - tb.lo) + tb.quad_error;
        out.terms = K;
        if (out.error_bound < kSeriesTolerance)
            return out;
    }
    out.converged = false;
    return out;
}

SeriesValue finite_series(Digit kmax, const std::function<double(Digit)>& term)
{
    SeriesValue out;
    for (Digit k = kmax; k >= 1; --k)
        out.value += term(k);
    out.terms = kmax;
    return out;
}

std::function<double(double)> continuous_pmf(const Distribution& d)
{
    return std::visit(
        overloaded{
            [](const dist::Geometric& g) -> std::function<double(double)> {
                const double p = g.p;
                return [p](double x) { return p * std::exp((x - 1.0) * std::log1p(-p)); };
            },
            [](const dist::Zeta& z) -> std::function<double(double)> {
                const double s = z.s;
                const double norm = z.norm;
                return [s, norm](double x) { return std::pow(x, -s) / norm; };
            },
            [](const dist::GaussKuzmin&) -> std::function<double(double)> {
                return [](double x) { return std::log1p(1.0 / (x * (x + 2.0))) / std::numbers::ln2; };
            },
            [](const auto&) -> std::function<double(double)> { return {}; },
        },
        d.family());
}

SeriesValue weighted_series(const Distribution& d, const std::function<double(double)>& weight)
{
    if (const Digit kmax = d.support_max(); kmax != 0)
        return finite_series(kmax, [&](Digit k) { return weight(static_cast<double>(k)) * d.pmf(k); });
    const auto pmf = continuous_pmf(d);
    return infinite_series([&](double x) { return weight(x) * pmf(x); });
}

} // namespace

Distribution Distribution::constant(Digit a)
{
    if (a < 1)
        throw DomainError("constant distribution needs a >= 1");
    return Distribution(dist::Constant{a});
}

Distribution Distribution::uniform(Digit K)
{
    if (K < 1)
        throw DomainError("uniform distribution needs K >= 1");
    return Distribution(dist::Uniform{K});
}

Distribution Distribution::geometric(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("geometric distribution needs p in (0,1)");
    return Distribution(dist::Geometric{p});
}

Distribution Distribution::zeta(double s)
{
    if (!(s > 2.0) || !std::isfinite(s))
        throw DomainError("zeta distribution needs s > 2");
    dist::Zeta z{s, boost::math::zeta(s), {}};
    for (Digit k = 0; k < kZetaDirect; ++k)
        z.head_tail[k] = zeta_tail_count(s, k);
    return Distribution(z);
}

Distribution Distribution::gauss_kuzmin()
{
    return Distribution(dist::GaussKuzmin{});
}

std::string Distribution::name() const
{
    return std::visit(overloaded{
                          [](const dist::Constant& c) { return "constant(" + std::to_string(c.a) + ")"; },
                          [](const dist::Uniform& u) { return "uniform(" + std::to_string(u.K) + ")"; },
                          [](const dist::Geometric& g) { return "geometric(" + std::to_string(g.p) + ")"; },
                          [](const dist::Zeta& z) { return "zeta(" + std::to_string(z.s) + ")"; },
                          [](const dist::GaussKuzmin&) { return std::string("gauss_kuzmin"); },
                      },
                      family_);
}

double Distribution::pmf(Digit k) const
{
    if (k < 1)
        return 0.0;
    return std::visit(overloaded{
                          [k](const dist::Constant& c) { return k == c.a ? 1.0 : 0.0; },
                          [k](const dist::Uniform& u) { return k <= u.K ? 1.0 / static_cast<double>(u.K) : 0.0; },
                          [k](const dist::Geometric& g) {
                              return g.p * std::exp(static_cast<double>(k - 1) * std::log1p(-g.p));
                          },
                          [k](const dist::Zeta& z) {
                              return std::pow(static_cast<double>(k), -z.s) / z.norm;
                          },
                          [k](const dist::GaussKuzmin&) { return gauss_kuzmin_pmf(k); },
                      },
                      family_);
}

double Distribution::tail(Digit k) const
{
    return std::visit(overloaded{
                          [k](const dist::Constant& c) { return k < c.a ? 1.0 : 0.0; },
                          [k](const dist::Uniform& u) {
                              return k >= u.K ? 0.0 : static_cast<double>(u.K - k) / static_cast<double>(u.K);
                          },
                          [k](const dist::Geometric& g) { return std::exp(static_cast<double>(k) * std::log1p(-g.p)); },
                          [k](const dist::Zeta& z) {
                              const double t = k < kZetaDirect ? z.head_tail[k] : zeta_tail_count(z.s, k);
                              return t / z.norm;
                          },
                          [k](const dist::GaussKuzmin&) { return gauss_kuzmin_tail(k); },
                      },
                      family_);
}

Digit Distribution::quantile_from_tail(double v) const
{
    if (!(v > 0.0 && v < 1.0))
        throw DomainError("quantile_from_tail needs v in (0,1)");
    const auto tail_fn = [this](Digit k) { return tail(k); };
    return std::visit(
        overloaded{
            [](const dist::Constant& c) { return c.a; },
            [v](const dist::Uniform& u) {
                // tail(k) <= v  <=>  k >= K (1 - v)
                const auto guess = static_cast<Digit>(std::ceil(static_cast<double>(u.K) * (1.0 - v)));
                Digit k = guess < 1 ? 1 : (guess > u.K ? u.K : guess);
                while (k > 1 && static_cast<double>(u.K - (k - 1)) <= v * static_cast<double>(u.K))
                    --k;
                while (static_cast<double>(u.K - k) > v * static_cast<double>(u.K))
                    ++k;
                return k;
            },
            [&](const dist::Geometric& g) {
                return refine_quantile(guess_from_double(std::log(v) / std::log1p(-g.p)), v, tail_fn);
            },
            [&](const dist::Zeta&) {
                Digit k = 1;
                while (k < kZetaDirect && tail(k) > v)
                    ++k;
                if (tail(k) <= v)
                    return k;
                // Exponential search then bisection on the monotone tail.
                Digit lo = k;
                Digit hi = 2 * k;
                while (tail(hi) > v)
                    hi *= 2;
                while (hi - lo > 1) {
                    const Digit mid = lo + (hi - lo) / 2;
                    if (tail(mid) > v)
                        lo = mid;
                    else
                        hi = mid;
                }
                return hi;
            },
            [&](const dist::GaussKuzmin&) {
                // log2(1 + 1/(k+1)) <= v  <=>  k + 1 >= 1 / (2^v - 1)
                return refine_quantile(guess_from_double(1.0 / std::expm1(v * std::numbers::ln2) - 1.0), v, tail_fn);
            },
        },
        family_);
}

Digit Distribution::support_max() const
{
    return std::visit(overloaded{
                          [](const dist::Constant& c) { return c.a; },
                          [](const dist::Uniform& u) { return u.K; },
                          [](const auto&) { return Digit{0}; },
                      },
                      family_);
}

double gauss_kuzmin_pmf(Digit k)
{
    if (k == 0)
        throw DomainError("gauss_kuzmin_pmf: k must be >= 1");
    const double kd = static_cast<double>(k);
    return std::log1p(1.0 / (kd * (kd + 2.0))) / std::numbers::ln2;
}

SeriesValue expected_log_a1(const Distribution& d)
{
    return weighted_series(d, [](double x) { return std::log(x); });
}

SeriesValue moment_a1(const Distribution& d, double t)
{
    if (!(t > 0.0 && t < 1.0))
        throw DomainError("moment_a1: t must lie in (0,1)");
    return weighted_series(d, [t](double x) { return std::pow(x, t); });
}

} // namespace rcf
