#include "rcf/convergents.hpp"

#include "rcf/error.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rcf {

namespace {

constexpr mpfr_prec_t kLogPrecision = 128;
constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x)
{
    return std::nextafter(x, -kInf);
}

double up(double x)
{
    return std::nextafter(x, kInf);
}

struct MpfrScratch {
    mpfr_t v;
    MpfrScratch() { mpfr_init2(v, kLogPrecision); }
    ~MpfrScratch() { mpfr_clear(v); }
    MpfrScratch(const MpfrScratch&) = delete;
    MpfrScratch& operator=(const MpfrScratch&) = delete;
};

double q_to_double(const mpq_class& q)
{
    return q.get_d();
}

// Rational interval [lo, hi] with lo <= hi.
struct QInterval {
    mpq_class lo;
    mpq_class hi;
};

QInterval ordered(mpq_class a, mpq_class b)
{
    if (b < a)
        std::swap(a, b);
    return {std::move(a), std::move(b)};
}

QInterval abs_interval(const QInterval& x)
{
    if (sgn(x.lo) >= 0)
        return x;
    if (sgn(x.hi) <= 0)
        return {-x.hi, -x.lo};
    return {mpq_class(0), std::max(mpq_class(-x.lo), x.hi)};
}

bool q_meets(const QInterval& a, const QInterval& b)
{
    return a.lo <= b.hi && b.lo <= a.hi;
}

// Distance between two rational intervals (0 when they meet).
double q_gap(const QInterval& a, const QInterval& b)
{
    if (a.hi < b.lo)
        return q_to_double(b.lo - a.hi);
    if (b.hi < a.lo)
        return q_to_double(a.lo - b.hi);
    return 0.0;
}

Interval log_interval_nonneg(const QInterval& x)
{
    const double lo = sgn(x.lo) > 0 ? log_interval(x.lo).lo : -kInf;
    return {lo, log_interval(x.hi).hi};
}

} // namespace

ConvergentState init()
{
    return {};
}

void step_in_place(ConvergentState& s, Digit a)
{
    if (a == 0)
        throw DomainError("step: partial quotient must be >= 1");
    // (prev, cur) <- (cur, a*cur + prev)
    mpz_addmul_ui(s.p_prev.get_mpz_t(), s.p_cur.get_mpz_t(), a);
    mpz_addmul_ui(s.q_prev.get_mpz_t(), s.q_cur.get_mpz_t(), a);
    mpz_swap(s.p_prev.get_mpz_t(), s.p_cur.get_mpz_t());
    mpz_swap(s.q_prev.get_mpz_t(), s.q_cur.get_mpz_t());
    ++s.n;
}

ConvergentState step(const ConvergentState& s, Digit a)
{
    ConvergentState next = s;
    step_in_place(next, a);
    return next;
}

ConvergentState convergent_of(std::span<const Digit> digits)
{
    ConvergentState s = init();
    for (Digit a : digits)
        step_in_place(s, a);
    return s;
}

double Interval::gap(const Interval& o) const
{
    if (hi < o.lo)
        return o.lo - hi;
    if (o.hi < lo)
        return lo - o.hi;
    return 0.0;
}

Interval operator+(const Interval& a, const Interval& b)
{
    return {down(a.lo + b.lo), up(a.hi + b.hi)};
}

Interval operator/(const Interval& a, double n)
{
    return {down(a.lo / n), up(a.hi / n)};
}

Interval log_interval(const mpz_class& x)
{
    if (sgn(x) <= 0)
        throw DomainError("log_interval: argument must be positive");
    MpfrScratch t;
    Interval out;
    mpfr_set_z(t.v, x.get_mpz_t(), MPFR_RNDD);
    mpfr_log(t.v, t.v, MPFR_RNDD);
    out.lo = mpfr_get_d(t.v, MPFR_RNDD);
    mpfr_set_z(t.v, x.get_mpz_t(), MPFR_RNDU);
    mpfr_log(t.v, t.v, MPFR_RNDU);
    out.hi = mpfr_get_d(t.v, MPFR_RNDU);
    return out;
}

Interval log_interval(const mpq_class& x)
{
    if (sgn(x) <= 0)
        throw DomainError("log_interval: argument must be positive");
    MpfrScratch t;
    Interval out;
    mpfr_set_q(t.v, x.get_mpq_t(), MPFR_RNDD);
    mpfr_log(t.v, t.v, MPFR_RNDD);
    out.lo = mpfr_get_d(t.v, MPFR_RNDD);
    mpfr_set_q(t.v, x.get_mpq_t(), MPFR_RNDU);
    mpfr_log(t.v, t.v, MPFR_RNDU);
    out.hi = mpfr_get_d(t.v, MPFR_RNDU);
    return out;
}

double log_of(const mpz_class& x)
{
    if (sgn(x) <= 0)
        throw DomainError("log_of: argument must be positive");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

double TailApprox::midpoint() const
{
    mpq_class mid = (value_lo + value_hi) / 2;
    return mid.get_d();
}

TailApprox tail_values(std::span<const Digit> digits, std::size_t k, std::size_t m)
{
    if (m < 1 || k < 1)
        throw DomainError("tail_values: k and m must be >= 1");
    if (k - 1 + m > digits.size())
        throw LengthError("tail_values: need digits " + std::to_string(k) + ".." + std::to_string(k + m - 1) +
                          ", path has " + std::to_string(digits.size()));
    const auto s = convergent_of(digits.subspan(k - 1, m));
    mpq_class a(s.p_cur, s.q_cur);
    mpq_class b(mpz_class(s.p_cur + s.p_prev), mpz_class(s.q_cur + s.q_prev));
    a.canonicalize();
    b.canonicalize();
    auto iv = ordered(std::move(a), std::move(b));
    return {k, m, std::move(iv.lo), std::move(iv.hi)};
}

std::vector<double> levy_trajectory(std::span<const Digit> digits)
{
    std::vector<double> out;
    out.reserve(digits.size());
    ConvergentState s = init();
    for (Digit a : digits) {
        step_in_place(s, a);
        out.push_back(log_of(s.q_cur) / static_cast<double>(s.n));
    }
    return out;
}

IdentityReport identity_suite(std::span<const Digit> digits, std::size_t m, Recurrence recurrence)
{
    const std::size_t len = digits.size();
    if (len < 1)
        throw LengthError("identity_suite: empty path");
    if (m < 1)
        throw DomainError("identity_suite: truncation depth must be >= 1");

    // P[i], Q[i] hold P_{i-1}, Q_{i-1}, i = 0 .. len+1.
    std::vector<mpz_class> P(len + 2), Q(len + 2);
    P[0] = 1, Q[0] = 0, P[1] = 0, Q[1] = 1;
    for (std::size_t n = 1; n <= len; ++n) {
        P[n + 1] = digits[n - 1] * P[n] + P[n - 1];
        Q[n + 1] = digits[n - 1] * Q[n] + Q[n - 1];
        if (recurrence == Recurrence::corrupted && n == 3)
            P[n + 1] += 1;
    }
    auto Pn = [&](std::size_t n) -> const mpz_class& { return P[n + 1]; };
    auto Qn = [&](std::size_t n) -> const mpz_class& { return Q[n + 1]; };
    auto Pm1 = [&](std::size_t n) -> const mpz_class& { return P[n]; };     // P_{n-1}
    auto Qm1 = [&](std::size_t n) -> const mpz_class& { return Q[n]; };     // Q_{n-1}
    auto Pm2 = [&](std::size_t n) -> const mpz_class& { return P[n - 1]; }; // P_{n-2}
    auto Qm2 = [&](std::size_t n) -> const mpz_class& { return Q[n - 1]; }; // Q_{n-2}

    IdentityReport rep;
    for (std::size_t n = 1; n <= len; ++n) {
        const int sign_prev = (n % 2 == 1) ? 1 : -1; // (-1)^(n-1)
        mpz_class d = Pn(n) * Qm1(n) - Qn(n) * Pm1(n) - sign_prev;
        if (d != 0) {
            rep.determinant_ok = false;
            rep.determinant_residual = std::max(rep.determinant_residual, std::abs(d.get_d()));
        }
        mpz_class a(digits[n - 1]);
        mpz_class d2 = Pn(n) * Qm2(n) - Qn(n) * Pm2(n) + sign_prev * a; // (-1)^n = -(-1)^(n-1)
        if (d2 != 0) {
            rep.second_determinant_ok = false;
            rep.second_determinant_residual = std::max(rep.second_determinant_residual, std::abs(d2.get_d()));
        }
        if (Qn(n) < Qm1(n) + Qm2(n))
            rep.growth_ok = false;
        mpz_class sq = Qn(n) * Qn(n);
        mpz_class pow2;
        mpz_ui_pow_ui(pow2.get_mpz_t(), 2, n - 1);
        if (sq < pow2)
            rep.growth_ok = false;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), Pn(n).get_mpz_t(), Qn(n).get_mpz_t());
        if (g != 1)
            rep.growth_ok = false;
        ++rep.exact_checked;
    }

    if (len < m + 1)
        return rep;

    const TailApprox x1 = tail_values(digits, 1, len);
    const QInterval x1i{x1.value_lo, x1.value_hi};
    Interval log_product{0.0, 0.0};
    for (std::size_t n = 1; n + m <= len; ++n) {
        const TailApprox xn = tail_values(digits, n, m);
        log_product = log_product + Interval{log_interval(xn.value_lo).lo, log_interval(xn.value_hi).hi};

        const TailApprox next = tail_values(digits, n + 1, m);
        auto mobius = [&](const mpq_class& x) {
            mpq_class v = Pn(n) + x * Pm1(n);
            v /= mpq_class(Qn(n) + x * Qm1(n));
            return v;
        };
        const QInterval mob = ordered(mobius(next.value_lo), mobius(next.value_hi));
        if (!q_meets(mob, x1i)) {
            rep.mobius_ok = false;
            rep.mobius_gap = std::max(rep.mobius_gap, q_gap(mob, x1i));
        }

        const mpq_class conv(Pm1(n), Qm1(n));
        const QInterval dist = abs_interval(ordered(x1.value_lo - conv, x1.value_hi - conv));
        const mpq_class qq(mpz_class(Qn(n) * Qm1(n)));
        const QInterval target{1 / (2 * qq), 1 / qq};
        if (!q_meets(dist, target)) {
            rep.approximation_ok = false;
            rep.approximation_gap = std::max(rep.approximation_gap, q_gap(dist, target));
        }

        const mpq_class q1(Qm1(n)), p1(Pm1(n));
        const QInterval rhs = abs_interval(ordered(x1.value_lo * q1 - p1, x1.value_hi * q1 - p1));
        const Interval log_rhs = log_interval_nonneg(rhs);
        if (!log_product.intersects(log_rhs)) {
            rep.product_ok = false;
            rep.product_gap = std::max(rep.product_gap, log_product.gap(log_rhs));
        }
        ++rep.interval_checked;
    }
    return rep;
}

SandwichReport sandwich_check(std::span<const Digit> digits, std::size_t m)
{
    if (m < 1)
        throw DomainError("sandwich_check: truncation depth must be >= 1");
    if (digits.size() < m)
        throw LengthError("sandwich_check: path shorter than truncation depth");
    SandwichReport rep;
    rep.residual = -kInf;
    ConvergentState s = init();
    Interval sum_log_x{0.0, 0.0};
    const std::size_t last = digits.size() - m + 1;
    for (std::size_t n = 1; n <= last; ++n) {
        step_in_place(s, digits[n - 1]);
        const TailApprox xn = tail_values(digits, n, m);
        sum_log_x = sum_log_x + Interval{log_interval(xn.value_lo).lo, log_interval(xn.value_hi).hi};
        const Interval total = (log_interval(s.q_cur) + sum_log_x) / static_cast<double>(n);
        const double abs_upper = std::max(std::abs(total.lo), std::abs(total.hi));
        const double bound = std::numbers::ln2 / static_cast<double>(n);
        rep.residual = std::max(rep.residual, abs_upper - bound);
        rep.slack = std::max(rep.slack, total.width());
        ++rep.checked;
    }
    return rep;
}

} // namespace rcf
