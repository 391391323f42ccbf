#pragma once

#include "rcf/distribution.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <vector>

namespace rcf {

// (P_{n-1}, P_n, Q_{n-1}, Q_n) after n partial quotients; init() is the
// n = 0 convention P_{-1} = 1, Q_{-1} = 0, P_0 = 0, Q_0 = 1.
struct ConvergentState {
    std::size_t n = 0;
    mpz_class p_prev = 1;
    mpz_class p_cur = 0;
    mpz_class q_prev = 0;
    mpz_class q_cur = 1;

    bool operator==(const ConvergentState&) const = default;
};

ConvergentState init();

// P_n = a P_{n-1} + P_{n-2}, Q_n = a Q_{n-1} + Q_{n-2}. Throws DomainError for a = 0.
ConvergentState step(const ConvergentState& s, Digit a);
void step_in_place(ConvergentState& s, Digit a);

// Convergent after consuming all of `digits`.
ConvergentState convergent_of(std::span<const Digit> digits);

// Closed interval of doubles; arithmetic rounds outward.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    // Distance between the two intervals, 0 when they meet.
    double gap(const Interval& o) const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, double n);

// Outward-rounded natural logs of exact positive values.
Interval log_interval(const mpz_class& x);
Interval log_interval(const mpq_class& x);

// ln of an arbitrary-precision positive integer from its leading bits and bit
// length; relative error well below 1e-15.
double log_of(const mpz_class& x);

// Certified rational bracket of the tail value X_k = [A_k, A_{k+1}, ...].
struct TailApprox {
    std::size_t k = 1;
    std::size_t depth = 0;
    mpq_class value_lo;
    mpq_class value_hi;

    mpq_class width() const { return value_hi - value_lo; }
    double midpoint() const;
};

// Brackets X_k (1-based k) from digits k .. k+m-1: X_k lies between P_m/Q_m and
// (P_m + P_{m-1})/(Q_m + Q_{m-1}), a width of 1/(Q_m (Q_m + Q_{m-1})) <= 2^-(m-1).
// Throws LengthError if those digits are not all present, DomainError for m < 1.
TailApprox tail_values(std::span<const Digit> digits, std::size_t k, std::size_t m);

// (1/n) ln Q_n for n = 1 .. digits.size().
std::vector<double> levy_trajectory(std::span<const Digit> digits);

struct IdentityReport {
    std::size_t exact_checked = 0;    // values of n tested for the integer identities
    std::size_t interval_checked = 0; // values of n tested for the interval identities

    bool determinant_ok = true;       // P_n Q_{n-1} - Q_n P_{n-1} = (-1)^(n-1)
    bool second_determinant_ok = true; // P_n Q_{n-2} - Q_n P_{n-2} = (-1)^n A_n
    bool mobius_ok = true;            // X_1 = (P_n + X_{n+1} P_{n-1}) / (Q_n + X_{n+1} Q_{n-1})
    bool approximation_ok = true;     // 1/(2 Q_n Q_{n-1}) <= |X_1 - P_{n-1}/Q_{n-1}| <= 1/(Q_n Q_{n-1})
    bool product_ok = true;           // X_1 ... X_n = |X_1 Q_{n-1} - P_{n-1}|, compared in log space
    bool growth_ok = true;            // Q_n >= Q_{n-1} + Q_{n-2}, Q_n >= 2^((n-1)/2), gcd(P_n, Q_n) = 1

    double determinant_residual = 0.0;
    double second_determinant_residual = 0.0;
    double mobius_gap = 0.0;
    double approximation_gap = 0.0;
    double product_gap = 0.0;

    bool all_pass() const
    {
        return determinant_ok && second_determinant_ok && mobius_ok && approximation_ok && product_ok && growth_ok;
    }
};

enum class Recurrence {
    exact,
    corrupted, // perturbs P_3 by one; exists only to prove the checks can fail
};

// Integer identities for every n <= len; interval identities for every n with
// digits n+1 .. n+m available.
IdentityReport identity_suite(std::span<const Digit> digits, std::size_t m,
                              Recurrence recurrence = Recurrence::exact);

struct SandwichReport {
    // max_n of (upper bound of |(1/n) ln Q_n + (1/n) sum_{k<=n} ln X_k| - (ln 2)/n)
    double residual = 0.0;
    // max_n of the propagated interval width, divided by n
    double slack = 0.0;
    std::size_t checked = 0;
};

// Checks n = 1 .. len-m+1 (each X_k bracketed at depth m). Throws LengthError if len < m.
SandwichReport sandwich_check(std::span<const Digit> digits, std::size_t m);

} // namespace rcf
