#pragma once

#include "rcf/distribution.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rcf {

// A real number known only through exact rational bounds lo <= x <= hi.
struct RealBracket {
    mpq_class lo;
    mpq_class hi;

    mpq_class width() const { return hi - lo; }
};

enum class ExpansionStatus {
    complete,            // n digits produced
    terminated,          // rational input ran out of digits before n
    precision_exhausted, // bracket no longer fits inside one cylinder
};

struct Expansion {
    std::vector<Digit> digits;
    ExpansionStatus status = ExpansionStatus::complete;
};

inline constexpr unsigned kMinGaussPrecision = 64;

// x = 2^u - 1 for u = (2k+1) / 2^(bits+1), k drawn uniformly from the
// `bits`-bit integers of the stream `seed`. The leading bits of k do not
// depend on `precision_bits`, so raising the precision refines the same real.
// Returns an outward-rounded bracket of width about 2^-(bits+64).
RealBracket sample_gauss_real(std::uint64_t seed, unsigned precision_bits);

// Bracket of 2^u - 1 for an exact u in (0,1), computed at `precision_bits` + 64 bits.
RealBracket gauss_inverse_cdf(const mpq_class& u, unsigned precision_bits);

// Continued fraction digits by iterating the Gauss map. Rational input is
// expanded exactly (Euclid); bracket input yields only the digits shared by
// every point of the bracket. Both throw DomainError unless 0 < x < 1.
Expansion partial_quotients_of_real(const mpq_class& x, std::size_t n);
Expansion partial_quotients_of_real(const RealBracket& x, std::size_t n);

} // namespace rcf
