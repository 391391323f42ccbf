#include "rcf/gauss_real.hpp"

#include "rcf/error.hpp"
#include "rcf/seeding.hpp"

#include <mpfr.h>

#include <algorithm>
#include <utility>

namespace rcf {

namespace {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

private:
    mpfr_t v_;
};

mpq_class to_rational(const Mpfr& f)
{
    mpz_class mant;
    const mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), f.get());
    mpq_class q(mant);
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    q.canonicalize();
    return q;
}

// One Gauss-map step on num/den in (0,1): quot = floor(den/num), leaves (den mod num)/num.
void gauss_step(mpz_class& num, mpz_class& den, mpz_class& quot)
{
    mpz_class rem;
    mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
    den = num;
    num = std::move(rem);
}

bool fits_digit(const mpz_class& q)
{
    return mpz_fits_ulong_p(q.get_mpz_t()) != 0;
}

bool in_unit_open(const mpq_class& x)
{
    return sgn(x) > 0 && x < 1;
}

} // namespace

RealBracket gauss_inverse_cdf(const mpq_class& u, unsigned precision_bits)
{
    if (!in_unit_open(u))
        throw DomainError("gauss_inverse_cdf: u must lie in (0,1)");
    const auto prec = static_cast<mpfr_prec_t>(precision_bits) + 64;
    Mpfr ulo(prec), uhi(prec), lo(prec), hi(prec);
    mpfr_set_q(ulo.get(), u.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(uhi.get(), u.get_mpq_t(), MPFR_RNDU);
    mpfr_exp2(lo.get(), ulo.get(), MPFR_RNDD);
    mpfr_exp2(hi.get(), uhi.get(), MPFR_RNDU);
    mpfr_sub_ui(lo.get(), lo.get(), 1, MPFR_RNDD);
    mpfr_sub_ui(hi.get(), hi.get(), 1, MPFR_RNDU);
    return {to_rational(lo), to_rational(hi)};
}

RealBracket sample_gauss_real(std::uint64_t seed, unsigned precision_bits)
{
    if (precision_bits < kMinGaussPrecision)
        throw DomainError("sample_gauss_real: precision_bits must be >= 64");
    TrialRng rng(seed);
    mpz_class k;
    unsigned filled = 0;
    while (filled < precision_bits) {
        const unsigned take = std::min(64u, precision_bits - filled);
        std::uint64_t word = rng.next();
        if (take < 64)
            word >>= (64 - take);
        mpz_mul_2exp(k.get_mpz_t(), k.get_mpz_t(), take);
        mpz_class w;
        mpz_import(w.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
        k += w;
        filled += take;
    }
    mpq_class u(2 * k + 1);
    mpq_div_2exp(u.get_mpq_t(), u.get_mpq_t(), precision_bits + 1);
    u.canonicalize();
    return gauss_inverse_cdf(u, precision_bits);
}

Expansion partial_quotients_of_real(const mpq_class& x, std::size_t n)
{
    if (!in_unit_open(x))
        throw DomainError("partial_quotients_of_real: x must lie in (0,1)");
    Expansion out;
    mpz_class num = x.get_num();
    mpz_class den = x.get_den();
    mpz_class quot;
    while (out.digits.size() < n) {
        if (num == 0) {
            out.status = ExpansionStatus::terminated;
            return out;
        }
        gauss_step(num, den, quot);
        if (!fits_digit(quot))
            throw DomainError("partial_quotients_of_real: partial quotient exceeds 64 bits");
        out.digits.push_back(static_cast<Digit>(mpz_get_ui(quot.get_mpz_t())));
    }
    return out;
}

Expansion partial_quotients_of_real(const RealBracket& x, std::size_t n)
{
    if (!in_unit_open(x.lo) || !in_unit_open(x.hi) || x.hi < x.lo)
        throw DomainError("partial_quotients_of_real: bracket must lie in (0,1)");
    if (x.lo == x.hi)
        return partial_quotients_of_real(x.lo, n);

    Expansion out;
    mpz_class ln = x.lo.get_num(), ld = x.lo.get_den();
    mpz_class hn = x.hi.get_num(), hd = x.hi.get_den();
    mpz_class lq, hq;
    while (out.digits.size() < n) {
        gauss_step(ln, ld, lq);
        gauss_step(hn, hd, hq);
        // A digit is certified only if both endpoints share it and neither
        // endpoint is the rational boundary of that cylinder.
        if (lq != hq || ln == 0 || hn == 0 || !fits_digit(lq)) {
            out.status = ExpansionStatus::precision_exhausted;
            return out;
        }
        out.digits.push_back(static_cast<Digit>(mpz_get_ui(lq.get_mpz_t())));
    }
    return out;
}

} // namespace rcf
