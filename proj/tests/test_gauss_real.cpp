#include "oracles.hpp"

#include "rcf/error.hpp"
#include "rcf/gauss_real.hpp"
#include "rcf/process.hpp"

#include <doctest.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>

using namespace rcf;

namespace {

mpq_class to_mpq(mpfr_t x)
{
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

// Outward bracket of (sqrt 5 - 1)/2 at `bits` bits.
RealBracket golden_conjugate(unsigned bits)
{
    mpfr_t lo, hi;
    mpfr_inits2(bits, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_sqrt_ui(lo, 5, MPFR_RNDD);
    mpfr_sub_ui(lo, lo, 1, MPFR_RNDD);
    mpfr_div_2ui(lo, lo, 1, MPFR_RNDD);
    mpfr_sqrt_ui(hi, 5, MPFR_RNDU);
    mpfr_sub_ui(hi, hi, 1, MPFR_RNDU);
    mpfr_div_2ui(hi, hi, 1, MPFR_RNDU);
    RealBracket r{to_mpq(lo), to_mpq(hi)};
    mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
    return r;
}

} // namespace

TEST_CASE("rational expansions follow Euclid for every p < q <= 200")
{
    for (unsigned long q = 2; q <= 200; ++q) {
        for (unsigned long p = 1; p < q; ++p) {
            const auto ex = partial_quotients_of_real(mpq_class(p, q), 1000);
            const auto expected = oracle::euclid(p, q);
            REQUIRE(ex.digits.size() == expected.size());
            CHECK(std::equal(ex.digits.begin(), ex.digits.end(), expected.begin()));
            CHECK(ex.status == ExpansionStatus::terminated);
        }
    }
}

TEST_CASE("small rational examples")
{
    CHECK(partial_quotients_of_real(mpq_class(7, 10), 3).digits == std::vector<Digit>{1, 2, 3});
    CHECK(partial_quotients_of_real(mpq_class(7, 10), 3).status == ExpansionStatus::complete);
    const auto third = partial_quotients_of_real(mpq_class(1, 3), 5);
    CHECK(third.digits == std::vector<Digit>{3});
    CHECK(third.status == ExpansionStatus::terminated);
    CHECK_THROWS_AS(partial_quotients_of_real(mpq_class(0), 3), DomainError);
    CHECK_THROWS_AS(partial_quotients_of_real(mpq_class(1), 3), DomainError);
    CHECK_THROWS_AS(partial_quotients_of_real(mpq_class(3, 2), 3), DomainError);
}

TEST_CASE("golden conjugate gives ones")
{
    const auto ex = partial_quotients_of_real(golden_conjugate(200), 20);
    CHECK(ex.digits == std::vector<Digit>(20, 1));
    // 200 bits certify far fewer than 1000 quotients.
    const auto many = partial_quotients_of_real(golden_conjugate(200), 1000);
    CHECK(many.status == ExpansionStatus::precision_exhausted);
    CHECK(many.digits.size() > 100);
    CHECK(many.digits.size() < 200);
}

TEST_CASE("inverse cdf at one half")
{
    const auto r = gauss_inverse_cdf(mpq_class(1, 2), 128);
    const double mid = (r.lo.get_d() + r.hi.get_d()) / 2;
    CHECK(mid == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
    CHECK(r.lo < r.hi);
    CHECK(mpq_class(r.hi - r.lo) < mpq_class(1, 1) / mpq_class(mpz_class(1) << 128));
    // sqrt 2 - 1 is irrational, so it lies strictly inside.
    const mpq_class lo2 = (r.lo + 1) * (r.lo + 1);
    const mpq_class hi2 = (r.hi + 1) * (r.hi + 1);
    CHECK(lo2 < 2);
    CHECK(hi2 > 2);
}

TEST_CASE("gauss reals: distribution and prefix consistency")
{
    const int n = 100000;
    int below_median = 0;
    int first_one = 0;
    for (int i = 0; i < n; ++i) {
        const auto x = sample_gauss_real(static_cast<std::uint64_t>(i), 64);
        REQUIRE(x.lo > 0);
        REQUIRE(x.hi < 1);
        const double v = x.lo.get_d();
        below_median += v <= std::sqrt(2.0) - 1.0;
        first_one += v > 0.5;
    }
    CHECK(std::abs(below_median / double(n) - 0.5) < 0.005);
    CHECK(std::abs(first_one / double(n) - std::log(4.0 / 3.0) / std::log(2.0)) < 0.005);

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto coarse = sample_gauss_real(seed, 64);
        const auto fine = sample_gauss_real(seed, 512);
        const auto a = partial_quotients_of_real(coarse, 1000).digits;
        const auto b = partial_quotients_of_real(fine, 1000).digits;
        REQUIRE(a.size() <= b.size());
        // Both reals agree to about 64 bits, so their leading quotients coincide.
        const std::size_t shared = std::min<std::size_t>(10, a.size());
        CHECK(std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(shared), b.begin()));
    }
}

TEST_CASE("gauss_stationary paths have the requested length")
{
    const auto spec = ProcessSpec::gauss_stationary(16);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        CHECK(sample_path(spec, 300, seed).digits.size() == 300);
}
