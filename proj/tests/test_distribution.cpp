#include "oracles.hpp"

#include "rcf/distribution.hpp"
#include "rcf/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace rcf;

TEST_CASE("gauss_kuzmin_pmf closed form")
{
    CHECK(gauss_kuzmin_pmf(1) == doctest::Approx(0.4150375).epsilon(1e-7));
    CHECK(gauss_kuzmin_pmf(2) == doctest::Approx(0.1699250).epsilon(1e-7));
    CHECK_THROWS_AS(gauss_kuzmin_pmf(0), DomainError);
    for (Digit k = 1; k < 2000; ++k)
        CHECK_LT(gauss_kuzmin_pmf(k + 1), gauss_kuzmin_pmf(k));
}

TEST_CASE("gauss_kuzmin partial sums telescope")
{
    for (Digit K : {Digit{1}, Digit{10}, Digit{100}, Digit{10000}}) {
        long double s = 0.0L;
        for (Digit k = K; k >= 1; --k)
            s += gauss_kuzmin_pmf(k);
        CHECK(std::abs(static_cast<double>(s - oracle::gk_partial_sum_closed(K))) <= 1e-12);
    }
    CHECK(static_cast<double>(oracle::gk_partial_sum_closed(10)) == doctest::Approx(0.8744691).epsilon(1e-7));
}

TEST_CASE("pmf values are probabilities and partial sums increase to at most one")
{
    const Distribution ds[] = {Distribution::constant(3), Distribution::uniform(5), Distribution::geometric(0.3),
                               Distribution::zeta(2.5), Distribution::gauss_kuzmin()};
    for (const auto& d : ds) {
        double sum = 0.0;
        for (Digit k = 1; k <= 5000; ++k) {
            const double p = d.pmf(k);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            const double next = sum + p;
            CHECK(next >= sum);
            sum = next;
        }
        CHECK(sum <= 1.0 + 1e-12);
        CHECK(sum + d.tail(5000) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("quantile_from_tail inverts the tail")
{
    const Distribution ds[] = {Distribution::uniform(7), Distribution::geometric(0.2), Distribution::zeta(3.0),
                               Distribution::gauss_kuzmin()};
    for (const auto& d : ds) {
        for (double v : {0.999, 0.9, 0.5, 0.1, 1e-3, 1e-6, 1e-9}) {
            const Digit k = d.quantile_from_tail(v);
            CHECK(d.tail(k) <= v);
            if (k > 1)
                CHECK(d.tail(k - 1) > v);
        }
    }
    CHECK(Distribution::constant(4).quantile_from_tail(0.3) == 4);
}

TEST_CASE("expected_log_a1 against independent oracles")
{
    CHECK(expected_log_a1(Distribution::constant(1)).value == 0.0);
    CHECK(expected_log_a1(Distribution::constant(3)).value == doctest::Approx(1.0986123).epsilon(1e-7));

    const auto [khinchin, tail] = oracle::khinchin_log(10'000'000);
    CHECK(static_cast<double>(tail) < 3e-6);
    // Frozen from the oracle above.
    CHECK(static_cast<double>(khinchin) == doctest::Approx(0.9878490).epsilon(1e-7));

    const auto gk = expected_log_a1(Distribution::gauss_kuzmin());
    CHECK(gk.converged);
    CHECK(gk.error_bound <= 1e-9);
    CHECK(std::abs(gk.value - static_cast<double>(khinchin)) < 1e-6);
    CHECK(std::abs(gk.value - 0.9878490) < 1e-4);
}

TEST_CASE("moment_a1")
{
    CHECK(moment_a1(Distribution::constant(2), 0.5).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(moment_a1(Distribution::uniform(3), 0.5).value ==
          doctest::Approx((1.0 + std::sqrt(2.0) + std::sqrt(3.0)) / 3.0).epsilon(1e-12));
    CHECK(moment_a1(Distribution::uniform(3), 0.5).value == doctest::Approx(1.3820881).epsilon(1e-7));

    const auto gk = moment_a1(Distribution::gauss_kuzmin(), 0.5);
    CHECK(gk.converged);
    CHECK(gk.error_bound <= 1e-9);
    CHECK(std::abs(gk.value - static_cast<double>(oracle::gk_moment(0.5, 10'000'000))) < 1e-7);

    CHECK_THROWS_AS(moment_a1(Distribution::gauss_kuzmin(), 0.0), DomainError);
    CHECK_THROWS_AS(moment_a1(Distribution::gauss_kuzmin(), 1.0), DomainError);
}

TEST_CASE("geometric moments match the closed form")
{
    const double p = 0.4;
    double direct = 0.0;
    for (int k = 200; k >= 1; --k)
        direct += std::log(k) * p * std::pow(1 - p, k - 1);
    CHECK(expected_log_a1(Distribution::geometric(p)).value == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("factories reject invalid parameters")
{
    CHECK_THROWS(Distribution::constant(0));
    CHECK_THROWS(Distribution::uniform(0));
    CHECK_THROWS(Distribution::geometric(0.0));
    CHECK_THROWS(Distribution::geometric(1.0));
    CHECK_THROWS(Distribution::zeta(2.0));
}
