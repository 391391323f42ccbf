#include "oracles.hpp"

#include "rcf/convergents.hpp"
#include "rcf/error.hpp"
#include "rcf/process.hpp"
#include "rcf/seeding.hpp"

#include <doctest.h>

#include <cmath>

using namespace rcf;

namespace {

// All digit strings over {1..max_digit} of exactly `len` symbols.
void for_each_word(std::size_t len, Digit max_digit, const auto& fn)
{
    std::vector<Digit> w(len, 1);
    while (true) {
        fn(w);
        std::size_t i = 0;
        while (i < len && w[i] == max_digit)
            w[i++] = 1;
        if (i == len)
            return;
        ++w[i];
    }
}

} // namespace

TEST_CASE("initial convention and single steps")
{
    const auto s = init();
    CHECK(s.p_prev == 1);
    CHECK(s.p_cur == 0);
    CHECK(s.q_prev == 0);
    CHECK(s.q_cur == 1);
    const auto s1 = step(s, 7);
    CHECK(s1.p_cur == 1);
    CHECK(s1.q_cur == 7);
    CHECK_THROWS_AS(step(s, 0), DomainError);
}

TEST_CASE("convergents against the fraction oracle")
{
    const auto c = convergent_of(std::vector<Digit>{1, 2, 3});
    CHECK(c.p_cur == 7);
    CHECK(c.q_cur == 10);
    const auto d = convergent_of(std::vector<Digit>{7, 16});
    CHECK(d.p_cur == 16);
    CHECK(d.q_cur == 113);
    for (std::size_t len = 1; len <= 6; ++len) {
        for_each_word(len, 3, [](const std::vector<Digit>& w) {
            const auto [num, den] = oracle::fraction(w);
            const auto s = convergent_of(w);
            CHECK(s.p_cur == num);
            CHECK(s.q_cur == den);
        });
    }
}

TEST_CASE("constant one gives Fibonacci denominators")
{
    ConvergentState s = init();
    for (unsigned n = 1; n <= 90; ++n) {
        step_in_place(s, 1);
        REQUIRE(s.q_cur == mpz_class(std::to_string(oracle::fibonacci(n + 1))));
    }
    const std::vector<Digit> ones(500, 1);
    const double l500 = log_of(convergent_of(ones).q_cur) / 500.0;
    CHECK(std::abs(l500 - static_cast<double>(oracle::log_fibonacci(501)) / 500.0) < 1e-14);
    CHECK(std::abs(l500 - 0.4812118) < 0.002);
}

TEST_CASE("log_of and log_interval")
{
    const mpz_class big = mpz_class(1) << 3000;
    CHECK(log_of(big) == doctest::Approx(3000 * std::log(2.0)).epsilon(1e-15));
    const auto iv = log_interval(mpz_class(10));
    CHECK(iv.contains(std::log(10.0)));
    CHECK(iv.width() < 1e-15);
    const auto q = log_interval(mpq_class(1, 3));
    CHECK(q.contains(-std::log(3.0)));
}

TEST_CASE("tail brackets")
{
    const std::vector<Digit> ones(80, 1);
    const auto t = tail_values(ones, 1, 60);
    const double conj = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(t.value_lo.get_d() <= conj + 1e-16);
    CHECK(t.value_hi.get_d() >= conj - 1e-16);
    CHECK(t.width() <= mpq_class(1, 1) / mpq_class(mpz_class(1) << 59));
    CHECK(t.midpoint() == doctest::Approx(conj).epsilon(1e-15));
    CHECK_THROWS_AS(tail_values(ones, 30, 60), LengthError);
    CHECK_THROWS_AS(tail_values(ones, 1, 0), DomainError);
}

TEST_CASE("identities hold exhaustively for digits <= 3 and length <= 6")
{
    std::size_t words = 0;
    for (std::size_t len = 1; len <= 6; ++len) {
        for_each_word(len, 3, [&](const std::vector<Digit>& w) {
            const auto rep = identity_suite(w, 1);
            CHECK(rep.determinant_ok);
            CHECK(rep.second_determinant_ok);
            CHECK(rep.growth_ok);
            CHECK(rep.determinant_residual == 0.0);
            CHECK(rep.second_determinant_residual == 0.0);
            ++words;
        });
    }
    CHECK(words == 3 + 9 + 27 + 81 + 243 + 729);
}

TEST_CASE("identities hold on random paths of every family")
{
    for (const auto& [name, spec] : builtin_specs()) {
        CAPTURE(name);
        const PathSampler sampler(spec);
        for (std::uint64_t i = 0; i < 40; ++i) {
            const auto digits = sampler.digits(120, derive_seed(99, i));
            const auto rep = identity_suite(digits, 40);
            CHECK(rep.all_pass());
            CHECK(rep.exact_checked == 120);
            CHECK(rep.interval_checked == 80);
        }
    }
}

TEST_CASE("corrupted recurrence is detected")
{
    const std::vector<Digit> digits{2, 1, 3, 1, 2, 2, 1, 1, 3, 1};
    CHECK(identity_suite(digits, 1).all_pass());
    const auto bad = identity_suite(digits, 1, Recurrence::corrupted);
    CHECK_FALSE(bad.all_pass());
    CHECK_FALSE(bad.determinant_ok);
    CHECK(bad.determinant_residual > 0.0);
}

TEST_CASE("sandwich residual at depth 40")
{
    for (const auto& [name, spec] : builtin_specs()) {
        CAPTURE(name);
        const PathSampler sampler(spec);
        for (std::uint64_t i = 0; i < 10; ++i) {
            const auto digits = sampler.digits(200, derive_seed(5, i));
            const auto rep = sandwich_check(digits, 40);
            CHECK(rep.checked == 161);
            CHECK(rep.residual <= std::ldexp(1.0, -30));
        }
    }
    CHECK_THROWS_AS(sandwich_check(std::vector<Digit>(10, 1), 40), LengthError);
}

TEST_CASE("levy trajectory and its lower bound")
{
    const auto digits = sample_path(ProcessSpec::iid(Distribution::gauss_kuzmin()), 300, 3).digits;
    const auto traj = levy_trajectory(digits);
    REQUIRE(traj.size() == 300);
    for (std::size_t n = 1; n <= traj.size(); ++n)
        CHECK(traj[n - 1] >= (n - 1.0) / (2.0 * n) * std::log(2.0) - 1e-12);
    const auto fib = levy_trajectory(std::vector<Digit>(10, 1));
    CHECK(fib[9] == doctest::Approx(std::log(89.0) / 10.0).epsilon(1e-14));
    CHECK(fib[9] == doctest::Approx(0.4488636).epsilon(1e-7));
}
