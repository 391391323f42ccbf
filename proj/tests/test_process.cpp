#include "rcf/error.hpp"
#include "rcf/json_io.hpp"
#include "rcf/process.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace rcf;

TEST_CASE("degenerate and explicit paths")
{
    const auto c1 = sample_path(ProcessSpec::iid(Distribution::constant(1)), 5, 42);
    CHECK(c1.digits == std::vector<Digit>{1, 1, 1, 1, 1});
    CHECK(c1.seed == 42);

    const auto e = sample_path(ProcessSpec::explicit_digits({1, 2, 3}), 3, 7);
    CHECK(e.digits == std::vector<Digit>{1, 2, 3});
    CHECK_THROWS_AS(sample_path(ProcessSpec::explicit_digits({1, 2, 3}), 4, 7), LengthError);
    CHECK_THROWS_AS(sample_path(ProcessSpec::iid(Distribution::constant(1)), 0, 7), LengthError);
}

TEST_CASE("paths are deterministic in (spec, n, seed)")
{
    for (const auto& [name, spec] : builtin_specs()) {
        CAPTURE(name);
        const auto a = sample_path(spec, 50, 123);
        const auto b = sample_path(spec, 50, 123);
        CHECK(a.digits == b.digits);
        CHECK(a.spec_id == b.spec_id);
        CHECK(a.digits.size() == 50);
        for (Digit d : a.digits)
            CHECK(d >= 1);
    }
}

TEST_CASE("longer paths extend shorter ones")
{
    for (const auto& [name, spec] : builtin_specs()) {
        CAPTURE(name);
        const auto a = sample_path(spec, 20, 9).digits;
        const auto b = sample_path(spec, 60, 9).digits;
        CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
}

TEST_CASE("uniform iid frequencies")
{
    const auto spec = ProcessSpec::iid(Distribution::uniform(4));
    std::map<Digit, int> counts;
    const auto path = sample_path(spec, 40000, 5).digits;
    for (Digit d : path)
        ++counts[d];
    CHECK(counts.size() == 4);
    for (const auto& [d, c] : counts)
        CHECK(std::abs(c / 40000.0 - 0.25) < 0.01);
}

TEST_CASE("markov validation")
{
    CHECK_THROWS_AS(ProcessSpec::markov({{0.5, 0.4}, {0.5, 0.5}}), ConfigError);
    CHECK_THROWS_AS(ProcessSpec::markov({{1.0, 0.0}, {0.0, 1.0}}), ConfigError); // reducible
    CHECK_THROWS_AS(ProcessSpec::markov({{0.0, 1.0}, {1.0, 0.0}}), ConfigError); // periodic
    CHECK_THROWS_AS(ProcessSpec::markov({{0.5, 0.5}, {0.5, 0.5}}, {1.0}), ConfigError);
    CHECK_NOTHROW(ProcessSpec::markov({{0.0, 1.0}, {0.5, 0.5}}));

    const auto pi = stationary_distribution({{0.3, 0.7}, {0.6, 0.4}});
    CHECK(pi[0] == doctest::Approx(6.0 / 13.0).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(7.0 / 13.0).epsilon(1e-12));
}

TEST_CASE("markov transition frequencies")
{
    const auto spec = ProcessSpec::markov({{0.3, 0.7}, {0.6, 0.4}});
    const auto path = sample_path(spec, 100000, 11).digits;
    double from1 = 0, to2 = 0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i] == 1) {
            ++from1;
            to2 += path[i + 1] == 2;
        }
    }
    CHECK(std::abs(to2 / from1 - 0.7) < 0.01);
}

TEST_CASE("gauss precision is at least 4n")
{
    CHECK(gauss_path_precision(256, 10) == 256);
    CHECK(gauss_path_precision(256, 500) == 2000);
    CHECK(gauss_path_precision(1, 1) == 64);
}

TEST_CASE("spec JSON round trip")
{
    for (const auto& [name, spec] : builtin_specs()) {
        CAPTURE(name);
        CHECK(spec_from_json(spec_to_json(spec)) == spec);
    }
    const auto e = ProcessSpec::explicit_digits({1, 2, 3});
    CHECK(spec_to_json(e).dump() == R"({"digits":[1,2,3],"kind":"explicit"})");
    CHECK(parse_spec(R"({"kind":"iid","dist":{"type":"constant","a":1}})") ==
          ProcessSpec::iid(Distribution::constant(1)));
    CHECK(parse_spec(R"({"kind":"gauss_stationary","precision_bits":512})") == ProcessSpec::gauss_stationary(512));
    CHECK_THROWS_AS(parse_spec("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"kind":"nope"})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"kind":"iid","dist":{"type":"zeta","s":1.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"kind":"explicit","digits":[1,0]})"), ConfigError);
}

TEST_CASE("number rendering")
{
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(round_sig(1.18656911041562) == 1.18656911);
}
