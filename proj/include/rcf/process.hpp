#pragma once

#include "rcf/distribution.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace rcf {

namespace process {

struct Iid {
    Distribution dist;
    bool operator==(const Iid&) const = default;
};

// States are the digits 1..K; row i of `transition` is the law of A_{n+1} given A_n = i+1.
struct Markov {
    std::vector<std::vector<double>> transition;
    std::vector<double> initial;
    bool operator==(const Markov&) const = default;
};

// Partial quotients of a Gauss-distributed real; `precision_bits` is a floor,
// raised to 4n when a path of length n is requested.
struct GaussStationary {
    unsigned precision_bits = 256;
    bool operator==(const GaussStationary&) const = default;
};

struct Explicit {
    std::vector<Digit> digits;
    bool operator==(const Explicit&) const = default;
};

} // namespace process

inline constexpr double kRowSumTolerance = 1e-12;

// The partial-quotient process {A_n, n >= 1}.
class ProcessSpec {
public:
    using Kind = std::variant<process::Iid, process::Markov, process::GaussStationary, process::Explicit>;

    static ProcessSpec iid(Distribution d);
    // Validates row-stochasticity, irreducibility and aperiodicity. An empty
    // `initial` selects the stationary law of the chain.
    static ProcessSpec markov(std::vector<std::vector<double>> transition, std::vector<double> initial = {});
    static ProcessSpec gauss_stationary(unsigned precision_bits = 256);
    static ProcessSpec explicit_digits(std::vector<Digit> digits);

    const Kind& kind() const noexcept { return kind_; }
    std::string kind_name() const;

    bool is_iid() const noexcept { return std::holds_alternative<process::Iid>(kind_); }
    // False only for explicit digit lists, which carry no ensemble.
    bool is_random() const noexcept;
    const Distribution* iid_distribution() const noexcept;

    bool operator==(const ProcessSpec&) const = default;

private:
    explicit ProcessSpec(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

struct PartialQuotientPath {
    std::vector<Digit> digits;
    std::uint64_t seed = 0;
    std::string spec_id;
};

// Stationary law of a primitive stochastic matrix (power iteration).
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

// Precision used for a gauss_stationary path of length n.
unsigned gauss_path_precision(unsigned floor_bits, std::size_t n);

// Reusable sampler; immutable after construction and safe to share across threads.
class PathSampler {
public:
    explicit PathSampler(ProcessSpec spec);

    const ProcessSpec& spec() const noexcept { return spec_; }
    const std::string& spec_id() const noexcept { return spec_id_; }

    std::vector<Digit> digits(std::size_t n, std::uint64_t seed) const;
    PartialQuotientPath sample(std::size_t n, std::uint64_t seed) const;

private:
    ProcessSpec spec_;
    std::string spec_id_;
    std::vector<std::vector<double>> cumulative_; // markov rows, then the initial law last
};

struct NamedSpec {
    std::string name;
    ProcessSpec spec;
};

// Reference catalogue used by the CLI (--spec <name>) and the test suites.
std::vector<NamedSpec> builtin_specs();

// Deterministic in (spec, n, seed). Throws LengthError when an explicit spec is too short.
PartialQuotientPath sample_path(const ProcessSpec& spec, std::size_t n, std::uint64_t seed);

} // namespace rcf
