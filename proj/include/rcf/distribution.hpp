#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>

namespace rcf {

using Digit = std::uint64_t;

namespace dist {

struct Constant {
    Digit a = 1;
    bool operator==(const Constant&) const = default;
};

// Uniform on {1, ..., K}.
struct Uniform {
    Digit K = 1;
    bool operator==(const Uniform&) const = default;
};

// P(k) = p (1-p)^(k-1), k >= 1.
struct Geometric {
    double p = 0.5;
    bool operator==(const Geometric&) const = default;
};

// P(k) = k^(-s) / zeta(s), s > 2 so that E(A^t) is finite for every t < 1.
struct Zeta {
    double s = 3.0;
    double norm = 0.0; // zeta(s), filled in by the factory
    std::array<double, 64> head_tail{}; // sum_{j > k} j^(-s) for k < 64, likewise
    bool operator==(const Zeta&) const = default;
};

// P(k) = log2(1 + 1/(k(k+2))): law of the first partial quotient under the Gauss measure.
struct GaussKuzmin {
    bool operator==(const GaussKuzmin&) const = default;
};

} // namespace dist

// Law of a single partial quotient. Construct through the factory functions,
// which validate parameters.
class Distribution {
public:
    using Family = std::variant<dist::Constant, dist::Uniform, dist::Geometric, dist::Zeta, dist::GaussKuzmin>;

    static Distribution constant(Digit a);
    static Distribution uniform(Digit K);
    static Distribution geometric(double p);
    static Distribution zeta(double s);
    static Distribution gauss_kuzmin();

    const Family& family() const noexcept { return family_; }
    std::string name() const;

    double pmf(Digit k) const;
    // P(A > k).
    double tail(Digit k) const;
    // Inverse of the tail: smallest k >= 1 with P(A > k) <= v, for v in (0,1).
    Digit quantile_from_tail(double v) const;

    // Largest support point, or 0 for infinite support.
    Digit support_max() const;

    bool operator==(const Distribution&) const = default;

private:
    explicit Distribution(Family f) : family_(f) {}
    Family family_;
};

// ln(1 + 1/(k(k+2))) / ln 2. Throws DomainError for k = 0.
double gauss_kuzmin_pmf(Digit k);

// Value of a convergent series together with a certified bound on the
// truncation error (excluding double rounding, which is far smaller).
struct SeriesValue {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = true;
    Digit terms = 0;
};

inline constexpr double kSeriesTolerance = 1e-9;

// E(ln A), and E(A^t) for 0 < t < 1.
SeriesValue expected_log_a1(const Distribution& d);
SeriesValue moment_a1(const Distribution& d, double t);

} // namespace rcf
