#pragma once

#include <cstddef>
#include <span>

namespace rcf {

struct SampleSummary {
    double mean = 0.0;
    double sd = 0.0;     // sample standard deviation (n - 1 denominator)
    double std_error = 0.0; // sd / sqrt(n)
    std::size_t count = 0;
};

// Two-pass mean and deviation, summed in index order.
SampleSummary summarize(std::span<const double> xs);

struct ProportionInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided interval at the given confidence level.
ProportionInterval clopper_pearson(std::size_t hits, std::size_t trials, double confidence = 0.95);

// One-sided Clopper-Pearson lower confidence limit.
double proportion_lower_bound(std::size_t hits, std::size_t trials, double confidence);

// Standard normal quantile.
double normal_quantile(double p);

} // namespace rcf
