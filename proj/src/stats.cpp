#include "rcf/stats.hpp"

#include "rcf/error.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>

namespace rcf {

SampleSummary summarize(std::span<const double> xs)
{
    SampleSummary s;
    s.count = xs.size();
    if (xs.empty())
        return s;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2)
        return s;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    s.std_error = s.sd / std::sqrt(static_cast<double>(xs.size()));
    return s;
}

double proportion_lower_bound(std::size_t hits, std::size_t trials, double confidence)
{
    if (trials == 0 || hits > trials)
        throw DomainError("proportion_lower_bound: need 0 <= hits <= trials, trials > 0");
    if (hits == 0)
        return 0.0;
    const boost::math::beta_distribution<double> b(static_cast<double>(hits), static_cast<double>(trials - hits + 1));
    return boost::math::quantile(b, 1.0 - confidence);
}

ProportionInterval clopper_pearson(std::size_t hits, std::size_t trials, double confidence)
{
    if (trials == 0 || hits > trials)
        throw DomainError("clopper_pearson: need 0 <= hits <= trials, trials > 0");
    const double tail = 0.5 * (1.0 - confidence);
    ProportionInterval ci;
    ci.lo = proportion_lower_bound(hits, trials, 1.0 - tail);
    if (hits == trials) {
        ci.hi = 1.0;
    } else {
        const boost::math::beta_distribution<double> b(static_cast<double>(hits + 1), static_cast<double>(trials - hits));
        ci.hi = boost::math::quantile(b, 1.0 - tail);
    }
    return ci;
}

double normal_quantile(double p)
{
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

} // namespace rcf
