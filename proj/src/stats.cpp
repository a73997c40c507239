#include "offload/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace offload::stats {

double student_t_975(int degrees_of_freedom) {
  if (degrees_of_freedom < 1)
    throw std::invalid_argument("student_t_975 requires df >= 1");
  boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
  return boost::math::quantile(dist, 0.975);
}

MeanCi replication_stats(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("replication_stats requires at least 2 values");

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double se = sd / std::sqrt(static_cast<double>(n));
  return {mean, student_t_975(static_cast<int>(n) - 1) * se};
}

BinomialCi binomial_ci(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("binomial_ci requires at least 1 trial");
  if (successes > trials) throw std::invalid_argument("successes exceed trials");

  const double n = static_cast<double>(trials);
  const double x = static_cast<double>(successes);
  constexpr double alpha = 0.05;

  BinomialCi ci;
  ci.p_hat = x / n;
  // Clopper-Pearson via beta quantiles.
  if (successes == 0) {
    ci.lower = 0.0;
  } else {
    boost::math::beta_distribution<double> lo(x, n - x + 1.0);
    ci.lower = boost::math::quantile(lo, alpha / 2.0);
  }
  if (successes == trials) {
    ci.upper = 1.0;
  } else {
    boost::math::beta_distribution<double> hi(x + 1.0, n - x);
    ci.upper = boost::math::quantile(hi, 1.0 - alpha / 2.0);
  }
  ci.half_width = std::max(ci.p_hat - ci.lower, ci.upper - ci.p_hat);
  return ci;
}

}  // namespace offload::stats
