#ifndef OFFLOAD_STATS_HPP
#define OFFLOAD_STATS_HPP

#include <cstdint>
#include <span>

namespace offload::stats {

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;  // Student-t, 95% two-sided
};

// Sample mean and 95% half-width across replications. Throws
// std::invalid_argument for fewer than 2 values.
MeanCi replication_stats(std::span<const double> values);

double student_t_975(int degrees_of_freedom);

struct BinomialCi {
  double p_hat = 0.0;
  double half_width = 0.0;
  double lower = 0.0;
  double upper = 1.0;
};

// Exact (Clopper-Pearson) 95% interval; half_width is the largest deviation
// of an interval end from p_hat, so p_hat +/- half_width covers the interval.
BinomialCi binomial_ci(std::uint64_t successes, std::uint64_t trials);

}  // namespace offload::stats

#endif
