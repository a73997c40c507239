#ifndef OFFLOAD_SIMULATOR_HPP
#define OFFLOAD_SIMULATOR_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "offload/delay_model.hpp"
#include "offload/stats.hpp"
#include "offload/types.hpp"

namespace offload::sim {

struct SimConfig {
  double horizon = 10000.0;  // simulated time units per replication
  int replications = 30;
  std::uint64_t seed = 1;
  double warmup = 0.0;       // time discarded before statistics start
  LinkModel link_model = LinkModel::SharedLinks;
  int threads = 0;           // replication workers; 0 = auto. Never affects results.

  void validate() const;
};

struct QueueStats {
  double utilization = 0.0;   // busy fraction of the measurement window
  double mean_number = 0.0;   // time-average number in queue + service
  double arrival_rate = 0.0;  // observed arrivals per time unit
  double mean_sojourn = 0.0;  // mean time from enqueue to service completion
  std::uint64_t arrivals = 0;
  std::uint64_t completions = 0;
};

// Tier order everywhere: [0] local/UE, [1] edge, [2] cloud.
struct SimReport {
  // Count-weighted across all replications, so violation_prob is exactly the
  // task-share mixture of per_tier_violation. The half-width is the Student-t
  // 95% interval over per-replication fractions (NaN for one replication).
  double violation_prob = 0.0;
  double violation_half_width = 0.0;
  std::array<double, 3> per_tier_violation{};
  std::array<double, 3> per_tier_mean_delay{};
  std::array<std::uint64_t, 3> per_tier_completed{};
  std::array<std::uint64_t, 3> per_tier_violations{};
  std::uint64_t tasks_generated = 0;
  std::uint64_t tasks_completed = 0;
  std::uint64_t tasks_in_flight = 0;  // measured tasks still in system at horizon
  std::map<std::string, QueueStats> per_queue;
  bool saturated = false;  // some queue's offered load is >= 1
};

// Exceedance frequency of sums of independent exponentials drawn with the
// given rates; exact 95% binomial interval. Deterministic for a fixed seed.
// Throws std::invalid_argument on non-positive rates or zero samples.
stats::BinomialCi mc_sample_tier(const model::RateVector& rv, double theta,
                                 std::uint64_t samples, std::uint64_t seed);

// Event-driven simulation of the full queueing network (n*m UEs, n edge
// servers, one cloud) under probabilistic routing. Deterministic for a fixed
// config; replications may run on several threads.
SimReport des_run(const SystemParams& params, const OffloadingPolicy& policy,
                  const SimConfig& cfg);

}  // namespace offload::sim

#endif
