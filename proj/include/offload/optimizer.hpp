#ifndef OFFLOAD_OPTIMIZER_HPP
#define OFFLOAD_OPTIMIZER_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "offload/types.hpp"

namespace offload::opt {

// Objective over the policy square; smaller is better.
using Objective = std::function<double(double p_ue, double p_ec)>;

enum class Coordinate { PUe, PEc };

struct SgsConfig {
  double initial_p = 0.5;      // starting value for both coordinates
  double initial_step = 0.25;  // probe step at restart k is initial_step/sqrt(k)
  double step_floor = 1e-4;    // coordinate search ends once the step drops below
  double objective_eps = 1e-6; // probe stagnation threshold on |f(cand) - f(cur)|
  double outer_eps = 1e-4;     // outer fixed-point threshold per coordinate
  int max_outer_iters = 1000;

  void validate() const;  // throws std::invalid_argument
};

struct OptResult {
  OffloadingPolicy policy;
  double objective = 0.0;
  int outer_iterations = 0;
  bool converged = true;
  // (policy, objective) after each coordinate pass, starting point first.
  std::vector<std::pair<OffloadingPolicy, double>> trace;
};

// One-dimensional probe search along `which`, holding the other coordinate
// of `fixed` in place. Returns the optimized coordinate value.
double coordinate_search(const Objective& objective, const OffloadingPolicy& fixed,
                         Coordinate which, const SgsConfig& cfg);
double coordinate_search(const SystemParams& params, const OffloadingPolicy& fixed,
                         Coordinate which, const SgsConfig& cfg);

// Alternating coordinate search (p_ec first, then p_ue) until both
// coordinates move less than outer_eps, or max_outer_iters is hit (in which
// case `converged` is false and the best visited point is returned).
OptResult sgs_optimize(const Objective& objective, const SgsConfig& cfg,
                       std::optional<OffloadingPolicy> start = std::nullopt);
OptResult sgs_optimize(const SystemParams& params, const SgsConfig& cfg = {},
                       std::optional<OffloadingPolicy> start = std::nullopt);

// Exhaustive lattice minimization over [lo, hi]^2 with the given spacing;
// ties break toward smaller p_ue, then smaller p_ec. Deterministic.
OptResult grid_search(const Objective& objective, double resolution,
                      OffloadingPolicy lo = {0.0, 0.0}, OffloadingPolicy hi = {1.0, 1.0});
OptResult grid_search(const SystemParams& params, double resolution,
                      OffloadingPolicy lo = {0.0, 0.0}, OffloadingPolicy hi = {1.0, 1.0});

}  // namespace offload::opt

#endif
