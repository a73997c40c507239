#ifndef OFFLOAD_DELAY_MODEL_HPP
#define OFFLOAD_DELAY_MODEL_HPP

#include <span>
#include <string>
#include <vector>

#include "offload/types.hpp"

namespace offload::model {

// Relative tolerance used to decide that two per-hop rates are equal.
constexpr double kGroupRelTol = 1e-9;

// Below this relative gap between distinct grouped rates the partial-fraction
// coefficients cancel too heavily; evaluation falls back to tail_oracle.
constexpr double kDegenerateGapTol = 1e-4;

struct RateGroup {
  double value = 0.0;
  int multiplicity = 0;
};

// Ordered per-hop exponential parameters of a delay path plus their
// tolerance-merged grouping (sorted by multiplicity desc, then value desc).
struct RateVector {
  std::vector<double> rates;
  std::vector<RateGroup> groups;

  // Multiplicity pattern, e.g. "(1,1,1,1,1)" or "(3,2)".
  std::string pattern() const;
};

// Per-tier and overall delay-violation probabilities for one policy.
struct TailResult {
  double p_u = 1.0;
  double p_e = 1.0;
  double p_c = 1.0;
  double p_overall = 1.0;
  std::string case_u;  // multiplicity pattern that fired per tier
  std::string case_e;
  std::string case_c;
  bool stable_u = false;
  bool stable_e = false;
  bool stable_c = false;
};

// Arrival rate of every queue under the given policy and link model.
ArrivalRates derive_arrival_rates(const SystemParams& params,
                                  const OffloadingPolicy& policy,
                                  LinkModel link_model = LinkModel::SharedLinks);

// mu - lam; <= 0 means the queue is unstable.
double stability_margin(double mu, double lam);

// P(Exp(v) >= theta); 1 when v <= 0 (an unstable queue always violates).
double tail_single(double v, double theta);

// Merge rates whose pairwise relative difference is within rel_tol
// (transitive closure); each group's value is the member mean.
RateVector group_rates(const std::vector<double>& rates,
                       double rel_tol = kGroupRelTol);

// P(sum of independent Exp(v_i) >= theta) via repeated-pole partial
// fractions on the grouped rates; 1 when any grouped rate is <= 0.
// Near-degenerate or ill-conditioned inputs are delegated to tail_oracle.
double tail_hypoexp(const RateVector& rv, double theta);
double tail_hypoexp(std::span<const double> rates, double theta);

// Same tail through the phase-type route: the first component of
// exp(T*theta) applied to the all-ones vector, where T is the upper
// bidiagonal generator. Uniformization keeps the truncation error
// below 1e-12. Throws std::invalid_argument on non-positive rates.
double tail_oracle(const RateVector& rv, double theta);
double tail_oracle(std::span<const double> rates, double theta);

// Full per-tier evaluation: p_u from the UE queue, p_e over the 3-hop edge
// path, p_c over the 5-hop cloud path, mixed per the routing probabilities.
TailResult tier_tails(const SystemParams& params, const OffloadingPolicy& policy,
                      LinkModel link_model = LinkModel::SharedLinks);

// p_overall only; allocation-free, used by the optimizer's inner loop.
double overall_tail(const SystemParams& params, const OffloadingPolicy& policy,
                    LinkModel link_model = LinkModel::SharedLinks);

}  // namespace offload::model

#endif
