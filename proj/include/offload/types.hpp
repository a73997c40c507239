#ifndef OFFLOAD_TYPES_HPP
#define OFFLOAD_TYPES_HPP

#include <string>

namespace offload {

// How offloaded traffic maps onto the UE<->edge link queues.
//
// SharedLinks: one uplink and one downlink queue per edge server, carrying
//   both edge-bound and cloud-bound tasks. Each link then sees an arrival
//   rate of M * p_ue * lambda.
// SplitLinks: each destination class gets its own logical link queue, so the
//   edge-bound links see M * (1 - p_ec) * p_ue * lambda and the cloud-bound
//   links see M * p_ec * p_ue * lambda.
enum class LinkModel { SharedLinks, SplitLinks };

// Static description of the three-tier system. Rates are tasks per time
// unit; m and n are fan-outs (UEs per edge, edges per cloud).
struct SystemParams {
  double mu_c = 0.0;        // cloud server service rate
  double mu_e = 0.0;        // edge server service rate
  double mu_u = 0.0;        // UE service rate
  double mu_ue = 0.0;       // UE -> edge uplink rate
  double mu_ec = 0.0;       // edge -> cloud uplink rate
  double mu_ce = 0.0;       // cloud -> edge downlink rate
  double mu_eu = 0.0;       // edge -> UE downlink rate
  double lambda_ext = 0.0;  // external task arrival rate per UE
  int m = 1;                // UEs per edge server
  int n = 1;                // edge servers per cloud server
  double theta = 0.0;       // delay budget

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// The two offloading probabilities: p_ue moves a task from the UE to its
// edge server, p_ec moves an already-offloaded task on to the cloud.
struct OffloadingPolicy {
  double p_ue = 0.0;
  double p_ec = 0.0;

  void validate() const;
};

// Per-queue arrival rates induced by a policy. lam_ue / lam_eu describe the
// link queues traversed by edge-bound tasks; lam_ue_cloud / lam_eu_cloud the
// ones traversed by cloud-bound tasks. Under LinkModel::SharedLinks both
// classes use the same queue and the pairs coincide.
struct ArrivalRates {
  double lam_u = 0.0;
  double lam_ue = 0.0;
  double lam_e = 0.0;
  double lam_eu = 0.0;
  double lam_ec = 0.0;
  double lam_c = 0.0;
  double lam_ce = 0.0;
  double lam_ue_cloud = 0.0;
  double lam_eu_cloud = 0.0;
};

const char* to_string(LinkModel model);

}  // namespace offload

#endif
