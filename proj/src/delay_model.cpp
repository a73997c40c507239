#include "offload/delay_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace offload {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(field) + " " + what);
}

}  // namespace

void SystemParams::validate() const {
  require(mu_c > 0.0, "mu_c", "must be strictly positive");
  require(mu_e > 0.0, "mu_e", "must be strictly positive");
  require(mu_u > 0.0, "mu_u", "must be strictly positive");
  require(mu_ue > 0.0, "mu_ue", "must be strictly positive");
  require(mu_ec > 0.0, "mu_ec", "must be strictly positive");
  require(mu_ce > 0.0, "mu_ce", "must be strictly positive");
  require(mu_eu > 0.0, "mu_eu", "must be strictly positive");
  require(lambda_ext > 0.0, "lambda", "must be strictly positive");
  require(m >= 1, "m", "must be a positive integer");
  require(n >= 1, "n", "must be a positive integer");
  require(theta > 0.0, "theta", "must be strictly positive");
}

void OffloadingPolicy::validate() const {
  require(p_ue >= 0.0 && p_ue <= 1.0, "p_ue", "must lie in [0,1]");
  require(p_ec >= 0.0 && p_ec <= 1.0, "p_ec", "must lie in [0,1]");
}

const char* to_string(LinkModel model) {
  return model == LinkModel::SharedLinks ? "shared-links" : "split-links";
}

}  // namespace offload

namespace offload::model {

namespace {

constexpr int kMaxStackK = 16;

// e^{-x} * sum_{i<j} x^i / i!   (tail of an Erlang-j at x)
double erlang_tail(double x, int j) {
  double term = std::exp(-x);
  double total = term;
  for (int i = 1; i < j; ++i) {
    term *= x / static_cast<double>(i);
    total += term;
  }
  return total;
}

struct PartialFractionTail {
  double value = 0.0;
  double magnitude = 0.0;  // sum of |summand|, tracks cancellation
};

// Tail of a sum of exponentials with grouped parameters (values[i] with
// multiplicity mult[i]), via partial fractions with repeated poles.
//
// With psi_g(s) = prod_{h != g} (s + v_h)^{-r_h}, the expansion coefficient
// of (s + v_g)^{-j} is psi_g^{(r_g - j)}(-v_g) / (r_g - j)!, and each such
// term integrates to an Erlang-j tail. Derivatives of psi_g come from the
// exp-of-log recurrence so only log-derivative sums over the other groups
// are needed.
PartialFractionTail grouped_tail_pf(const double* values, const int* mult,
                                    int n_groups, double theta) {
  double rate_product = 1.0;
  int total = 0;
  for (int g = 0; g < n_groups; ++g) {
    for (int i = 0; i < mult[g]; ++i) rate_product *= values[g];
    total += mult[g];
  }

  std::array<double, kMaxStackK + 1> log_deriv{};  // D_m at the current pole
  std::array<double, kMaxStackK + 1> psi{};        // psi^{(n)}(-v_g)
  std::array<double, kMaxStackK + 1> factorial{};
  factorial[0] = 1.0;
  for (int i = 1; i <= total; ++i) factorial[i] = factorial[i - 1] * i;

  PartialFractionTail out;
  double comp = 0.0;  // Neumaier compensation
  for (int g = 0; g < n_groups; ++g) {
    const double vg = values[g];
    const int rg = mult[g];

    double psi0 = 1.0;
    for (int h = 0; h < n_groups; ++h) {
      if (h == g) continue;
      const double diff = values[h] - vg;
      for (int i = 0; i < mult[h]; ++i) psi0 /= diff;
    }
    psi[0] = psi0;

    // D_m = (-1)^m (m-1)! sum_{h != g} r_h (v_h - v_g)^{-m}
    for (int mth = 1; mth < rg; ++mth) {
      double s = 0.0;
      for (int h = 0; h < n_groups; ++h) {
        if (h == g) continue;
        s += mult[h] * std::pow(values[h] - vg, -mth);
      }
      log_deriv[mth] = ((mth & 1) ? -1.0 : 1.0) * factorial[mth - 1] * s;
    }
    for (int nth = 1; nth < rg; ++nth) {
      double acc = 0.0;
      double binom = 1.0;  // C(nth-1, m-1)
      for (int mth = 1; mth <= nth; ++mth) {
        acc += binom * log_deriv[mth] * psi[nth - mth];
        binom = binom * (nth - mth) / mth;
      }
      psi[nth] = acc;
    }

    double inv_v_pow = 1.0 / vg;  // v_g^{-j}
    for (int j = 1; j <= rg; ++j) {
      const double coeff = psi[rg - j] / factorial[rg - j];
      const double summand =
          rate_product * coeff * inv_v_pow * erlang_tail(vg * theta, j);
      out.magnitude += std::abs(summand);
      // Neumaier summation
      const double t = out.value + summand;
      if (std::abs(out.value) >= std::abs(summand)) {
        comp += (out.value - t) + summand;
      } else {
        comp += (summand - t) + out.value;
      }
      out.value = t;
      inv_v_pow /= vg;
    }
  }
  out.value += comp;
  return out;
}

double oracle_from_rates(const double* rates, int count, double theta) {
  if (count <= 0) throw std::invalid_argument("tail_oracle requires a non-empty rate vector");
  if (!(theta >= 0.0)) throw std::invalid_argument("tail_oracle requires theta >= 0");
  double lambda_max = 0.0;
  for (int i = 0; i < count; ++i) {
    if (!(rates[i] > 0.0))
      throw std::invalid_argument("tail_oracle requires strictly positive rates");
    lambda_max = std::max(lambda_max, rates[i]);
  }
  if (theta == 0.0) return 1.0;

  // Uniformize exp(T*theta) * ones with the substochastic M = I + T/Lambda.
  // Splitting theta keeps each Poisson expansion short and well scaled.
  const int steps = std::max(1, static_cast<int>(std::ceil(lambda_max * theta / 64.0)));
  const double dt = theta / steps;
  const double a = lambda_max * dt;

  std::vector<double> w(static_cast<std::size_t>(count), 1.0);
  std::vector<double> y(static_cast<std::size_t>(count));
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int s = 0; s < steps; ++s) {
    y.assign(w.begin(), w.end());
    double weight = std::exp(-a);
    double cumulative = weight;
    for (int i = 0; i < count; ++i) out[i] = weight * y[i];
    for (int n = 1;; ++n) {
      // y <- M y
      for (int i = 0; i < count; ++i) {
        const double ratio = rates[i] / lambda_max;
        const double up = (i + 1 < count) ? y[i + 1] : 0.0;
        y[i] = (1.0 - ratio) * y[i] + ratio * up;
      }
      weight *= a / n;
      cumulative += weight;
      for (int i = 0; i < count; ++i) out[i] += weight * y[i];
      if (cumulative >= 1.0 - 1e-16 && n >= a) break;
      if (n > 64 + 40 * static_cast<int>(std::sqrt(a) + 1)) break;
    }
    w.assign(out.begin(), out.end());
  }
  return std::clamp(w[0], 0.0, 1.0);
}

// Stack-based grouping for the hot path. Returns the number of groups.
int group_on_stack(const double* rates, int count, double rel_tol,
                   double* group_values, int* group_mult) {
  std::array<double, kMaxStackK> sorted{};
  std::copy(rates, rates + count, sorted.begin());
  std::sort(sorted.begin(), sorted.begin() + count);

  int n_groups = 0;
  double sum = sorted[0];
  int members = 1;
  for (int i = 1; i < count; ++i) {
    const double prev = sorted[i - 1];
    const double cur = sorted[i];
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), std::abs(prev))) {
      sum += cur;
      ++members;
    } else {
      group_values[n_groups] = sum / members;
      group_mult[n_groups] = members;
      ++n_groups;
      sum = cur;
      members = 1;
    }
  }
  group_values[n_groups] = sum / members;
  group_mult[n_groups] = members;
  ++n_groups;

  // multiplicity desc, then value desc
  std::array<int, kMaxStackK> order{};
  for (int i = 0; i < n_groups; ++i) order[i] = i;
  std::sort(order.begin(), order.begin() + n_groups, [&](int a, int b) {
    if (group_mult[a] != group_mult[b]) return group_mult[a] > group_mult[b];
    return group_values[a] > group_values[b];
  });
  std::array<double, kMaxStackK> gv{};
  std::array<int, kMaxStackK> gm{};
  for (int i = 0; i < n_groups; ++i) {
    gv[i] = group_values[order[i]];
    gm[i] = group_mult[order[i]];
  }
  std::copy(gv.begin(), gv.begin() + n_groups, group_values);
  std::copy(gm.begin(), gm.begin() + n_groups, group_mult);
  return n_groups;
}

// Dispatch on the grouped representation. Total: always lands in [0,1].
double tail_from_groups(const double* values, const int* mult, int n_groups,
                        double theta) {
  int total = 0;
  for (int g = 0; g < n_groups; ++g) {
    if (!(values[g] > 0.0)) return 1.0;
    total += mult[g];
  }
  if (theta <= 0.0) return 1.0;
  if (n_groups == 1) return std::clamp(erlang_tail(values[0] * theta, mult[0]), 0.0, 1.0);

  const auto expand_and_oracle = [&] {
    std::array<double, 64> flat{};
    int k = 0;
    for (int g = 0; g < n_groups; ++g)
      for (int i = 0; i < mult[g]; ++i) flat[k++] = values[g];
    return oracle_from_rates(flat.data(), k, theta);
  };

  // Distinct-but-close group values make the 1/(v_h - v_g) factors explode.
  for (int g = 0; g < n_groups; ++g) {
    for (int h = g + 1; h < n_groups; ++h) {
      const double gap = std::abs(values[g] - values[h]);
      if (gap < kDegenerateGapTol * std::max(std::abs(values[g]), std::abs(values[h])))
        return expand_and_oracle();
    }
  }

  const PartialFractionTail pf = grouped_tail_pf(values, mult, n_groups, theta);
  // Cancellation guard: |error| <~ magnitude * K * eps must stay below 1e-11.
  if (pf.magnitude > 1e4) return expand_and_oracle();
  return std::clamp(pf.value, 0.0, 1.0);
}

std::string pattern_string(const int* mult, int n_groups) {
  std::string s = "(";
  for (int i = 0; i < n_groups; ++i) {
    if (i) s += ',';
    s += std::to_string(mult[i]);
  }
  s += ')';
  return s;
}

// One delay path: group on the stack, evaluate, optionally report the
// multiplicity pattern and stability.
double path_tail(const double* margins, int count, double theta,
                 std::string* pattern_out, bool* stable_out) {
  std::array<double, kMaxStackK> gv{};
  std::array<int, kMaxStackK> gm{};
  const int n_groups = group_on_stack(margins, count, kGroupRelTol, gv.data(), gm.data());
  bool stable = true;
  for (int g = 0; g < n_groups; ++g) stable = stable && gv[g] > 0.0;
  if (stable_out) *stable_out = stable;
  if (pattern_out) *pattern_out = pattern_string(gm.data(), n_groups);
  return tail_from_groups(gv.data(), gm.data(), n_groups, theta);
}

struct TierEval {
  TailResult result;
};

TierEval evaluate_tiers(const SystemParams& params, const OffloadingPolicy& policy,
                        LinkModel link_model, bool want_labels) {
  const ArrivalRates ar = derive_arrival_rates(params, policy, link_model);

  const double v_u = stability_margin(params.mu_u, ar.lam_u);
  const double edge_path[3] = {
      stability_margin(params.mu_ue, ar.lam_ue),
      stability_margin(params.mu_e, ar.lam_e),
      stability_margin(params.mu_eu, ar.lam_eu),
  };
  const double cloud_path[5] = {
      stability_margin(params.mu_ue, ar.lam_ue_cloud),
      stability_margin(params.mu_ec, ar.lam_ec),
      stability_margin(params.mu_c, ar.lam_c),
      stability_margin(params.mu_ce, ar.lam_ce),
      stability_margin(params.mu_eu, ar.lam_eu_cloud),
  };

  TierEval ev;
  TailResult& r = ev.result;
  r.p_u = tail_single(v_u, params.theta);
  r.stable_u = v_u > 0.0;
  r.p_e = path_tail(edge_path, 3, params.theta,
                    want_labels ? &r.case_e : nullptr, &r.stable_e);
  r.p_c = path_tail(cloud_path, 5, params.theta,
                    want_labels ? &r.case_c : nullptr, &r.stable_c);
  if (want_labels) r.case_u = "(1)";

  r.p_overall = (1.0 - policy.p_ue) * r.p_u +
                (1.0 - policy.p_ec) * policy.p_ue * r.p_e +
                policy.p_ue * policy.p_ec * r.p_c;
  return ev;
}

}  // namespace

ArrivalRates derive_arrival_rates(const SystemParams& params,
                                  const OffloadingPolicy& policy,
                                  LinkModel link_model) {
  const double lam = params.lambda_ext;
  const double m = static_cast<double>(params.m);
  const double n = static_cast<double>(params.n);

  ArrivalRates ar;
  ar.lam_u = (1.0 - policy.p_ue) * lam;
  ar.lam_e = m * (1.0 - policy.p_ec) * policy.p_ue * lam;
  ar.lam_ec = n * m * policy.p_ec * policy.p_ue * lam;
  ar.lam_c = ar.lam_ec;
  ar.lam_ce = ar.lam_ec;
  if (link_model == LinkModel::SharedLinks) {
    ar.lam_ue = m * policy.p_ue * lam;
    ar.lam_eu = ar.lam_ue;
    ar.lam_ue_cloud = ar.lam_ue;
    ar.lam_eu_cloud = ar.lam_eu;
  } else {
    ar.lam_ue = ar.lam_e;
    ar.lam_eu = ar.lam_e;
    ar.lam_ue_cloud = m * policy.p_ec * policy.p_ue * lam;
    ar.lam_eu_cloud = ar.lam_ue_cloud;
  }
  return ar;
}

double stability_margin(double mu, double lam) { return mu - lam; }

double tail_single(double v, double theta) {
  if (v <= 0.0) return 1.0;
  if (theta <= 0.0) return 1.0;
  return std::exp(-v * theta);
}

RateVector group_rates(const std::vector<double>& rates, double rel_tol) {
  if (rates.empty()) throw std::invalid_argument("group_rates requires a non-empty list");
  RateVector rv;
  rv.rates = rates;
  if (rates.size() <= kMaxStackK) {
    std::array<double, kMaxStackK> gv{};
    std::array<int, kMaxStackK> gm{};
    const int n = group_on_stack(rates.data(), static_cast<int>(rates.size()),
                                 rel_tol, gv.data(), gm.data());
    rv.groups.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rv.groups.push_back({gv[i], gm[i]});
    return rv;
  }

  std::vector<double> sorted = rates;
  std::sort(sorted.begin(), sorted.end());
  double sum = sorted[0];
  int members = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (std::abs(sorted[i] - sorted[i - 1]) <=
        rel_tol * std::max(std::abs(sorted[i]), std::abs(sorted[i - 1]))) {
      sum += sorted[i];
      ++members;
    } else {
      rv.groups.push_back({sum / members, members});
      sum = sorted[i];
      members = 1;
    }
  }
  rv.groups.push_back({sum / members, members});
  std::sort(rv.groups.begin(), rv.groups.end(), [](const RateGroup& a, const RateGroup& b) {
    if (a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
    return a.value > b.value;
  });
  return rv;
}

std::string RateVector::pattern() const {
  std::string s = "(";
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(groups[i].multiplicity);
  }
  s += ')';
  return s;
}

double tail_hypoexp(const RateVector& rv, double theta) {
  if (rv.groups.empty()) throw std::invalid_argument("tail_hypoexp requires grouped rates");
  std::vector<double> values(rv.groups.size());
  std::vector<int> mult(rv.groups.size());
  for (std::size_t i = 0; i < rv.groups.size(); ++i) {
    values[i] = rv.groups[i].value;
    mult[i] = rv.groups[i].multiplicity;
  }
  return tail_from_groups(values.data(), mult.data(), static_cast<int>(values.size()), theta);
}

double tail_hypoexp(std::span<const double> rates, double theta) {
  return tail_hypoexp(group_rates(std::vector<double>(rates.begin(), rates.end())), theta);
}

double tail_oracle(const RateVector& rv, double theta) {
  return oracle_from_rates(rv.rates.data(), static_cast<int>(rv.rates.size()), theta);
}

double tail_oracle(std::span<const double> rates, double theta) {
  return oracle_from_rates(rates.data(), static_cast<int>(rates.size()), theta);
}

TailResult tier_tails(const SystemParams& params, const OffloadingPolicy& policy,
                      LinkModel link_model) {
  return evaluate_tiers(params, policy, link_model, true).result;
}

double overall_tail(const SystemParams& params, const OffloadingPolicy& policy,
                    LinkModel link_model) {
  return evaluate_tiers(params, policy, link_model, false).result.p_overall;
}

}  // namespace offload::model
