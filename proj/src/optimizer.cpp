#include "offload/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "offload/delay_model.hpp"

namespace offload::opt {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

Objective make_objective(const SystemParams& params) {
  return [params](double p_ue, double p_ec) {
    return model::overall_tail(params, {p_ue, p_ec});
  };
}

}  // namespace

void SgsConfig::validate() const {
  if (!(initial_p >= 0.0 && initial_p <= 1.0))
    throw std::invalid_argument("initial_p must lie in [0,1]");
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial_step must be positive");
  if (!(step_floor > 0.0)) throw std::invalid_argument("step_floor must be positive");
  if (!(initial_step > step_floor))
    throw std::invalid_argument("initial_step must exceed step_floor");
  if (!(objective_eps > 0.0)) throw std::invalid_argument("objective_eps must be positive");
  if (!(outer_eps > 0.0)) throw std::invalid_argument("outer_eps must be positive");
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be positive");
}

double coordinate_search(const Objective& objective, const OffloadingPolicy& fixed,
                         Coordinate which, const SgsConfig& cfg) {
  cfg.validate();
  const auto eval = [&](double x) {
    return which == Coordinate::PUe ? objective(x, fixed.p_ec)
                                    : objective(fixed.p_ue, x);
  };

  double current = which == Coordinate::PUe ? fixed.p_ue : fixed.p_ec;
  double f_current = eval(current);

  // Restart k probes with step initial_step/sqrt(k), first in the +
  // direction. A worse candidate flips the direction once around the current
  // point; a second failure ends the probe round. Improvements move the
  // current point and keep probing the same way.
  for (long k = 1;; ++k) {
    const double step = cfg.initial_step / std::sqrt(static_cast<double>(k));
    if (step < cfg.step_floor) break;

    double direction = 1.0;
    bool flipped = false;
    for (;;) {
      const double candidate = clamp01(current + direction * step);
      const double f_candidate = eval(candidate);
      if (std::abs(f_candidate - f_current) < cfg.objective_eps) break;
      if (f_candidate > f_current) {
        if (flipped) break;
        flipped = true;
        direction = -direction;
      } else {
        current = candidate;
        f_current = f_candidate;
        flipped = false;
      }
    }
  }
  return current;
}

double coordinate_search(const SystemParams& params, const OffloadingPolicy& fixed,
                         Coordinate which, const SgsConfig& cfg) {
  params.validate();
  fixed.validate();
  return coordinate_search(make_objective(params), fixed, which, cfg);
}

OptResult sgs_optimize(const Objective& objective, const SgsConfig& cfg,
                       std::optional<OffloadingPolicy> start) {
  cfg.validate();
  OffloadingPolicy policy{cfg.initial_p, cfg.initial_p};
  if (start) {
    start->validate();
    policy = *start;
  }

  OptResult result;
  result.trace.push_back({policy, objective(policy.p_ue, policy.p_ec)});
  OffloadingPolicy best = policy;
  double best_objective = result.trace.back().second;

  int outer = 0;
  bool converged = false;
  while (outer < cfg.max_outer_iters) {
    ++outer;
    const OffloadingPolicy before = policy;

    policy.p_ec = coordinate_search(objective, policy, Coordinate::PEc, cfg);
    result.trace.push_back({policy, objective(policy.p_ue, policy.p_ec)});
    policy.p_ue = coordinate_search(objective, policy, Coordinate::PUe, cfg);
    result.trace.push_back({policy, objective(policy.p_ue, policy.p_ec)});

    const double f = result.trace.back().second;
    if (f < best_objective) {
      best_objective = f;
      best = policy;
    }
    if (std::abs(before.p_ue - policy.p_ue) < cfg.outer_eps &&
        std::abs(before.p_ec - policy.p_ec) < cfg.outer_eps) {
      converged = true;
      break;
    }
  }

  result.outer_iterations = outer;
  result.converged = converged;
  result.policy = converged ? policy : best;
  result.objective = objective(result.policy.p_ue, result.policy.p_ec);
  return result;
}

OptResult sgs_optimize(const SystemParams& params, const SgsConfig& cfg,
                       std::optional<OffloadingPolicy> start) {
  params.validate();
  return sgs_optimize(make_objective(params), cfg, start);
}

OptResult grid_search(const Objective& objective, double resolution,
                      OffloadingPolicy lo, OffloadingPolicy hi) {
  if (!(resolution > 0.0 && resolution <= 0.5))
    throw std::invalid_argument("resolution must lie in (0, 0.5]");
  lo.validate();
  hi.validate();
  if (lo.p_ue > hi.p_ue || lo.p_ec > hi.p_ec)
    throw std::invalid_argument("grid bounds must satisfy lo <= hi");

  const auto axis_count = [&](double a, double b) {
    return static_cast<int>(std::floor((b - a) / resolution + 1e-9)) + 1;
  };
  const int nx = axis_count(lo.p_ue, hi.p_ue);
  const int ny = axis_count(lo.p_ec, hi.p_ec);

  std::vector<double> values(static_cast<std::size_t>(nx) * ny);
  const auto point = [&](int i, int j) {
    return OffloadingPolicy{clamp01(lo.p_ue + i * resolution),
                            clamp01(lo.p_ec + j * resolution)};
  };

  const auto eval_rows = [&](int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i)
      for (int j = 0; j < ny; ++j) {
        const OffloadingPolicy p = point(i, j);
        values[static_cast<std::size_t>(i) * ny + j] = objective(p.p_ue, p.p_ec);
      }
  };

  const int workers = std::min<int>(nx, std::max(1u, std::thread::hardware_concurrency()));
  if (workers > 1 && static_cast<long>(nx) * ny > 4096) {
    std::vector<std::future<void>> futures;
    const int chunk = (nx + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(nx, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, eval_rows, begin, end));
    }
    for (auto& f : futures) f.get();
  } else {
    eval_rows(0, nx);
  }

  // Scan in (p_ue asc, p_ec asc) order with strict improvement: the result is
  // independent of how the lattice was evaluated.
  OptResult result;
  double best = values[0];
  int bi = 0, bj = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double v = values[static_cast<std::size_t>(i) * ny + j];
      if (v < best) {
        best = v;
        bi = i;
        bj = j;
      }
    }
  result.policy = point(bi, bj);
  result.objective = best;
  result.outer_iterations = 0;
  result.converged = true;
  return result;
}

OptResult grid_search(const SystemParams& params, double resolution,
                      OffloadingPolicy lo, OffloadingPolicy hi) {
  params.validate();
  return grid_search(make_objective(params), resolution, lo, hi);
}

}  // namespace offload::opt
