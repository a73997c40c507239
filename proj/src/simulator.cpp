#include "offload/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>
#include <vector>

#include "offload/rng.hpp"

namespace offload::sim {

namespace {

enum StreamPurpose : std::uint64_t {
  kStreamArrival = 1,
  kStreamRoute = 2,
  kStreamService = 3,
  kStreamMc = 4,
};

enum Route : std::uint8_t { kLocal = 0, kEdge = 1, kCloud = 2 };

constexpr int kRouteLength[3] = {1, 3, 5};

// Queue index layout for one replication's network.
struct Layout {
  int n_ue = 0;
  int n_edge = 0;
  bool split = false;
  int up0 = 0, edge0 = 0, down0 = 0;  // per-edge blocks
  int ec = 0, cloud = 0, ce = 0;      // global cloud-tier queues
  int upc0 = 0, downc0 = 0;           // cloud-class links (split only)
  int total = 0;

  static Layout make(const SystemParams& p, LinkModel model) {
    Layout l;
    l.n_ue = p.m * p.n;
    l.n_edge = p.n;
    l.split = model == LinkModel::SplitLinks;
    l.up0 = l.n_ue;
    l.edge0 = l.up0 + l.n_edge;
    l.down0 = l.edge0 + l.n_edge;
    l.ec = l.down0 + l.n_edge;
    l.cloud = l.ec + 1;
    l.ce = l.cloud + 1;
    l.total = l.ce + 1;
    if (l.split) {
      l.upc0 = l.total;
      l.downc0 = l.upc0 + l.n_edge;
      l.total = l.downc0 + l.n_edge;
    }
    return l;
  }

  int queue_for_hop(Route route, int hop, int ue, int edge) const {
    switch (route) {
      case kLocal:
        return ue;
      case kEdge:
        return hop == 0 ? up0 + edge : (hop == 1 ? edge0 + edge : down0 + edge);
      case kCloud: {
        const int up = split ? upc0 + edge : up0 + edge;
        const int down = split ? downc0 + edge : down0 + edge;
        switch (hop) {
          case 0: return up;
          case 1: return ec;
          case 2: return cloud;
          case 3: return ce;
          default: return down;
        }
      }
    }
    return -1;
  }

  double service_rate(const SystemParams& p, int q) const {
    if (q < n_ue) return p.mu_u;
    if (q < edge0) return p.mu_ue;
    if (q < down0) return p.mu_e;
    if (q < ec) return p.mu_eu;
    if (q == ec) return p.mu_ec;
    if (q == cloud) return p.mu_c;
    if (q == ce) return p.mu_ce;
    if (split && q < downc0) return p.mu_ue;
    return p.mu_eu;
  }

  std::string queue_name(int q) const {
    if (q < n_ue) return "ue/" + std::to_string(q);
    if (q < edge0) return "up/" + std::to_string(q - up0);
    if (q < down0) return "edge/" + std::to_string(q - edge0);
    if (q < ec) return "down/" + std::to_string(q - down0);
    if (q == ec) return "ec";
    if (q == cloud) return "cloud";
    if (q == ce) return "ce";
    if (split && q < downc0) return "up-cloud/" + std::to_string(q - upc0);
    return "down-cloud/" + std::to_string(q - downc0);
  }
};

struct Task {
  double ext_arrival = 0.0;
  std::int32_t ue = 0;
  Route route = kLocal;
  std::int8_t hop = 0;
  bool alive = false;
};

struct Event {
  double time;
  std::int32_t priority;  // fixed queue priority for simultaneous events
  std::uint64_t seq;
  std::int32_t queue;     // queue index, or UE index for external arrivals
  std::int8_t kind;       // 0 external arrival, 1 service completion

  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    if (priority != o.priority) return priority > o.priority;
    return seq > o.seq;
  }
};

struct QueueState {
  double mu = 0.0;
  std::mt19937_64 service_rng;
  std::deque<std::pair<std::int32_t, double>> fifo;  // (task, enqueue time)
  bool busy = false;
  int n_in_system = 0;
  // accumulators, clipped to the measurement window
  double last_time = 0.0;
  double area_number = 0.0;
  double area_busy = 0.0;
  double sum_sojourn = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t completions = 0;
};

struct RepAccum {
  std::array<std::uint64_t, 3> completed{};
  std::array<std::uint64_t, 3> violated{};
  std::array<double, 3> sum_delay{};
  std::uint64_t generated = 0;
  std::uint64_t in_flight = 0;
  std::vector<QueueStats> queues;
  double window = 0.0;
};

class Replication {
 public:
  Replication(const SystemParams& params, const OffloadingPolicy& policy,
              const SimConfig& cfg, int rep)
      : params_(params), policy_(policy), cfg_(cfg), layout_(Layout::make(params, cfg.link_model)) {
    queues_.resize(static_cast<std::size_t>(layout_.total));
    for (int q = 0; q < layout_.total; ++q) {
      queues_[q].mu = layout_.service_rate(params, q);
      queues_[q].service_rng = rng::make_stream(cfg.seed, rep, kStreamService, q);
    }
    arrival_rng_.reserve(layout_.n_ue);
    route_rng_.reserve(layout_.n_ue);
    for (int u = 0; u < layout_.n_ue; ++u) {
      arrival_rng_.push_back(rng::make_stream(cfg.seed, rep, kStreamArrival, u));
      route_rng_.push_back(rng::make_stream(cfg.seed, rep, kStreamRoute, u));
    }
  }

  RepAccum run() {
    for (int u = 0; u < layout_.n_ue; ++u) schedule_arrival(u, 0.0);

    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.time > cfg_.horizon) break;
      events_.pop();
      if (ev.kind == 0) {
        on_external_arrival(ev.queue, ev.time);
      } else {
        on_completion(ev.queue, ev.time);
      }
    }

    RepAccum acc;
    acc.window = cfg_.horizon - cfg_.warmup;
    for (auto& q : queues_) account(q, cfg_.horizon);
    acc.queues.resize(queues_.size());
    for (std::size_t i = 0; i < queues_.size(); ++i) {
      const QueueState& q = queues_[i];
      QueueStats& s = acc.queues[i];
      s.utilization = q.area_busy / acc.window;
      s.mean_number = q.area_number / acc.window;
      s.arrival_rate = static_cast<double>(q.arrivals) / acc.window;
      s.mean_sojourn = q.completions ? q.sum_sojourn / static_cast<double>(q.completions) : 0.0;
      s.arrivals = q.arrivals;
      s.completions = q.completions;
    }
    acc.completed = completed_;
    acc.violated = violated_;
    acc.sum_delay = sum_delay_;
    acc.generated = generated_;
    for (const Task& t : tasks_)
      if (t.alive && t.ext_arrival >= cfg_.warmup) ++acc.in_flight;
    return acc;
  }

 private:
  void schedule_arrival(int ue, double from) {
    const double next = from + rng::exponential(arrival_rng_[ue], params_.lambda_ext);
    if (next <= cfg_.horizon)
      events_.push({next, layout_.total + ue, seq_++, ue, 0});
  }

  void account(QueueState& q, double now) {
    const double a = std::max(q.last_time, cfg_.warmup);
    const double b = std::min(now, cfg_.horizon);
    if (b > a) {
      q.area_number += q.n_in_system * (b - a);
      q.area_busy += (q.busy ? 1.0 : 0.0) * (b - a);
    }
    q.last_time = now;
  }

  void start_service(int qi, double now) {
    QueueState& q = queues_[qi];
    q.busy = true;
    const double s = rng::exponential(q.service_rng, q.mu);
    events_.push({now + s, qi, seq_++, qi, 1});
  }

  void enqueue(int qi, std::int32_t task, double now) {
    QueueState& q = queues_[qi];
    account(q, now);
    q.fifo.emplace_back(task, now);
    ++q.n_in_system;
    if (now >= cfg_.warmup) ++q.arrivals;
    if (!q.busy) start_service(qi, now);
  }

  void on_external_arrival(int ue, double now) {
    schedule_arrival(ue, now);

    Route route = kLocal;
    if (rng::uniform01(route_rng_[ue]) <= policy_.p_ue) {
      route = rng::uniform01(route_rng_[ue]) <= policy_.p_ec ? kCloud : kEdge;
    }

    std::int32_t idx;
    if (free_.empty()) {
      idx = static_cast<std::int32_t>(tasks_.size());
      tasks_.emplace_back();
    } else {
      idx = free_.back();
      free_.pop_back();
    }
    Task& t = tasks_[idx];
    t.ext_arrival = now;
    t.ue = ue;
    t.route = route;
    t.hop = 0;
    t.alive = true;
    if (now >= cfg_.warmup) ++generated_;

    enqueue(layout_.queue_for_hop(route, 0, ue, ue / params_.m), idx, now);
  }

  void on_completion(int qi, double now) {
    QueueState& q = queues_[qi];
    account(q, now);
    const auto [task_idx, enq_time] = q.fifo.front();
    q.fifo.pop_front();
    --q.n_in_system;
    if (now >= cfg_.warmup) {
      ++q.completions;
      q.sum_sojourn += now - enq_time;
    }
    if (!q.fifo.empty()) {
      start_service(qi, now);
    } else {
      q.busy = false;
    }

    Task& t = tasks_[task_idx];
    ++t.hop;
    if (t.hop < kRouteLength[t.route]) {
      enqueue(layout_.queue_for_hop(t.route, t.hop, t.ue, t.ue / params_.m), task_idx, now);
      return;
    }
    // Task leaves the system.
    if (t.ext_arrival >= cfg_.warmup) {
      const double delay = now - t.ext_arrival;
      ++completed_[t.route];
      sum_delay_[t.route] += delay;
      if (delay >= params_.theta) ++violated_[t.route];
    }
    t.alive = false;
    free_.push_back(task_idx);
  }

  const SystemParams& params_;
  const OffloadingPolicy& policy_;
  const SimConfig& cfg_;
  Layout layout_;
  std::vector<QueueState> queues_;
  std::vector<std::mt19937_64> arrival_rng_;
  std::vector<std::mt19937_64> route_rng_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::vector<Task> tasks_;
  std::vector<std::int32_t> free_;
  std::uint64_t seq_ = 0;
  std::array<std::uint64_t, 3> completed_{};
  std::array<std::uint64_t, 3> violated_{};
  std::array<double, 3> sum_delay_{};
  std::uint64_t generated_ = 0;
};

bool offered_load_saturated(const SystemParams& params, const OffloadingPolicy& policy,
                            LinkModel model) {
  const ArrivalRates ar = model::derive_arrival_rates(params, policy, model);
  const auto loaded = [](double lam, double mu) { return lam >= mu; };
  bool sat = loaded(ar.lam_u, params.mu_u) || loaded(ar.lam_e, params.mu_e) ||
             loaded(ar.lam_ue, params.mu_ue) || loaded(ar.lam_eu, params.mu_eu) ||
             loaded(ar.lam_ec, params.mu_ec) || loaded(ar.lam_c, params.mu_c) ||
             loaded(ar.lam_ce, params.mu_ce);
  if (model == LinkModel::SplitLinks)
    sat = sat || loaded(ar.lam_ue_cloud, params.mu_ue) || loaded(ar.lam_eu_cloud, params.mu_eu);
  return sat;
}

}  // namespace

void SimConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(warmup >= 0.0)) throw std::invalid_argument("warmup must be non-negative");
  if (!(horizon > warmup)) throw std::invalid_argument("horizon must exceed warmup");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

stats::BinomialCi mc_sample_tier(const model::RateVector& rv, double theta,
                                 std::uint64_t samples, std::uint64_t seed) {
  if (rv.rates.empty()) throw std::invalid_argument("mc_sample_tier requires rates");
  for (double v : rv.rates)
    if (!(v > 0.0)) throw std::invalid_argument("mc_sample_tier requires positive rates");
  if (samples < 1) throw std::invalid_argument("mc_sample_tier requires samples >= 1");

  std::mt19937_64 gen = rng::make_stream(seed, 0, kStreamMc, 0);
  std::uint64_t exceed = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    double total = 0.0;
    for (double v : rv.rates) total += rng::exponential(gen, v);
    if (total >= theta) ++exceed;
  }
  return stats::binomial_ci(exceed, samples);
}

SimReport des_run(const SystemParams& params, const OffloadingPolicy& policy,
                  const SimConfig& cfg) {
  params.validate();
  policy.validate();
  cfg.validate();

  const int reps = cfg.replications;
  std::vector<RepAccum> accs(static_cast<std::size_t>(reps));
  int workers = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, reps);

  const auto run_rep = [&](int rep) {
    Replication r(params, policy, cfg, rep);
    return r.run();
  };
  if (workers > 1) {
    std::vector<std::future<RepAccum>> futures;
    futures.reserve(static_cast<std::size_t>(reps));
    // Bounded fan-out: at most `workers` replications in flight.
    int next = 0;
    std::vector<std::pair<int, std::future<RepAccum>>> inflight;
    while (next < reps || !inflight.empty()) {
      while (next < reps && static_cast<int>(inflight.size()) < workers) {
        inflight.emplace_back(next, std::async(std::launch::async, run_rep, next));
        ++next;
      }
      auto& front = inflight.front();
      accs[static_cast<std::size_t>(front.first)] = front.second.get();
      inflight.erase(inflight.begin());
    }
  } else {
    for (int rep = 0; rep < reps; ++rep) accs[static_cast<std::size_t>(rep)] = run_rep(rep);
  }

  SimReport report;
  report.saturated = offered_load_saturated(params, policy, cfg.link_model);

  std::vector<double> rep_fraction;
  rep_fraction.reserve(static_cast<std::size_t>(reps));
  std::uint64_t all_completed = 0, all_violated = 0;
  for (const RepAccum& a : accs) {
    std::uint64_t c = 0, v = 0;
    for (int k = 0; k < 3; ++k) {
      report.per_tier_completed[k] += a.completed[k];
      report.per_tier_violations[k] += a.violated[k];
      report.per_tier_mean_delay[k] += a.sum_delay[k];
      c += a.completed[k];
      v += a.violated[k];
    }
    all_completed += c;
    all_violated += v;
    rep_fraction.push_back(c ? static_cast<double>(v) / static_cast<double>(c) : 0.0);
    report.tasks_generated += a.generated;
    report.tasks_in_flight += a.in_flight;
  }
  report.tasks_completed = all_completed;
  for (int k = 0; k < 3; ++k) {
    report.per_tier_violation[k] =
        report.per_tier_completed[k]
            ? static_cast<double>(report.per_tier_violations[k]) /
                  static_cast<double>(report.per_tier_completed[k])
            : 0.0;
    report.per_tier_mean_delay[k] =
        report.per_tier_completed[k]
            ? report.per_tier_mean_delay[k] / static_cast<double>(report.per_tier_completed[k])
            : 0.0;
  }
  report.violation_prob =
      all_completed ? static_cast<double>(all_violated) / static_cast<double>(all_completed) : 0.0;
  report.violation_half_width =
      reps >= 2 ? stats::replication_stats(rep_fraction).half_width
                : std::numeric_limits<double>::quiet_NaN();

  const Layout layout = Layout::make(params, cfg.link_model);
  const double total_window = (cfg.horizon - cfg.warmup) * reps;
  for (int q = 0; q < layout.total; ++q) {
    QueueStats agg;
    double busy = 0.0, number = 0.0, sojourn = 0.0;
    for (const RepAccum& a : accs) {
      busy += a.queues[q].utilization * a.window;
      number += a.queues[q].mean_number * a.window;
      sojourn += a.queues[q].mean_sojourn * static_cast<double>(a.queues[q].completions);
      agg.arrivals += a.queues[q].arrivals;
      agg.completions += a.queues[q].completions;
    }
    agg.utilization = busy / total_window;
    agg.mean_number = number / total_window;
    agg.arrival_rate = static_cast<double>(agg.arrivals) / total_window;
    agg.mean_sojourn = agg.completions ? sojourn / static_cast<double>(agg.completions) : 0.0;
    report.per_queue.emplace(layout.queue_name(q), agg);
  }
  return report;
}

}  // namespace offload::sim
