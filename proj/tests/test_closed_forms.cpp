// Literal closed-form expressions for every multiplicity pattern of three-
// and five-hop paths, kept as an independent reference for the general
// partial-fraction implementation. Each is written exactly in its derived
// per-pattern shape rather than through the shared repeated-pole machinery.

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "offload/delay_model.hpp"

using offload::model::group_rates;
using offload::model::tail_hypoexp;

namespace {

double single_tail(double v, double theta) { return std::exp(-v * theta); }

// K = 3, all rates distinct.
double k3_distinct(double v1, double v2, double v3, double theta) {
  return v1 * v2 * v3 *
         (1.0 / (v3 - v1) * 1.0 / (v2 - v1) * 1.0 / v1 * std::exp(-v1 * theta) -
          (1.0 / (v3 - v2) * 1.0 / (v2 - v1)) * 1.0 / v2 * std::exp(-v2 * theta) +
          1.0 / (v3 - v1) * 1.0 / (v3 - v2) * 1.0 / v3 * std::exp(-v3 * theta));
}

// K = 3, all rates equal: Erlang with r = 3.
double k3_erlang(double v, double theta) {
  double sum = 0.0;
  for (int i = 0; i <= 2; ++i)
    sum += std::pow(v * theta, i) / std::tgamma(i + 1.0) * std::exp(-v * theta);
  return sum;
}

// K = 3, two rates equal (v1 = v2 != v3).
double k3_two_one(double v1, double v3, double theta) {
  return v1 * v1 * v3 *
         (1.0 / ((v3 - v1) * (v3 - v1)) * 1.0 / v3 * std::exp(-v3 * theta) -
          1.0 / ((v3 - v1) * (v3 - v1)) * 1.0 / v1 * std::exp(-v1 * theta) +
          1.0 / (v3 - v1) * 1.0 / (v1 * v1) *
              (std::exp(-v1 * theta) + v1 * theta * std::exp(-v1 * theta)));
}

// K = 5, all rates distinct.
double k5_distinct(double v1, double v2, double v3, double v4, double v5, double theta) {
  const double c = v1 * v2 * v3 * v4 * v5;
  return c * (1.0 / (v5 - v1) * 1.0 / (v4 - v1) * 1.0 / (v3 - v1) * 1.0 / (v2 - v1) *
                  1.0 / v1 * std::exp(-v1 * theta) -
              1.0 / (v5 - v2) * 1.0 / (v4 - v2) * 1.0 / (v3 - v2) * 1.0 / (v2 - v1) *
                  1.0 / v2 * std::exp(-v2 * theta) +
              1.0 / (v5 - v3) * 1.0 / (v4 - v3) * 1.0 / (v3 - v2) * 1.0 / (v3 - v1) *
                  1.0 / v3 * std::exp(-v3 * theta) -
              1.0 / (v5 - v4) * 1.0 / (v4 - v3) * 1.0 / (v4 - v2) * 1.0 / (v4 - v1) *
                  1.0 / v4 * std::exp(-v4 * theta) +
              1.0 / (v5 - v4) * 1.0 / (v5 - v3) * 1.0 / (v5 - v2) * 1.0 / (v5 - v1) *
                  1.0 / v5 * std::exp(-v5 * theta));
}

// K = 5, all rates equal: Erlang with r = 5.
double k5_erlang(double v, double theta) {
  double sum = 0.0;
  for (int i = 0; i <= 4; ++i)
    sum += std::pow(v * theta, i) / std::tgamma(i + 1.0) * std::exp(-v * theta);
  return sum;
}

double p4(double x) { return x * x * x * x; }
double p3(double x) { return x * x * x; }
double p2(double x) { return x * x; }

// K = 5, pattern (4,1): v1 = v2 = v3 = v4 != v5.
double k5_four_one(double v1, double v5, double theta) {
  const double c = p4(v1) * v5;
  const double e1 = std::exp(-v1 * theta);
  const double x = v1 * theta;
  return c * (-1.0 / p4(v5 - v1) * 1.0 / v1 * e1 +
              1.0 / p3(v5 - v1) * 1.0 / p2(v1) * (e1 + x * e1) -
              1.0 / p2(v5 - v1) * 1.0 / p3(v1) * (e1 + x * e1 + x * x / 2.0 * e1) +
              1.0 / (v5 - v1) * 1.0 / p4(v1) *
                  (e1 + x * e1 + x * x / 2.0 * e1 + x * x * x / 6.0 * e1) +
              1.0 / p4(v5 - v1) * 1.0 / v5 * std::exp(-v5 * theta));
}

// K = 5, pattern (3,1,1): v1 = v2 = v3, v4 and v5 distinct.
double k5_three_one_one(double v1, double v4, double v5, double theta) {
  const double c = p3(v1) * v4 * v5;
  const double e1 = std::exp(-v1 * theta);
  const double x = v1 * theta;
  return c * ((p2(v4 - v1) + p2(v5 - v1) + (v4 - v1) * (v5 - v1)) /
                  (p3(v4 - v1) * p3(v5 - v1)) * 1.0 / v1 * e1 +
              (2.0 * v1 - v4 - v5) / (p2(v4 - v1) * p2(v5 - v1)) * 1.0 / p2(v1) *
                  (e1 + x * e1) +
              1.0 / ((v4 - v1) * (v5 - v1)) * 1.0 / p3(v1) *
                  (e1 + x * e1 + x * x / 2.0 * e1) -
              1.0 / (p3(v4 - v1) * (v5 - v4)) * 1.0 / v4 * std::exp(-v4 * theta) +
              1.0 / (p3(v5 - v1) * (v5 - v4)) * 1.0 / v5 * std::exp(-v5 * theta));
}

// K = 5, pattern (3,2): v1 = v2 = v3 != v4 = v5.
double k5_three_two(double v1, double v4, double theta) {
  const double c = p3(v1) * p2(v4);
  const double e1 = std::exp(-v1 * theta);
  const double e4 = std::exp(-v4 * theta);
  const double x1 = v1 * theta;
  const double x4 = v4 * theta;
  return c * (3.0 / p4(v4 - v1) * 1.0 / v1 * e1 -
              2.0 / p3(v4 - v1) * 1.0 / p2(v1) * (e1 + x1 * e1) +
              1.0 / p2(v4 - v1) * 1.0 / p3(v1) * (e1 + x1 * e1 + x1 * x1 / 2.0 * e1) -
              3.0 / p4(v4 - v1) * 1.0 / v4 * e4 -
              1.0 / p3(v4 - v1) * 1.0 / p2(v4) * (e4 + x4 * e4));
}

// K = 5, pattern (2,1,1,1): v1 = v2, the rest distinct.
double k5_two_one_one_one(double v1, double v3, double v4, double v5, double theta) {
  const double c = p2(v1) * v3 * v4 * v5;
  const double e1 = std::exp(-v1 * theta);
  const double x = v1 * theta;
  return c * ((-1.0 / ((v5 - v3) * (v4 - v3) * p2(v3 - v1)) +
               1.0 / ((v5 - v4) * (v4 - v3) * p2(v4 - v1)) -
               1.0 / ((v5 - v3) * (v5 - v4) * p2(v5 - v1))) *
                  1.0 / v1 * e1 +
              (1.0 / ((v5 - v3) * (v4 - v3) * (v3 - v1)) -
               1.0 / ((v5 - v4) * (v4 - v3) * (v4 - v1)) +
               1.0 / ((v5 - v3) * (v5 - v4) * (v5 - v1))) *
                  1.0 / p2(v1) * (e1 + x * e1) +
              1.0 / ((v5 - v3) * (v4 - v3) * p2(v3 - v1)) * 1.0 / v3 *
                  std::exp(-v3 * theta) -
              1.0 / ((v5 - v4) * (v4 - v3) * p2(v4 - v1)) * 1.0 / v4 *
                  std::exp(-v4 * theta) +
              1.0 / ((v5 - v3) * (v5 - v4) * p2(v5 - v1)) * 1.0 / v5 *
                  std::exp(-v5 * theta));
}

// K = 5, pattern (2,2,1): v1 = v2 != v3 = v4 != v5.
double k5_two_two_one(double v1, double v3, double v5, double theta) {
  const double c = p2(v1) * p2(v3) * v5;
  const double e1 = std::exp(-v1 * theta);
  const double e3 = std::exp(-v3 * theta);
  const double x1 = v1 * theta;
  const double x3 = v3 * theta;
  return c * ((3.0 * v1 - v3 - 2.0 * v5) / (p3(v3 - v1) * p2(v5 - v1)) * 1.0 / v1 * e1 +
              1.0 / (p2(v3 - v1) * (v5 - v1)) * 1.0 / p2(v1) * (e1 + x1 * e1) +
              (v1 - 3.0 * v3 + 2.0 * v5) / (p3(v3 - v1) * p2(v5 - v3)) * 1.0 / v3 * e3 +
              1.0 / (p2(v3 - v1) * (v5 - v3)) * 1.0 / p2(v3) * (e3 + x3 * e3) +
              1.0 / (p2(v5 - v1) * p2(v5 - v3)) * 1.0 / v5 * std::exp(-v5 * theta));
}

// well-separated admissible draws: distinct values differ by at least 8%
std::vector<double> separated_values(std::mt19937_64& gen, int count) {
  std::uniform_real_distribution<double> log_rate(std::log(0.3), std::log(8.0));
  std::vector<double> v;
  while (static_cast<int>(v.size()) < count) {
    const double candidate = std::exp(log_rate(gen));
    bool ok = true;
    for (double existing : v)
      ok = ok && std::abs(candidate - existing) >
                     0.08 * std::max(std::abs(candidate), std::abs(existing));
    if (ok) v.push_back(candidate);
  }
  return v;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

constexpr int kTrials = 100;
constexpr double kRelTol = 1e-8;

}  // namespace

TEST_CASE("general tail matches the per-pattern closed forms") {
  std::mt19937_64 gen(777);
  std::uniform_real_distribution<double> theta_dist(0.1, 2.0);

  SUBCASE("single hop") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 1);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(tail_hypoexp(group_rates({v[0]}), theta),
                     single_tail(v[0], theta)) <= kRelTol);
    }
  }

  SUBCASE("three hops, distinct") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 3);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(tail_hypoexp(group_rates({v[0], v[1], v[2]}), theta),
                     k3_distinct(v[0], v[1], v[2], theta)) <= kRelTol);
    }
  }

  SUBCASE("three hops, all equal") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 1);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(tail_hypoexp(group_rates({v[0], v[0], v[0]}), theta),
                     k3_erlang(v[0], theta)) <= kRelTol);
    }
  }

  SUBCASE("three hops, pattern (2,1)") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 2);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(tail_hypoexp(group_rates({v[0], v[0], v[1]}), theta),
                     k3_two_one(v[0], v[1], theta)) <= kRelTol);
    }
  }

  SUBCASE("five hops, distinct") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 5);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(tail_hypoexp(group_rates(v), theta),
                     k5_distinct(v[0], v[1], v[2], v[3], v[4], theta)) <= kRelTol);
    }
  }

  SUBCASE("five hops, all equal") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 1);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(
                tail_hypoexp(group_rates({v[0], v[0], v[0], v[0], v[0]}), theta),
                k5_erlang(v[0], theta)) <= kRelTol);
    }
  }

  SUBCASE("five hops, pattern (4,1)") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 2);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(
                tail_hypoexp(group_rates({v[0], v[0], v[0], v[0], v[1]}), theta),
                k5_four_one(v[0], v[1], theta)) <= kRelTol);
    }
  }

  SUBCASE("five hops, pattern (3,1,1)") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 3);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(
                tail_hypoexp(group_rates({v[0], v[0], v[0], v[1], v[2]}), theta),
                k5_three_one_one(v[0], v[1], v[2], theta)) <= kRelTol);
    }
  }

  SUBCASE("five hops, pattern (3,2)") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 2);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(
                tail_hypoexp(group_rates({v[0], v[0], v[0], v[1], v[1]}), theta),
                k5_three_two(v[0], v[1], theta)) <= kRelTol);
    }
  }

  SUBCASE("five hops, pattern (2,1,1,1)") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 4);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(
                tail_hypoexp(group_rates({v[0], v[0], v[1], v[2], v[3]}), theta),
                k5_two_one_one_one(v[0], v[1], v[2], v[3], theta)) <= kRelTol);
    }
  }

  SUBCASE("five hops, pattern (2,2,1)") {
    for (int t = 0; t < kTrials; ++t) {
      const auto v = separated_values(gen, 3);
      const double theta = theta_dist(gen);
      CHECK(rel_diff(
                tail_hypoexp(group_rates({v[0], v[0], v[1], v[1], v[2]}), theta),
                k5_two_two_one(v[0], v[1], v[2], theta)) <= kRelTol);
    }
  }
}
