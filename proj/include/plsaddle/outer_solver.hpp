#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "plsaddle/inner_solver.hpp"
#include "plsaddle/rng.hpp"

namespace plsaddle {

enum class InitStrategy { RandomY0, WarmStart };
enum class OuterCapPolicy { Theorem3, Theorem2, Manual };
enum class OuterStop { Rule1Met, CapReached, FixedBudgetDone };

struct SolverConfig {
  double gamma = 1e-3;       // inner accuracy target by argument
  double C1 = 100.0;         // initial-gap bounds, used only inside iteration caps
  double C2 = 100.0;
  InitStrategy init_strategy = InitStrategy::WarmStart;
  double init_box_radius = 5.0;  // box half-width for random inner starts
  std::uint64_t seed = 0;
  OuterCapPolicy outer_cap_policy = OuterCapPolicy::Theorem3;
  Count manual_outer_cap = 1;
  double inner_cap_scale = 1.0;  // safety multiplier on the inner cap for misdeclared C2
  bool record_history = false;

  void validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("SolverConfig: gamma must be positive");
    if (!(C1 > 0.0 && C2 > 0.0)) throw std::invalid_argument("SolverConfig: C1, C2 must be positive");
    if (!(init_box_radius > 0.0))
      throw std::invalid_argument("SolverConfig: init_box_radius must be positive");
    if (!(inner_cap_scale > 0.0))
      throw std::invalid_argument("SolverConfig: inner_cap_scale must be positive");
    if (outer_cap_policy == OuterCapPolicy::Manual && manual_outer_cap < 1)
      throw std::invalid_argument("SolverConfig: manual outer cap must be at least 1");
  }
};

struct HistoryRecord {
  Count k = 0;
  double inexact_grad_norm = 0.0;  // |grad_x f(x_k, y_hat_k)|
  double value = 0.0;              // f(x_k, y_hat_k), a proxy for g(x_k)
};

struct SaddleReport {
  Vector x_hat;
  Vector y_hat;
  Count outer_iterations = 0;        // N
  Count inner_iterations_total = 0;  // sum of p_k
  double inner_iterations_mean = 0.0;
  Count inner_solves = 0;
  Count grad_evals_total = 0;  // every grad_x and grad_y call
  double final_value = 0.0;    // f(x_hat, y_hat)
  std::optional<double> final_gap;  // final_value - f* when the saddle is known
  double final_grad_norm_x = 0.0;
  OuterStop stop_reason = OuterStop::Rule1Met;
  Count inner_cap_hits = 0;     // inner solves that ran into their cap
  bool counts_clamped = false;  // fixed-budget counts were clamped to 1
  std::optional<std::vector<HistoryRecord>> history;
};

inline Count outer_cap_from_policy(const SolverConfig& config, const PLConstants& c) {
  switch (config.outer_cap_policy) {
    case OuterCapPolicy::Theorem3:
      return thm3_outer_bound(c, config.gamma, config.C1);
    case OuterCapPolicy::Theorem2:
      return thm2_outer_bound(c, config.gamma, config.C1);
    case OuterCapPolicy::Manual:
      break;
  }
  return config.manual_outer_cap;
}

namespace detail {

inline void check_dims(const SaddleProblem& problem, const Vector& x0, const Vector& y0,
                       const char* who) {
  if (x0.size() != problem.dim_x || y0.size() != problem.dim_y)
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

inline void finish_report(SaddleReport& report, const SaddleProblem& problem) {
  report.inner_iterations_mean =
      report.inner_solves > 0
          ? static_cast<double>(report.inner_iterations_total) / static_cast<double>(report.inner_solves)
          : 0.0;
  report.final_value = problem.f(report.x_hat, report.y_hat);
  if (problem.known_saddle)
    report.final_gap = report.final_value - problem.known_saddle->value;
}

}  // namespace detail

/// Inexact gradient descent on g(x) = max_y f(x, y). Each outer iteration
/// solves the inner problem to argument accuracy gamma, checks the stopping
/// rule |grad_x f(x_k, y_hat)| <= sqrt(6) L12 gamma before stepping, and
/// otherwise steps with the constant step mu2 / (L11 mu2 + L12^2) = 1/L.
/// Inner starts follow the init strategy: a fresh uniform draw per outer
/// iteration (RandomY0) or the previous y_hat (WarmStart, first iteration
/// uses the supplied y0).
inline SaddleReport solve_saddle(const SaddleProblem& problem, const Vector& x0, const Vector& y0,
                                 const SolverConfig& config) {
  config.validate();
  problem.constants.validate();
  detail::check_dims(problem, x0, y0, "solve_saddle");

  const PLConstants& c = problem.constants;
  const double step = c.mu2 / (c.L11 * c.mu2 + c.L12 * c.L12);
  const double threshold = std::sqrt(6.0) * c.L12 * config.gamma;
  const Count inner_cap = std::max<Count>(
      1, static_cast<Count>(std::ceil(
             static_cast<double>(default_inner_cap(c, config.gamma, config.C2)) *
             config.inner_cap_scale)));
  const Count outer_cap = outer_cap_from_policy(config, c);

  std::mt19937_64 rng(config.seed);
  SaddleReport report;
  if (config.record_history) report.history.emplace();

  Vector x = x0;
  Vector inner_start = y0;
  Vector best_x;
  Vector best_y;
  double best_norm = std::numeric_limits<double>::infinity();

  for (Count k = 0;; ++k) {
    if (config.init_strategy == InitStrategy::RandomY0)
      inner_start = sample_uniform(problem.dim_y, config.init_box_radius, rng);
    InnerResult inner = solve_inner(problem, x, inner_start, config.gamma, inner_cap);
    if (inner.stop_reason == InnerStop::CapReached) ++report.inner_cap_hits;
    report.inner_iterations_total += inner.iterations;
    ++report.inner_solves;

    const Vector gx = problem.grad_x(x, inner.y_hat);
    if (!gx.allFinite()) throw SolverError("solve_saddle: non-finite outer gradient", k);
    const double norm = gx.norm();
    if (config.record_history)
      report.history->push_back({k, norm, problem.f(x, inner.y_hat)});
    if (norm < best_norm) {
      best_norm = norm;
      best_x = x;
      best_y = inner.y_hat;
    }

    if (norm <= threshold) {
      report.stop_reason = OuterStop::Rule1Met;
      report.outer_iterations = k;
      report.x_hat = std::move(x);
      report.y_hat = std::move(inner.y_hat);
      report.final_grad_norm_x = norm;
      break;
    }
    if (k == outer_cap) {
      // Soft outcome: hand back the iterate with the smallest inexact
      // gradient norm seen so far.
      report.stop_reason = OuterStop::CapReached;
      report.outer_iterations = outer_cap;
      report.x_hat = std::move(best_x);
      report.y_hat = std::move(best_y);
      report.final_grad_norm_x = best_norm;
      break;
    }

    x -= step * gx;
    if (!x.allFinite()) throw SolverError("solve_saddle: non-finite iterate", k + 1);
    if (config.init_strategy == InitStrategy::WarmStart) inner_start = std::move(inner.y_hat);
  }

  // Each inner solve evaluates grad_y iterations+1 times (the stopping checks)
  // and each outer iteration evaluates grad_x once.
  report.grad_evals_total = report.inner_iterations_total + 2 * report.inner_solves;
  detail::finish_report(report, problem);
  return report;
}

/// Classical fixed-budget scheme: runs exactly k outer iterations of exactly
/// p inner ascent steps each, with no runtime criteria anywhere. k and p come
/// from the closed-form counts for target accuracy epsilon; the matching
/// inner tolerance satisfies L12^2 gamma^2 = epsilon mu1.
inline SaddleReport solve_fixed_budget(const SaddleProblem& problem, const Vector& x0,
                                       const Vector& y0, double epsilon,
                                       const SolverConfig& config) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solve_fixed_budget: epsilon must be positive");
  config.validate();
  problem.constants.validate();
  detail::check_dims(problem, x0, y0, "solve_fixed_budget");

  const PLConstants& c = problem.constants;
  const ClassicalCounts counts = classical_bounds(c, epsilon, config.C1, config.C2);
  const double step = c.mu2 / (c.L11 * c.mu2 + c.L12 * c.L12);
  const double inner_step = 1.0 / c.L22;

  std::mt19937_64 rng(config.seed);
  SaddleReport report;
  report.counts_clamped = counts.k_clamped || counts.p_clamped;
  if (config.record_history) report.history.emplace();

  Vector x = x0;
  Vector y = y0;
  double last_norm = 0.0;
  for (Count k = 0; k < counts.k; ++k) {
    if (config.init_strategy == InitStrategy::RandomY0)
      y = sample_uniform(problem.dim_y, config.init_box_radius, rng);
    for (Count m = 0; m < counts.p; ++m) {
      const Vector gy = problem.grad_y(x, y);
      if (!gy.allFinite()) throw SolverError("solve_fixed_budget: non-finite inner gradient", m);
      y += inner_step * gy;
      if (!y.allFinite()) throw SolverError("solve_fixed_budget: non-finite inner iterate", m + 1);
    }
    const Vector gx = problem.grad_x(x, y);
    if (!gx.allFinite()) throw SolverError("solve_fixed_budget: non-finite outer gradient", k);
    last_norm = gx.norm();
    if (config.record_history) report.history->push_back({k, last_norm, problem.f(x, y)});
    x -= step * gx;
    if (!x.allFinite()) throw SolverError("solve_fixed_budget: non-finite iterate", k + 1);
  }

  report.stop_reason = OuterStop::FixedBudgetDone;
  report.outer_iterations = counts.k;
  report.inner_solves = counts.k;
  report.inner_iterations_total = detail::saturating_product(counts.k, counts.p);
  report.grad_evals_total = detail::saturating_product(counts.k, counts.p + 1);
  report.final_grad_norm_x = last_norm;
  report.x_hat = std::move(x);
  report.y_hat = std::move(y);
  detail::finish_report(report, problem);
  report.inner_iterations_mean = static_cast<double>(counts.p);
  return report;
}

}  // namespace plsaddle
