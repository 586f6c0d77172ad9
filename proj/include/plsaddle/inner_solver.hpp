#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "plsaddle/bounds.hpp"
#include "plsaddle/problem.hpp"

namespace plsaddle {

/// Raised when an iterate, gradient or objective value stops being finite.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Count iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  Count iteration() const { return iteration_; }

 private:
  Count iteration_;
};

enum class InnerStop { CriterionMet, CapReached };

struct InnerResult {
  Vector y_hat;
  Count iterations = 0;  // ascent steps taken
  double final_grad_norm = 0.0;
  InnerStop stop_reason = InnerStop::CriterionMet;
};

/// Default ascent-step cap: the closed-form ceiling on steps until the
/// stopping rule fires, assuming f(x, y*) - f(x, y0) <= C2.
inline Count default_inner_cap(const PLConstants& constants, double gamma, double C2) {
  return thm1_inner_bound(constants, gamma, C2);
}

/// Gradient ascent y <- y + (1/L22) grad_y f(x, y) stopping as soon as
/// |grad_y f(x, y)| <= mu2 gamma, which certifies |y - y*(x)| <= gamma.
/// The rule is evaluated before each step, so a compliant y0 returns with
/// zero iterations; the cap bounds the number of steps taken.
inline InnerResult solve_inner(const SaddleProblem& problem, const Vector& x, const Vector& y0,
                               double gamma, Count cap) {
  if (!(gamma > 0.0)) throw std::invalid_argument("solve_inner: gamma must be positive");
  if (cap < 1) throw std::invalid_argument("solve_inner: cap must be at least 1");
  problem.constants.validate();
  if (x.size() != problem.dim_x || y0.size() != problem.dim_y)
    throw std::invalid_argument("solve_inner: dimension mismatch");

  const double step = 1.0 / problem.constants.L22;
  const double threshold = problem.constants.mu2 * gamma;

  Vector y = y0;
  for (Count m = 0;; ++m) {
    const Vector g = problem.grad_y(x, y);
    if (!g.allFinite()) throw SolverError("solve_inner: non-finite gradient", m);
    const double norm = g.norm();
    if (norm <= threshold) return {std::move(y), m, norm, InnerStop::CriterionMet};
    if (m == cap) return {std::move(y), cap, norm, InnerStop::CapReached};
    y += step * g;
    if (!y.allFinite()) throw SolverError("solve_inner: non-finite iterate", m + 1);
  }
}

}  // namespace plsaddle
