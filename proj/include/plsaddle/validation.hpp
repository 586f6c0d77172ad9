#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "plsaddle/inner_solver.hpp"
#include "plsaddle/rng.hpp"

namespace plsaddle {

/// Outcome of one empirical check. `worst_ratio` is normalized so that
/// `threshold` is the pass boundary; `passed` holds iff
/// worst_ratio <= threshold. Sampling can only falsify a declaration, never
/// certify it.
struct CheckReport {
  std::string check_name;
  bool passed = true;
  double worst_ratio = 0.0;
  double threshold = 1.0;
  std::string worst_point;
  Count samples = 0;
};

namespace detail {

inline std::string format_point(const Vector& x, const Vector& y) {
  std::ostringstream os;
  os.precision(12);
  os << "x=[";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? "," : "") << x(i);
  os << "] y=[";
  for (Eigen::Index i = 0; i < y.size(); ++i) os << (i ? "," : "") << y(i);
  os << "]";
  return os.str();
}

struct WorstTracker {
  double ratio = -std::numeric_limits<double>::infinity();
  std::string point;

  void update(double r, const Vector& x, const Vector& y) {
    if (r > ratio) {
      ratio = r;
      point = format_point(x, y);
    }
  }
};

inline CheckReport make_report(const std::string& name, const WorstTracker& worst,
                               double threshold, Count samples) {
  CheckReport r;
  r.check_name = name;
  r.worst_ratio = worst.ratio > -std::numeric_limits<double>::infinity() ? worst.ratio : 0.0;
  r.threshold = threshold;
  r.worst_point = worst.point;
  r.samples = samples;
  r.passed = worst.ratio <= threshold;
  return r;
}

// Plain gradient descent on x |-> f(x, y) with step 1/L11, stopping at
// |grad_x| <= mu1 * gamma; oracle for the x-block partial minimum.
inline double descend_min_x(const SaddleProblem& problem, const Vector& x_start, const Vector& y,
                            double gamma) {
  const PLConstants& c = problem.constants;
  const double step = 1.0 / c.L11;
  const double threshold = c.mu1 * gamma;
  const double arg = 2.0 * 100.0 / (c.mu1 * c.mu1 * gamma * gamma);
  const Count cap = 10 * ceil_count(c.L11 / c.mu1 * std::log(std::max(arg, std::exp(1.0))));
  Vector x = x_start;
  for (Count m = 0;; ++m) {
    const Vector g = problem.grad_x(x, y);
    if (!g.allFinite()) throw SolverError("descend_min_x: non-finite gradient", m);
    if (g.norm() <= threshold || m == cap) break;
    x -= step * g;
  }
  return problem.f(x, y);
}

}  // namespace detail

/// Compares analytic gradients against central finite differences of f at
/// seeded uniform points. worst_ratio is the largest hybrid relative error
/// |fd - grad| / (1 + |grad|); the pass threshold is 1e-5.
inline CheckReport check_gradients(const SaddleProblem& problem, Count n_samples,
                                   double box_radius, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("check_gradients: n_samples must be at least 1");
  std::mt19937_64 rng(seed);
  detail::WorstTracker worst;
  for (Count s = 0; s < n_samples; ++s) {
    Vector x = sample_uniform(problem.dim_x, box_radius, rng);
    Vector y = sample_uniform(problem.dim_y, box_radius, rng);
    const double h = 1e-6 * (1.0 + std::sqrt(x.squaredNorm() + y.squaredNorm()));

    Vector fd_x(problem.dim_x);
    for (Eigen::Index i = 0; i < problem.dim_x; ++i) {
      const double xi = x(i);
      x(i) = xi + h;
      const double fp = problem.f(x, y);
      x(i) = xi - h;
      const double fm = problem.f(x, y);
      x(i) = xi;
      fd_x(i) = (fp - fm) / (2.0 * h);
    }
    Vector fd_y(problem.dim_y);
    for (Eigen::Index i = 0; i < problem.dim_y; ++i) {
      const double yi = y(i);
      y(i) = yi + h;
      const double fp = problem.f(x, y);
      y(i) = yi - h;
      const double fm = problem.f(x, y);
      y(i) = yi;
      fd_y(i) = (fp - fm) / (2.0 * h);
    }

    const Vector gx = problem.grad_x(x, y);
    const Vector gy = problem.grad_y(x, y);
    worst.update((fd_x - gx).norm() / (1.0 + gx.norm()), x, y);
    worst.update((fd_y - gy).norm() / (1.0 + gy.norm()), x, y);
  }
  return detail::make_report("gradients", worst, 1e-5, n_samples);
}

/// Samples point pairs varying one block at a time and checks the four
/// declared Lipschitz constants; one report per inequality, in the order
/// L11, L12, L22, L21. Ratios at or below 1 + 1e-9 pass; the worst ratio is
/// an empirical estimate of constant / declared.
inline std::vector<CheckReport> check_lipschitz(const SaddleProblem& problem, Count n_pairs,
                                                double box_radius, std::uint64_t seed) {
  if (n_pairs < 1) throw std::invalid_argument("check_lipschitz: n_pairs must be at least 1");
  const PLConstants& c = problem.constants;
  std::mt19937_64 rng(seed);
  std::array<detail::WorstTracker, 4> worst;  // L11, L12, L22, L21
  for (Count s = 0; s < n_pairs; ++s) {
    const Vector x1 = sample_uniform(problem.dim_x, box_radius, rng);
    const Vector x2 = sample_uniform(problem.dim_x, box_radius, rng);
    const Vector y1 = sample_uniform(problem.dim_y, box_radius, rng);
    const Vector y2 = sample_uniform(problem.dim_y, box_radius, rng);
    const double dx = (x1 - x2).norm();
    const double dy = (y1 - y2).norm();

    if (dx > 0.0) {
      worst[0].update((problem.grad_x(x1, y1) - problem.grad_x(x2, y1)).norm() / (c.L11 * dx), x1, y1);
      worst[3].update((problem.grad_y(x1, y1) - problem.grad_y(x2, y1)).norm() / (c.L21 * dx), x1, y1);
    }
    if (dy > 0.0) {
      worst[1].update((problem.grad_x(x1, y1) - problem.grad_x(x1, y2)).norm() / (c.L12 * dy), x1, y1);
      worst[2].update((problem.grad_y(x1, y1) - problem.grad_y(x1, y2)).norm() / (c.L22 * dy), x1, y1);
    }
  }
  const double threshold = 1.0 + 1e-9;
  return {detail::make_report("lipschitz_L11", worst[0], threshold, n_pairs),
          detail::make_report("lipschitz_L12", worst[1], threshold, n_pairs),
          detail::make_report("lipschitz_L22", worst[2], threshold, n_pairs),
          detail::make_report("lipschitz_L21", worst[3], threshold, n_pairs)};
}

/// Checks the two gradient-dominance inequalities at seeded points; one
/// report per block (mu1 then mu2). Partial optima come from the problem's
/// analytic hooks when present, otherwise from gradient ascent/descent
/// oracles at argument accuracy inner_oracle_gamma; the oracle's value error
/// (at most L g^2 / 2) is folded into the denominator so a genuinely
/// dominated problem cannot fail through oracle inexactness.
inline std::vector<CheckReport> check_pl(const SaddleProblem& problem, Count n_samples,
                                         double box_radius, std::uint64_t seed,
                                         double inner_oracle_gamma = 1e-8) {
  if (n_samples < 1) throw std::invalid_argument("check_pl: n_samples must be at least 1");
  const PLConstants& c = problem.constants;
  if (!(c.mu1 > 0.0 && c.mu2 > 0.0 && c.L11 > 0.0 && c.L22 > 0.0))
    throw std::invalid_argument("check_pl: constants must be positive");

  std::mt19937_64 rng(seed);
  detail::WorstTracker worst_x;
  detail::WorstTracker worst_y;
  const double margin_y = c.mu2 * c.L22 * inner_oracle_gamma * inner_oracle_gamma;
  const double margin_x = c.mu1 * c.L11 * inner_oracle_gamma * inner_oracle_gamma;

  for (Count s = 0; s < n_samples; ++s) {
    const Vector x = sample_uniform(problem.dim_x, box_radius, rng);
    const Vector y = sample_uniform(problem.dim_y, box_radius, rng);
    const double fxy = problem.f(x, y);

    double tmax;
    double my = 0.0;
    if (problem.max_over_y) {
      tmax = problem.max_over_y(x);
    } else {
      const Count cap = 10 * default_inner_cap(c, inner_oracle_gamma, 100.0);
      tmax = problem.f(x, solve_inner(problem, x, y, inner_oracle_gamma, cap).y_hat);
      my = margin_y;
    }
    const double gy2 = problem.grad_y(x, y).squaredNorm();
    const double num_y = 2.0 * c.mu2 * (tmax - fxy);
    const double denom_y = gy2 + my;
    worst_y.update(denom_y > 0.0 ? num_y / denom_y
                                 : (num_y > 0.0 ? std::numeric_limits<double>::infinity() : 0.0),
                   x, y);

    double tmin;
    double mx = 0.0;
    if (problem.min_over_x) {
      tmin = problem.min_over_x(y);
    } else {
      tmin = detail::descend_min_x(problem, x, y, inner_oracle_gamma);
      mx = margin_x;
    }
    const double gx2 = problem.grad_x(x, y).squaredNorm();
    const double num_x = 2.0 * c.mu1 * (fxy - tmin);
    const double denom_x = gx2 + mx;
    worst_x.update(denom_x > 0.0 ? num_x / denom_x
                                 : (num_x > 0.0 ? std::numeric_limits<double>::infinity() : 0.0),
                   x, y);
  }
  const double threshold = 1.0 + 1e-6;
  return {detail::make_report("pl_mu1", worst_x, threshold, n_samples),
          detail::make_report("pl_mu2", worst_y, threshold, n_samples)};
}

/// The full battery: gradients, the four Lipschitz inequalities and the two
/// dominance inequalities, with the sample figures scaled off `n_samples`
/// (pairs = 10x, dominance points = 2x).
inline std::vector<CheckReport> run_all_checks(const SaddleProblem& problem, Count n_samples,
                                               double box_radius, std::uint64_t seed) {
  std::vector<CheckReport> reports;
  reports.push_back(check_gradients(problem, n_samples, box_radius, seed));
  for (auto& r : check_lipschitz(problem, 10 * n_samples, box_radius, seed + 1))
    reports.push_back(std::move(r));
  for (auto& r : check_pl(problem, 2 * n_samples, box_radius, seed + 2))
    reports.push_back(std::move(r));
  return reports;
}

}  // namespace plsaddle
