#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "plsaddle/problem.hpp"

namespace plsaddle {

using Count = std::int64_t;

namespace detail {

// Ceiling clamped to [1, int64 max]. The gamma^-2 bounds blow past the
// integer range for extreme tolerances; saturate rather than overflow.
inline Count ceil_count(double v) {
  if (!(v > 0.0)) return 1;
  const double c = std::ceil(v);
  if (c >= 9.2e18) return std::numeric_limits<Count>::max();
  return std::max<Count>(1, static_cast<Count>(c));
}

inline Count saturating_product(Count a, Count b) {
  if (static_cast<double>(a) * static_cast<double>(b) >= 9.2e18)
    return std::numeric_limits<Count>::max();
  return a * b;
}

}  // namespace detail

/// Smoothness constant of the outer objective g(x) = max_y f(x, y):
/// L = L11 + L12^2 / mu2.
inline double smoothness_L(const PLConstants& c) { return c.L11 + c.L12 * c.L12 / c.mu2; }

/// Ceiling on inner ascent steps until the inner stopping rule
/// |grad_y| <= mu2 gamma fires: ceil((L22/mu2) ln(2 C2 / (L12^2 g^2 mu2^2))),
/// clamped to 1 when the log argument is at most 1.
inline Count thm1_inner_bound(const PLConstants& c, double gamma, double C2) {
  const double arg = 2.0 * C2 / (c.L12 * c.L12 * gamma * gamma * c.mu2 * c.mu2);
  if (arg <= 1.0) return 1;
  return detail::ceil_count(c.L22 / c.mu2 * std::log(arg));
}

/// Log-free ceiling on outer steps until |grad_x f(x, y_hat)| <= sqrt(6) L12 gamma:
/// ceil(2 C1 (L11 + L12^2/mu2) / (L12^2 g^2)). Very loose but needs no mu1.
inline Count thm2_outer_bound(const PLConstants& c, double gamma, double C1) {
  return detail::ceil_count(2.0 * C1 * smoothness_L(c) / (c.L12 * c.L12 * gamma * gamma));
}

/// Outer-step ceiling using mu1:
/// ceil(((L11 mu2 + L12^2) / (mu1 mu2)) ln(C1 mu1 / (6 L12^2 g^2))).
inline Count thm3_outer_bound(const PLConstants& c, double gamma, double C1) {
  const double arg = C1 * c.mu1 / (6.0 * c.L12 * c.L12 * gamma * gamma);
  if (arg <= 1.0) return 1;
  return detail::ceil_count((c.L11 * c.mu2 + c.L12 * c.L12) / (c.mu1 * c.mu2) * std::log(arg));
}

/// Variant of the mu1-based outer ceiling with the mu1 factor dropped from
/// the log argument; reported alongside the nominal bound so both forms of
/// the N* column are available.
inline Count thm3_outer_bound_table_variant(const PLConstants& c, double gamma, double C1) {
  const double arg = C1 / (6.0 * c.L12 * c.L12 * gamma * gamma);
  if (arg <= 1.0) return 1;
  return detail::ceil_count((c.L11 * c.mu2 + c.L12 * c.L12) / (c.mu1 * c.mu2) * std::log(arg));
}

/// Fixed-budget iteration counts for target accuracy epsilon on g:
///   k = ceil((L/mu1) ln(2 C1 / eps)),
///   p = ceil((L22/mu2) ln(2 C2 / (eps mu1 mu2))),
/// each clamped to 1 (flagged) when the log argument is at most 1.
struct ClassicalCounts {
  Count k = 1;
  Count p = 1;
  Count total = 1;  // k * p
  bool k_clamped = false;
  bool p_clamped = false;
};

inline ClassicalCounts classical_bounds(const PLConstants& c, double epsilon, double C1,
                                        double C2) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("classical_bounds: epsilon must be positive");
  ClassicalCounts out;
  const double karg = 2.0 * C1 / epsilon;
  if (karg <= 1.0) {
    out.k_clamped = true;
  } else {
    out.k = detail::ceil_count(smoothness_L(c) / c.mu1 * std::log(karg));
  }
  const double parg = 2.0 * C2 / (epsilon * c.mu1 * c.mu2);
  if (parg <= 1.0) {
    out.p_clamped = true;
  } else {
    out.p = detail::ceil_count(c.L22 / c.mu2 * std::log(parg));
  }
  out.total = detail::saturating_product(out.k, out.p);
  return out;
}

/// Quality certified once the outer stopping rule has fired:
/// function gap at most 7 L12^2 g^2 / mu1, argument distance at most
/// sqrt(14) L12 g / mu1.
struct QualityGuarantees {
  double gap = 0.0;
  double arg = 0.0;
};

inline QualityGuarantees quality_guarantees(const PLConstants& c, double gamma) {
  return {7.0 * c.L12 * c.L12 * gamma * gamma / c.mu1,
          std::sqrt(14.0) * c.L12 * gamma / c.mu1};
}

/// Every closed-form quantity for one (constants, gamma, C1, C2) choice.
/// The classical counts are evaluated at the epsilon matching gamma through
/// L12^2 gamma^2 = epsilon mu1.
struct BoundSet {
  double gamma = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double L = 0.0;
  Count thm1_inner = 1;
  Count thm2_outer = 1;
  Count thm3_outer = 1;
  Count thm3_outer_table_variant = 1;
  double epsilon = 0.0;  // classical target matching gamma
  Count classical_k = 1;
  Count classical_p = 1;
  Count classical_total = 1;
  bool classical_clamped = false;
  double gap_guarantee = 0.0;
  double arg_guarantee = 0.0;
};

inline BoundSet evaluate_bounds(const PLConstants& c, double gamma, double C1 = 100.0,
                                double C2 = 100.0) {
  if (!(gamma > 0.0)) throw std::invalid_argument("evaluate_bounds: gamma must be positive");
  if (!(C1 > 0.0 && C2 > 0.0)) throw std::invalid_argument("evaluate_bounds: C1, C2 must be positive");
  c.validate();
  BoundSet b;
  b.gamma = gamma;
  b.C1 = C1;
  b.C2 = C2;
  b.L = smoothness_L(c);
  b.thm1_inner = thm1_inner_bound(c, gamma, C2);
  b.thm2_outer = thm2_outer_bound(c, gamma, C1);
  b.thm3_outer = thm3_outer_bound(c, gamma, C1);
  b.thm3_outer_table_variant = thm3_outer_bound_table_variant(c, gamma, C1);
  b.epsilon = c.L12 * c.L12 * gamma * gamma / c.mu1;
  const ClassicalCounts cc = classical_bounds(c, b.epsilon, C1, C2);
  b.classical_k = cc.k;
  b.classical_p = cc.p;
  b.classical_total = cc.total;
  b.classical_clamped = cc.k_clamped || cc.p_clamped;
  const QualityGuarantees q = quality_guarantees(c, gamma);
  b.gap_guarantee = q.gap;
  b.arg_guarantee = q.arg;
  return b;
}

}  // namespace plsaddle
