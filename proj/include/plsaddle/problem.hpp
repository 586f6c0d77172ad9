#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace plsaddle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Blockwise gradient Lipschitz constants and the two PL moduli of a
/// min-max objective. L11/L22 bound the diagonal blocks, L12/L21 the cross
/// blocks; mu1/mu2 are the gradient-dominance moduli of the x- and y-block.
struct PLConstants {
  double L11 = 0.0;
  double L12 = 0.0;
  double L21 = 0.0;
  double L22 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;

  void validate() const {
    if (!(L11 > 0.0 && L12 > 0.0 && L21 > 0.0 && L22 > 0.0 && mu1 > 0.0 && mu2 > 0.0))
      throw std::invalid_argument("PLConstants: all constants must be strictly positive");
    if (mu1 > L11)
      throw std::invalid_argument("PLConstants: mu1 cannot exceed L11");
    if (mu2 > L22)
      throw std::invalid_argument("PLConstants: mu2 cannot exceed L22");
  }
};

struct KnownSaddle {
  Vector x;
  Vector y;
  double value = 0.0;
};

/// A smooth saddle objective f(x, y) with analytic block gradients.
/// Instances are immutable after construction and safe to share across
/// concurrent solver runs.
struct SaddleProblem {
  std::string name;
  Eigen::Index dim_x = 0;
  Eigen::Index dim_y = 0;

  std::function<double(const Vector&, const Vector&)> f;
  std::function<Vector(const Vector&, const Vector&)> grad_x;
  std::function<Vector(const Vector&, const Vector&)> grad_y;

  PLConstants constants;
  std::optional<KnownSaddle> known_saddle;

  // Analytic partial optima where the structure admits them; empty otherwise.
  // max_over_y(x) returns max_y f(x, y); min_over_x(y) returns min_x f(x, y).
  std::function<double(const Vector&)> max_over_y;
  std::function<double(const Vector&)> min_over_x;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

inline bool nearly_symmetric(const Matrix& m) {
  if (m.rows() != m.cols() || m.size() == 0) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale;
}

// Largest eigenvalue and smallest eigenvalue above a relative cutoff of a
// symmetric PSD block. The cutoff treats a singular block's PL modulus as
// its least nonzero eigenvalue.
inline std::pair<double, double> psd_block_spectrum(const Matrix& h, const std::string& which) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector& ev = es.eigenvalues();  // ascending
  const double lmax = ev(ev.size() - 1);
  if (!(lmax > 0.0))
    throw std::invalid_argument(which + ": degenerate block, PL modulus undefined");
  const double cutoff = 1e-9 * lmax;
  if (ev(0) < -cutoff)
    throw std::invalid_argument(which + ": block is not positive semidefinite");
  double mu = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) {
      mu = ev(i);
      break;
    }
  }
  return {lmax, mu};
}

// Orthonormal basis of range(m), as columns.
inline Matrix range_basis(const Matrix& m) {
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return Matrix::Zero(m.rows(), 0);
  return Matrix(qr.householderQ()) * Matrix::Identity(m.rows(), rank);
}

// Symmetric PSD square root with negative eigenvalue noise clamped to zero.
inline Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Vector d = es.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/// Constants of a quadratic saddle objective from its Hessian blocks.
/// hessian_xx must be symmetric PSD, hessian_yy symmetric NSD. L12 falls back
/// to `cross_floor` when the cross block is exactly zero, because the solver
/// thresholds divide and multiply by it; a truly decoupled problem is better
/// solved as two independent PL problems.
inline PLConstants quadratic_constants(const Matrix& hessian_xx, const Matrix& hessian_xy,
                                       const Matrix& hessian_yy, double cross_floor = 1e-8) {
  detail::require(hessian_xx.rows() == hessian_xx.cols() && hessian_xx.size() > 0,
                  "quadratic_constants: hessian_xx must be square and nonempty");
  detail::require(hessian_yy.rows() == hessian_yy.cols() && hessian_yy.size() > 0,
                  "quadratic_constants: hessian_yy must be square and nonempty");
  detail::require(detail::nearly_symmetric(hessian_xx),
                  "quadratic_constants: hessian_xx must be symmetric");
  detail::require(detail::nearly_symmetric(hessian_yy),
                  "quadratic_constants: hessian_yy must be symmetric");

  PLConstants c;
  std::tie(c.L11, c.mu1) = detail::psd_block_spectrum(hessian_xx, "quadratic_constants: hessian_xx");
  std::tie(c.L22, c.mu2) = detail::psd_block_spectrum(Matrix(-hessian_yy), "quadratic_constants: hessian_yy");
  if (hessian_xy.size() == 0 || hessian_xy.isZero(0.0)) {
    c.L12 = cross_floor;
  } else {
    c.L12 = Eigen::JacobiSVD<Matrix>(hessian_xy).singularValues()(0);
  }
  c.L21 = c.L12;
  c.validate();
  return c;
}

/// f(x, y) = x^2 + 3 sin^2(x) sin^2(y) - 4 y^2 - 10 sin^2(y), a 1-D/1-D
/// nonconvex-nonconcave objective with two-sided gradient dominance
/// (mu1 = 1/16, mu2 = 1/14, L11 = 8, L22 = 28). Only the upper bound
/// L12, L21 <= L22 is declared for the cross constants; `cross_lipschitz`
/// overrides the default 28.
inline SaddleProblem make_sin_quadratic_2d(double cross_lipschitz = 28.0) {
  SaddleProblem p;
  p.name = "sin_quadratic_2d";
  p.dim_x = 1;
  p.dim_y = 1;
  p.f = [](const Vector& x, const Vector& y) {
    const double sx = std::sin(x(0));
    const double sy = std::sin(y(0));
    return x(0) * x(0) + 3.0 * sx * sx * sy * sy - 4.0 * y(0) * y(0) - 10.0 * sy * sy;
  };
  p.grad_x = [](const Vector& x, const Vector& y) {
    const double sy = std::sin(y(0));
    Vector g(1);
    g(0) = 2.0 * x(0) + 3.0 * std::sin(2.0 * x(0)) * sy * sy;
    return g;
  };
  p.grad_y = [](const Vector& x, const Vector& y) {
    const double sx = std::sin(x(0));
    Vector g(1);
    g(0) = (3.0 * sx * sx - 10.0) * std::sin(2.0 * y(0)) - 8.0 * y(0);
    return g;
  };
  p.constants = {8.0, cross_lipschitz, cross_lipschitz, 28.0, 1.0 / 16.0, 1.0 / 14.0};
  p.known_saddle = KnownSaddle{Vector::Zero(1), Vector::Zero(1), 0.0};
  // 3 sin^2 x - 10 < 0 everywhere, so the inner maximizer is y = 0; the
  // x-part x^2 + 3 sin^2(x) sin^2(y) is nonnegative and vanishes at x = 0.
  p.max_over_y = [](const Vector& x) { return x(0) * x(0); };
  p.min_over_x = [](const Vector& y) {
    const double sy = std::sin(y(0));
    return -4.0 * y(0) * y(0) - 10.0 * sy * sy;
  };
  return p;
}

/// The 3-D/3-D benchmark objective
/// f(x, y) = |x|^2 + 3 sin^2(x1) sin^2(y1) - 4 y1^2 - 3 y2^2 - 2 y3^2 - 10 sin^2(y1)
/// with the same constants as the 1-D sin problem and saddle point at 0.
inline SaddleProblem make_experiment_6d(double cross_lipschitz = 28.0) {
  SaddleProblem p;
  p.name = "experiment_6d";
  p.dim_x = 3;
  p.dim_y = 3;
  p.f = [](const Vector& x, const Vector& y) {
    const double sx = std::sin(x(0));
    const double sy = std::sin(y(0));
    return x.squaredNorm() + 3.0 * sx * sx * sy * sy - 4.0 * y(0) * y(0) -
           3.0 * y(1) * y(1) - 2.0 * y(2) * y(2) - 10.0 * sy * sy;
  };
  p.grad_x = [](const Vector& x, const Vector& y) {
    const double sy = std::sin(y(0));
    Vector g = 2.0 * x;
    g(0) += 3.0 * std::sin(2.0 * x(0)) * sy * sy;
    return g;
  };
  p.grad_y = [](const Vector& x, const Vector& y) {
    const double sx = std::sin(x(0));
    Vector g(3);
    g(0) = (3.0 * sx * sx - 10.0) * std::sin(2.0 * y(0)) - 8.0 * y(0);
    g(1) = -6.0 * y(1);
    g(2) = -4.0 * y(2);
    return g;
  };
  p.constants = {8.0, cross_lipschitz, cross_lipschitz, 28.0, 1.0 / 16.0, 1.0 / 14.0};
  p.known_saddle = KnownSaddle{Vector::Zero(3), Vector::Zero(3), 0.0};
  p.max_over_y = [](const Vector& x) { return x.squaredNorm(); };
  p.min_over_x = [](const Vector& y) {
    const double sy = std::sin(y(0));
    return -4.0 * y(0) * y(0) - 3.0 * y(1) * y(1) - 2.0 * y(2) * y(2) - 10.0 * sy * sy;
  };
  return p;
}

/// Robust least squares: f(x, y) = |Ax - y|_M^2 - lambda |y - y0|_M^2 with
/// M symmetric PSD and lambda > 1. Constants come from the Hessian blocks;
/// the saddle point is computed from the stationarity system when it is
/// nonsingular and left empty otherwise.
inline SaddleProblem make_rls(const Matrix& A, const Matrix& M, const Vector& y0, double lambda) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  detail::require(m > 0 && n > 0, "make_rls: A must be nonempty");
  detail::require(M.rows() == m && M.cols() == m, "make_rls: M must be square with rows(A) rows");
  detail::require(y0.size() == m, "make_rls: y0 must have rows(A) entries");
  detail::require(lambda > 1.0, "make_rls: lambda must exceed 1");
  detail::require(detail::nearly_symmetric(M), "make_rls: M must be symmetric");
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    detail::require(es.eigenvalues()(0) >= -1e-9 * norm,
                    "make_rls: M must be positive semidefinite");
  }

  SaddleProblem p;
  p.name = "rls";
  p.dim_x = n;
  p.dim_y = m;
  p.f = [A, M, y0, lambda](const Vector& x, const Vector& y) {
    const Vector r = A * x - y;
    const Vector s = y - y0;
    return r.dot(M * r) - lambda * s.dot(M * s);
  };
  p.grad_x = [A, M](const Vector& x, const Vector& y) {
    return Vector(2.0 * (A.transpose() * (M * (A * x - y))));
  };
  p.grad_y = [A, M, y0, lambda](const Vector& x, const Vector& y) {
    return Vector(-2.0 * (M * (A * x - y)) - 2.0 * lambda * (M * (y - y0)));
  };

  const Matrix hxx = 2.0 * A.transpose() * M * A;
  const Matrix hxy = -2.0 * A.transpose() * M;
  const Matrix hyy = -2.0 * (lambda - 1.0) * M;
  p.constants = quadratic_constants(hxx, hxy, hyy);

  // Blockwise stationarity system; keep the solution only when it is unique
  // and the gradients actually vanish there.
  Matrix K(n + m, n + m);
  K.topLeftCorner(n, n) = A.transpose() * M * A;
  K.topRightCorner(n, m) = -A.transpose() * M;
  K.bottomLeftCorner(m, n) = -M * A;
  K.bottomRightCorner(m, m) = (1.0 - lambda) * M;
  Vector rhs = Vector::Zero(n + m);
  rhs.tail(m) = -lambda * (M * y0);
  Eigen::FullPivLU<Matrix> lu(K);
  if (lu.isInvertible()) {
    const Vector z = lu.solve(rhs);
    KnownSaddle ks{z.head(n), z.tail(m), 0.0};
    if (p.grad_x(ks.x, ks.y).norm() <= 1e-10 && p.grad_y(ks.x, ks.y).norm() <= 1e-10) {
      ks.value = p.f(ks.x, ks.y);
      p.known_saddle = std::move(ks);
    }
  }

  // max_y f(x, .) is attained where Ax + (lambda - 1) y = lambda y0 (which
  // zeroes grad_y for any M), giving lambda/(lambda-1) |Ax - y0|_M^2.
  p.max_over_y = [A, M, y0, lambda](const Vector& x) {
    const Vector r = A * x - y0;
    return lambda / (lambda - 1.0) * r.dot(M * r);
  };
  // min_x |Ax - y|_M^2 as a least-squares problem on M^{1/2} A.
  {
    const Matrix msqrt = detail::psd_sqrt(M);
    const Matrix MA = msqrt * A;
    auto cod = std::make_shared<Eigen::CompleteOrthogonalDecomposition<Matrix>>(MA);
    p.min_over_x = [cod, MA, msqrt, M, y0, lambda](const Vector& y) {
      const Vector xstar = cod->solve(msqrt * y);
      const Vector s = y - y0;
      return (MA * xstar - msqrt * y).squaredNorm() - lambda * s.dot(M * s);
    };
  }
  return p;
}

/// Composed quadratic f(x, y) = (a/2)|Ax|^2 + <Ax, By> - (b/2)|By|^2 with
/// a = strong_convexity, b = strong_concavity and arbitrary A, B mapping into
/// a common space. (0, 0) is always a saddle point.
inline SaddleProblem make_composed_quadratic(const Matrix& A, const Matrix& B,
                                             double strong_convexity, double strong_concavity) {
  detail::require(strong_convexity > 0.0, "make_composed_quadratic: strong_convexity must be positive");
  detail::require(strong_concavity > 0.0, "make_composed_quadratic: strong_concavity must be positive");
  detail::require(A.size() > 0 && B.size() > 0, "make_composed_quadratic: A and B must be nonempty");
  detail::require(A.rows() == B.rows(),
                  "make_composed_quadratic: A and B must map into the same space");
  const double a = strong_convexity;
  const double b = strong_concavity;

  SaddleProblem p;
  p.name = "composed_quadratic";
  p.dim_x = A.cols();
  p.dim_y = B.cols();
  p.f = [A, B, a, b](const Vector& x, const Vector& y) {
    const Vector u = A * x;
    const Vector v = B * y;
    return 0.5 * a * u.squaredNorm() + u.dot(v) - 0.5 * b * v.squaredNorm();
  };
  p.grad_x = [A, B, a](const Vector& x, const Vector& y) {
    return Vector(A.transpose() * (a * (A * x) + B * y));
  };
  p.grad_y = [A, B, b](const Vector& x, const Vector& y) {
    return Vector(B.transpose() * (A * x - b * (B * y)));
  };
  p.constants = quadratic_constants(a * A.transpose() * A, A.transpose() * B,
                                    -b * B.transpose() * B);
  p.known_saddle = KnownSaddle{Vector::Zero(p.dim_x), Vector::Zero(p.dim_y), 0.0};

  // Partial optima via projections onto range(B) and range(A):
  //   max_y f = (a/2)|Ax|^2 + |P_B Ax|^2 / (2b),
  //   min_x f = -(b/2)|By|^2 - |P_A By|^2 / (2a).
  const Matrix qa = detail::range_basis(A);
  const Matrix qb = detail::range_basis(B);
  p.max_over_y = [A, a, b, qb](const Vector& x) {
    const Vector u = A * x;
    return 0.5 * a * u.squaredNorm() + (qb.transpose() * u).squaredNorm() / (2.0 * b);
  };
  p.min_over_x = [B, a, b, qa](const Vector& y) {
    const Vector v = B * y;
    return -0.5 * b * v.squaredNorm() - (qa.transpose() * v).squaredNorm() / (2.0 * a);
  };
  return p;
}

}  // namespace plsaddle
