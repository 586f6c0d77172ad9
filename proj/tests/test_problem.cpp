#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "plsaddle/problem.hpp"
#include "plsaddle/validation.hpp"

using namespace plsaddle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("sin_quadratic_2d basics", "[problem]") {
  const SaddleProblem p = make_sin_quadratic_2d();
  CHECK(p.dim_x == 1);
  CHECK(p.dim_y == 1);
  CHECK(p.f(vec1(0), vec1(0)) == 0.0);
  CHECK(p.grad_x(vec1(0), vec1(0))(0) == 0.0);
  CHECK(p.constants.mu1 == 1.0 / 16.0);
  CHECK(p.constants.mu2 == 1.0 / 14.0);
  CHECK(p.constants.L11 == 8.0);
  CHECK(p.constants.L22 == 28.0);
  CHECK(p.constants.L12 == 28.0);
  CHECK(p.constants.L21 == 28.0);
  REQUIRE(p.known_saddle.has_value());
  CHECK(p.known_saddle->value == 0.0);

  const SaddleProblem tighter = make_sin_quadratic_2d(6.0);
  CHECK(tighter.constants.L12 == 6.0);
  CHECK(tighter.constants.L21 == 6.0);
}

TEST_CASE("experiment_6d values match hand differentiation", "[problem]") {
  const SaddleProblem p = make_experiment_6d();
  CHECK(p.f(Vector::Zero(3), Vector::Zero(3)) == 0.0);

  // d f / d y1 at x = 0, y = (0.1, 0, 0) is -8*0.1 - 10 sin(0.2).
  const Vector gy = p.grad_y(Vector::Zero(3), vec3(0.1, 0.0, 0.0));
  REQUIRE_THAT(gy(0), WithinRel(-8.0 * 0.1 - 10.0 * std::sin(0.2), 1e-14));
  CHECK(gy(1) == 0.0);
  CHECK(gy(2) == 0.0);

  // Direct evaluation: 1 + 3 sin^4(1) - 4 - 10 sin^2(1).
  const double s1 = std::sin(1.0);
  REQUIRE_THAT(p.f(vec3(1, 0, 0), vec3(1, 0, 0)),
               WithinRel(1.0 + 3.0 * s1 * s1 * s1 * s1 - 4.0 - 10.0 * s1 * s1, 1e-14));

  // Finite differences independently confirm both gradient blocks.
  const CheckReport fd = check_gradients(p, 100, 5.0, 20240601);
  CHECK(fd.passed);
}

TEST_CASE("gradients vanish at every known saddle", "[problem]") {
  const SaddleProblem problems[] = {
      make_sin_quadratic_2d(), make_experiment_6d(),
      make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0),
      make_rls(Matrix::Identity(1, 1), Matrix::Identity(1, 1), Vector::Zero(1), 2.0)};
  for (const SaddleProblem& p : problems) {
    INFO(p.name);
    REQUIRE(p.known_saddle.has_value());
    CHECK(p.grad_x(p.known_saddle->x, p.known_saddle->y).norm() <= 1e-10);
    CHECK(p.grad_y(p.known_saddle->x, p.known_saddle->y).norm() <= 1e-10);
  }
}

TEST_CASE("finite differences match every built-in gradient", "[problem]") {
  const SaddleProblem problems[] = {
      make_sin_quadratic_2d(), make_experiment_6d(),
      make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0),
      make_rls(Matrix::Identity(1, 1), Matrix::Identity(1, 1), Vector::Zero(1), 2.0)};
  for (const SaddleProblem& p : problems) {
    INFO(p.name);
    CHECK(check_gradients(p, 100, 5.0, 91).passed);
  }
}

TEST_CASE("declared Lipschitz constants are not falsified on the box", "[problem]") {
  const SaddleProblem problems[] = {make_sin_quadratic_2d(), make_experiment_6d()};
  for (const SaddleProblem& p : problems) {
    INFO(p.name);
    for (const CheckReport& r : check_lipschitz(p, 1000, 5.0, 7)) {
      INFO(r.check_name);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("quadratic dominance ratio is tight against the analytic maximum", "[problem]") {
  const SaddleProblem p =
      make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0);
  const auto reports = check_pl(p, 200, 5.0, 3);
  for (const CheckReport& r : reports) {
    INFO(r.check_name);
    CHECK(r.passed);
    // Identity curvature makes the inequality an equality at every point.
    REQUIRE_THAT(r.worst_ratio, WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("rls identity instance", "[problem]") {
  // f(x, y) = (x - y)^2 - 2 y^2
  const SaddleProblem p =
      make_rls(Matrix::Identity(1, 1), Matrix::Identity(1, 1), Vector::Zero(1), 2.0);
  CHECK(p.f(vec1(1), vec1(0)) == 1.0);
  CHECK(p.grad_x(vec1(1), vec1(0))(0) == 2.0);
  CHECK(p.constants.L22 == 2.0);
  CHECK(p.constants.mu2 == 2.0);
  REQUIRE(p.known_saddle.has_value());
  CHECK(p.known_saddle->x.norm() == 0.0);
  CHECK(p.known_saddle->y.norm() == 0.0);
  CHECK(p.known_saddle->value == 0.0);
}

TEST_CASE("rls rejects bad inputs", "[problem]") {
  const Matrix I1 = Matrix::Identity(1, 1);
  CHECK_THROWS_AS(make_rls(I1, I1, Vector::Zero(1), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_rls(I1, I1, Vector::Zero(1), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_rls(I1, -I1, Vector::Zero(1), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_rls(I1, I1, Vector::Zero(2), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_rls(I1, Matrix::Identity(2, 2), Vector::Zero(1), 2.0),
                  std::invalid_argument);
}

TEST_CASE("rls partial-optimum hooks dominate sampled values", "[problem]") {
  Matrix A(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  Vector diag(3);
  diag << 1.0, 0.5, 2.0;
  Vector y0(3);
  y0 << 1.0, -1.0, 0.5;
  const SaddleProblem p = make_rls(A, Matrix(diag.asDiagonal()), y0, 2.0);
  REQUIRE(p.known_saddle.has_value());
  CHECK(p.grad_x(p.known_saddle->x, p.known_saddle->y).norm() <= 1e-10);
  CHECK(p.grad_y(p.known_saddle->x, p.known_saddle->y).norm() <= 1e-10);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Vector x = sample_uniform(2, 5.0, rng);
    const Vector y = sample_uniform(3, 5.0, rng);
    CHECK(p.max_over_y(x) >= p.f(x, y) - 1e-9);
    CHECK(p.min_over_x(y) <= p.f(x, y) + 1e-9);
  }
}

TEST_CASE("composed quadratic identity instance", "[problem]") {
  const SaddleProblem p =
      make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0);
  CHECK(p.constants.L11 == 1.0);
  CHECK(p.constants.L22 == 1.0);
  CHECK(p.constants.L12 == 1.0);
  CHECK(p.constants.mu1 == 1.0);
  CHECK(p.f(Vector::Zero(2), Vector::Zero(2)) == 0.0);
  // f(x, y) = |x|^2/2 + <x, y> - |y|^2/2
  const Vector x = vec3(1, 2, 0).head(2);
  const Vector y = vec3(-1, 3, 0).head(2);
  REQUIRE_THAT(p.f(x, y), WithinRel(0.5 * x.squaredNorm() + x.dot(y) - 0.5 * y.squaredNorm(), 1e-15));
}

TEST_CASE("composed quadratic rejects mismatched ranges", "[problem]") {
  CHECK_THROWS_AS(
      make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(3, 3), 1.0, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0, 1.0),
      std::invalid_argument);
}

TEST_CASE("singular composed quadratic keeps the least nonzero eigenvalue", "[problem]") {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = 2.0;
  const SaddleProblem p = make_composed_quadratic(A, Matrix::Identity(2, 2), 1.0, 1.0);
  CHECK(p.constants.mu1 == 4.0);
  CHECK(p.constants.L11 == 4.0);
}

TEST_CASE("quadratic_constants spectra", "[problem]") {
  const Matrix I2 = Matrix::Identity(2, 2);
  const PLConstants c = quadratic_constants(I2, Matrix::Zero(2, 2), -I2);
  CHECK(c.L11 == 1.0);
  CHECK(c.L22 == 1.0);
  CHECK(c.mu1 == 1.0);
  CHECK(c.mu2 == 1.0);
  CHECK(c.L12 == 1e-8);  // zero cross block falls back to the floor
  CHECK(c.L21 == 1e-8);

  Matrix dxx = Matrix::Zero(2, 2);
  dxx(0, 0) = 4.0;
  const PLConstants s = quadratic_constants(dxx, Matrix::Zero(2, 1), -Matrix::Identity(1, 1));
  CHECK(s.mu1 == 4.0);

  // RLS y-block: 2M - 2*lambda*M = -2(lambda-1)M with lambda = 2, M = I.
  const PLConstants r = quadratic_constants(Matrix::Identity(1, 1), Matrix::Zero(1, 1),
                                            Matrix(-2.0 * Matrix::Identity(1, 1)));
  CHECK(r.L22 == 2.0);
  CHECK(r.mu2 == 2.0);
}

TEST_CASE("quadratic_constants rejects degenerate and indefinite blocks", "[problem]") {
  const Matrix Z2 = Matrix::Zero(2, 2);
  const Matrix I2 = Matrix::Identity(2, 2);
  CHECK_THROWS_WITH(quadratic_constants(Z2, Z2, -I2),
                    Catch::Matchers::ContainsSubstring("degenerate block"));
  CHECK_THROWS_AS(quadratic_constants(-I2, Z2, -I2), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_constants(I2, Z2, I2), std::invalid_argument);
  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(quadratic_constants(asym, Z2, -I2), std::invalid_argument);
}

TEST_CASE("PLConstants validation", "[problem]") {
  PLConstants ok{1.0, 1.0, 1.0, 1.0, 0.5, 0.5};
  CHECK_NOTHROW(ok.validate());
  PLConstants bad_mu = ok;
  bad_mu.mu1 = 2.0;
  CHECK_THROWS_AS(bad_mu.validate(), std::invalid_argument);
  PLConstants zero = ok;
  zero.L12 = 0.0;
  CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}
