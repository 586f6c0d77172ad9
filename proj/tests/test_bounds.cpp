#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "plsaddle/bounds.hpp"

using namespace plsaddle;
using Catch::Matchers::WithinRel;

namespace {

// Constants of the 6-D benchmark problem.
PLConstants experiment_constants() {
  return {8.0, 28.0, 28.0, 28.0, 1.0 / 16.0, 1.0 / 14.0};
}

PLConstants unit_constants() { return {1.0, 1.0, 1.0, 1.0, 1.0, 1.0}; }

}  // namespace

TEST_CASE("smoothness_L", "[bounds]") {
  CHECK(smoothness_L(experiment_constants()) == 10984.0);
  CHECK(smoothness_L(unit_constants()) == 2.0);
  PLConstants degenerate_cross = unit_constants();
  degenerate_cross.L12 = 0.0;
  CHECK(smoothness_L(degenerate_cross) == degenerate_cross.L11);
}

TEST_CASE("inner-cap bound reproduces the benchmark column", "[bounds]") {
  const PLConstants c = experiment_constants();
  CHECK(thm1_inner_bound(c, 1e-3, 100.0) == 6950);
  CHECK(thm1_inner_bound(c, 1e-5, 100.0) == 10560);
  CHECK(thm1_inner_bound(c, 1e-8, 100.0) == 15976);
}

TEST_CASE("inner-cap bound clamps when the log argument is small", "[bounds]") {
  // 2 C2 / (L12^2 g^2 mu2^2) = 1 exactly at C2 = L12^2 g^2 mu2^2 / 2.
  const PLConstants c = unit_constants();
  CHECK(thm1_inner_bound(c, 1.0, 0.5) == 1);
  CHECK(thm1_inner_bound(c, 1.0, 0.1) == 1);
}

TEST_CASE("log-free outer bound", "[bounds]") {
  const PLConstants c = experiment_constants();
  // 2 * 100 * 10984 / (784e-6), evaluated at 50-digit precision: the
  // quotient is 2802040816.33, hence the ceiling below.
  CHECK(thm2_outer_bound(c, 1e-3, 100.0) == 2802040817LL);
  CHECK(thm2_outer_bound(unit_constants(), 1.0, 1.0) == 4);
  CHECK(thm2_outer_bound(c, 1e-3, 1e-12) == 1);  // clamp
}

TEST_CASE("mu1-based outer bound and its table-form variant", "[bounds]") {
  const PLConstants c = experiment_constants();
  // High-precision evaluations of ceil(175744 ln(6.25 / (6 * 784 * g^2))).
  CHECK(thm3_outer_bound(c, 1e-3, 100.0) == 1263938);
  CHECK(thm3_outer_bound(c, 1e-5, 100.0) == 2882600);
  CHECK(thm3_outer_bound(c, 1e-8, 100.0) == 5310593);
  // The variant without mu1 inside the log, used by the table-form N* column.
  CHECK(thm3_outer_bound_table_variant(c, 1e-3, 100.0) == 1751204);
  CHECK(thm3_outer_bound_table_variant(c, 1e-5, 100.0) == 3369866);
  CHECK(thm3_outer_bound_table_variant(c, 1e-8, 100.0) == 5797859);
}

TEST_CASE("mu1-based outer bound clamp and unit value", "[bounds]") {
  const PLConstants c = unit_constants();
  // Argument hits exactly 1 at C1 = 6 L12^2 g^2 / mu1.
  CHECK(thm3_outer_bound(c, 1.0, 6.0) == 1);
  // With C1 = 6e the argument is e, ln e = 1, leading factor (1+1)/1 = 2.
  CHECK(thm3_outer_bound(c, 1.0, 6.0 * std::exp(1.0)) == 2);
}

TEST_CASE("classical fixed-budget counts", "[bounds]") {
  const PLConstants c = experiment_constants();
  const double eps = 1.2544e-2;  // the gamma = 1e-3 equivalent via L12^2 g^2 = eps mu1
  const ClassicalCounts counts = classical_bounds(c, eps, 100.0, 100.0);
  // ceil(175744 ln(15943.87755...)) and ceil(392 ln(3571428.571...)),
  // evaluated at 50-digit precision.
  CHECK(counts.k == 1700645);
  CHECK(counts.p == 5915);
  CHECK(counts.total == counts.k * counts.p);
  CHECK_FALSE(counts.k_clamped);
  CHECK_FALSE(counts.p_clamped);
}

TEST_CASE("classical counts clamp at large epsilon", "[bounds]") {
  const PLConstants c = experiment_constants();
  const ClassicalCounts counts = classical_bounds(c, 200.0, 100.0, 100.0);  // eps = 2 C1
  CHECK(counts.k == 1);
  CHECK(counts.k_clamped);
  CHECK(counts.total == counts.k * counts.p);
  CHECK_THROWS_AS(classical_bounds(c, 0.0, 100.0, 100.0), std::invalid_argument);
}

TEST_CASE("quality guarantees", "[bounds]") {
  const PLConstants c = experiment_constants();
  const QualityGuarantees q = quality_guarantees(c, 1e-3);
  REQUIRE_THAT(q.gap, WithinRel(8.7808e-2, 1e-12));
  REQUIRE_THAT(q.arg, WithinRel(std::sqrt(14.0) * 28.0 * 16.0 * 1e-3, 1e-12));

  const QualityGuarantees u = quality_guarantees(unit_constants(), 1.0);
  CHECK(u.gap == 7.0);
  REQUIRE_THAT(u.arg, WithinRel(std::sqrt(14.0), 1e-15));

  const QualityGuarantees tiny = quality_guarantees(c, 1e-300);
  CHECK(tiny.gap < 1e-100);
  CHECK(tiny.arg < 1e-100);
}

TEST_CASE("bounds are monotone in gamma, epsilon and the gap constants", "[bounds]") {
  const PLConstants c = experiment_constants();
  const double gammas[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  for (std::size_t i = 0; i + 1 < std::size(gammas); ++i) {
    // nonincreasing in gamma (listed descending, so counts ascend)
    CHECK(thm1_inner_bound(c, gammas[i], 100.0) <= thm1_inner_bound(c, gammas[i + 1], 100.0));
    CHECK(thm2_outer_bound(c, gammas[i], 100.0) <= thm2_outer_bound(c, gammas[i + 1], 100.0));
    CHECK(thm3_outer_bound(c, gammas[i], 100.0) <= thm3_outer_bound(c, gammas[i + 1], 100.0));
  }
  const double Cs[] = {1.0, 10.0, 100.0, 1000.0};
  for (std::size_t i = 0; i + 1 < std::size(Cs); ++i) {
    CHECK(thm1_inner_bound(c, 1e-3, Cs[i]) <= thm1_inner_bound(c, 1e-3, Cs[i + 1]));
    CHECK(thm2_outer_bound(c, 1e-3, Cs[i]) <= thm2_outer_bound(c, 1e-3, Cs[i + 1]));
    CHECK(thm3_outer_bound(c, 1e-3, Cs[i]) <= thm3_outer_bound(c, 1e-3, Cs[i + 1]));
  }
  const double eps[] = {1.0, 1e-1, 1e-2, 1e-3};
  for (std::size_t i = 0; i + 1 < std::size(eps); ++i) {
    const ClassicalCounts a = classical_bounds(c, eps[i], 100.0, 100.0);
    const ClassicalCounts b = classical_bounds(c, eps[i + 1], 100.0, 100.0);
    CHECK(a.k <= b.k);
    CHECK(a.p <= b.p);
  }
}

TEST_CASE("log-linearity across a decade of gamma", "[bounds]") {
  const PLConstants c = experiment_constants();
  // Shrinking gamma tenfold adds factor*ln(100) to the pre-ceiling value, so
  // the integer bounds differ by that amount up to the two ceilings.
  for (double gamma : {1e-2, 1e-3, 1e-4}) {
    const double inner_factor = c.L22 / c.mu2;
    const auto d1 = static_cast<double>(thm1_inner_bound(c, gamma / 10.0, 100.0) -
                                        thm1_inner_bound(c, gamma, 100.0));
    CHECK(std::abs(d1 - inner_factor * std::log(100.0)) <= 1.0 + 1e-9);

    const double outer_factor = (c.L11 * c.mu2 + c.L12 * c.L12) / (c.mu1 * c.mu2);
    const auto d3 = static_cast<double>(thm3_outer_bound(c, gamma / 10.0, 100.0) -
                                        thm3_outer_bound(c, gamma, 100.0));
    CHECK(std::abs(d3 - outer_factor * std::log(100.0)) <= 1.0 + 1e-9);
  }
}

TEST_CASE("evaluate_bounds assembles a consistent set", "[bounds]") {
  const PLConstants c = experiment_constants();
  const BoundSet b = evaluate_bounds(c, 1e-3);
  CHECK(b.L == 10984.0);
  CHECK(b.thm1_inner == 6950);
  CHECK(b.thm2_outer == 2802040817LL);
  CHECK(b.thm3_outer == 1263938);
  CHECK(b.thm3_outer_table_variant == 1751204);
  REQUIRE_THAT(b.epsilon, WithinRel(1.2544e-2, 1e-12));
  CHECK(b.classical_k == 1700645);
  CHECK(b.classical_p == 5915);
  CHECK(b.classical_total == b.classical_k * b.classical_p);
  REQUIRE_THAT(b.gap_guarantee, WithinRel(8.7808e-2, 1e-12));
  CHECK_THROWS_AS(evaluate_bounds(c, -1.0), std::invalid_argument);
}
