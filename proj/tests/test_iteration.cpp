#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "subh/iteration.hpp"

using namespace subh;

namespace {

FourierLoop random_loop(double tau, int n, int m, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  FourierLoop z = FourierLoop::zero(tau, n, m);
  for (int j = -m; j <= m; ++j) {
    VectorXd v(2 * n);
    for (int i = 0; i < 2 * n; ++i) v(i) = gauss(rng);
    z.set_coeff(j, v);
  }
  return z;
}

}  // namespace

TEST_CASE("phase shift is the time translate by j*tau") {
  std::mt19937 rng(31);
  const double tau = kTwoPi;
  FourierLoop z = random_loop(3 * tau, 1, 4, rng);  // 3*tau-periodic
  const FourierLoop shifted = phase_shift(z, 2, tau);
  for (double t : {0.0, 1.1, 4.7}) {
    REQUIRE((evaluate(shifted, t) - evaluate(z, t + 2 * tau)).norm() < 1e-12);
  }
  // shifting by the full period is the identity
  const FourierLoop full = phase_shift(z, 3, tau);
  REQUIRE((full.a - z.a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("period extension preserves the trajectory") {
  std::mt19937 rng(37);
  const FourierLoop z = random_loop(kTwoPi, 1, 3, rng);
  const FourierLoop ext = extend_period(z, 1, 3);
  REQUIRE(ext.tau == Catch::Approx(3 * kTwoPi));
  for (double t : {0.2, 2.9, 5.5}) {
    REQUIRE((evaluate(ext, t) - evaluate(z, t)).norm() < 1e-12);
  }
  REQUIRE_THROWS_AS(extend_period(z, 2, 3), invalid_argument);
}

TEST_CASE("a loop is not distinct from its own phase shift") {
  std::mt19937 rng(41);
  const FourierLoop z = random_loop(2 * kTwoPi, 1, 4, rng);
  const FourierLoop shifted = phase_shift(z, 1, kTwoPi);
  const DistinctnessResult res = distinctness(z, 2, shifted, 2, kTwoPi);
  REQUIRE_FALSE(res.distinct);
  REQUIRE(res.min_distance < 1e-10);
}

TEST_CASE("scaled loops are distinct") {
  std::mt19937 rng(43);
  const FourierLoop z = random_loop(kTwoPi, 1, 3, rng);
  FourierLoop w = z;
  w.a *= 1.5;
  REQUIRE(distinctness(z, 1, w, 1, kTwoPi).distinct);
}

TEST_CASE("continuous shift distance vanishes on rotated loops") {
  std::mt19937 rng(47);
  FourierLoop z = FourierLoop::zero(kTwoPi, 1, 2);
  VectorXd a(2);
  a << 1.0, 0.4;
  z.set_coeff(1, a);
  // shift by an irrational fraction of the period
  const double s = 1.2345;
  FourierLoop w = z;
  const double th = kTwoPi * s / z.tau;
  w.set_coeff(1, VectorXd(std::cos(th) * a + std::sin(th) * apply_j(a)));
  REQUIRE(continuous_shift_distance(z, w) < 1e-9);
  FourierLoop v = z;
  v.a *= 2.0;
  REQUIRE(continuous_shift_distance(z, v) > 0.1);
}

TEST_CASE("iteration inequalities hold for a constant coefficient") {
  const CoefficientPath B =
      CoefficientPath::constant(0.5 * MatrixXd::Identity(2, 2), kTwoPi);
  const IterationReport rep = check_iteration_inequalities(B, kTwoPi, 4);
  REQUIRE(rep.base == IndexPair{1, 0});
  REQUIRE(rep.all_hold);
  // m = 2 doubles the winding: b*m = 1 integer => (i, nu) = (1, 2)
  REQUIRE(rep.rows[1].i_m == 1);
  REQUIRE(rep.rows[1].nu_m == 2);
  // Prop. 3 bounds are never looser than Prop. 2
  for (const IterationRow& row : rep.rows) {
    REQUIRE(row.prop3_lower >= row.prop2_lower);
    REQUIRE(row.prop3_upper <= row.prop2_upper);
  }
  REQUIRE_THROWS_AS(check_iteration_inequalities(B, kTwoPi, 1),
                    invalid_argument);
}

TEST_CASE("distinctness threshold arithmetic") {
  REQUIRE(distinctness_bound(IndexPair{1, 1}, 1) == 3);  // 2n/(i+nu-n)+1
  REQUIRE(distinctness_bound(IndexPair{3, 0}, 2) == 5);
  REQUIRE_FALSE(distinctness_bound(IndexPair{0, 1}, 1).has_value());
}
