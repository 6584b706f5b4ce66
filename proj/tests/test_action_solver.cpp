#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "subh/action.hpp"
#include "subh/solver.hpp"

using namespace subh;

namespace {

FourierLoop circular_orbit(double T, double beta, int m) {
  const double r = soft_power_circular_radius(beta, T);
  FourierLoop z = FourierLoop::zero(kTwoPi, 1, m);
  VectorXd a(2);
  a << r, 0.0;
  z.set_coeff(1, a);
  return z;
}

}  // namespace

TEST_CASE("action gradient matches finite differences") {
  std::mt19937 rng(61);
  std::normal_distribution<double> gauss;
  const HamiltonianModel mdl = soft_power_model(1, 1.75);
  FourierLoop z = FourierLoop::zero(kTwoPi, 1, 6);
  for (int j = -6; j <= 6; ++j) {
    VectorXd v(2);
    v << gauss(rng), gauss(rng);
    z.set_coeff(j, v);
  }
  const double alpha = 1.3;
  const VectorXd r = dual_gradient(mdl, z, alpha);
  VectorXd dir(z.dim());
  for (int i = 0; i < dir.size(); ++i) dir(i) = gauss(rng);
  dir.normalize();
  const double h = 1e-6;
  const FourierLoop zp = unflatten(flatten(z) + h * dir, z.tau, z.n, z.m);
  const FourierLoop zm = unflatten(flatten(z) - h * dir, z.tau, z.n, z.m);
  const double fd = (action(mdl, zp, alpha) - action(mdl, zm, alpha)) / (2 * h);
  REQUIRE(fd == Catch::Approx(r.dot(dir)).epsilon(1e-6).margin(1e-8));

  // Hessian form against finite differences of the dual gradient
  const GalerkinForm K = hessian(mdl, z, alpha);
  const VectorXd fd2 =
      (dual_gradient(mdl, zp, alpha) - dual_gradient(mdl, zm, alpha)) /
      (2 * h);
  const VectorXd Kdir = K.F * dir;
  REQUIRE((fd2 - Kdir).norm() <= 1e-5 * (1.0 + Kdir.norm()));
}

TEST_CASE("the circular orbit is a critical point of the truncated action") {
  for (double T : {6.0, 10.0}) {
    const HamiltonianModel mdl = soft_power_model(1, 1.75);
    const FourierLoop z = circular_orbit(T, 1.75, 16);
    const double alpha = T / kTwoPi;
    REQUIRE(gradient_norm(mdl, z, alpha) < 1e-7);
    REQUIRE(action(mdl, z, alpha) > 0.0);
  }
}

TEST_CASE("solver recovers the circular orbit") {
  const double T = 6.0;
  const HamiltonianModel mdl = soft_power_model(1, 1.75);
  SolverOptions opt;
  auto rec = find_critical_point(mdl, T / kTwoPi, 1, 16, opt);
  REQUIRE(rec.has_value());
  REQUIRE(rec->residual <= 1e-8);
  const double r = soft_power_circular_radius(1.75, T);
  REQUIRE(rec->loop.coeff(1).norm() == Catch::Approx(r).epsilon(1e-8));
  // align the reference direction with the found orbit (S^1 freedom)
  FourierLoop ref = FourierLoop::zero(kTwoPi, 1, 16);
  ref.set_coeff(1, VectorXd(r * rec->loop.coeff(1).normalized()));
  FourierLoop diff = rec->loop;
  diff.a -= ref.a;
  REQUIRE(e_norm(diff) < 1e-6);

  *rec = verify_solution(mdl, *rec);
  REQUIRE(rec->nontrivial);
  REQUIRE(rec->ode_defect < 1e-6);
  REQUIRE(rec->index_interval);
  REQUIRE(rec->action_value > 0.0);
  const int half = rec->loop.dim() / 2;
  REQUIRE(rec->morse.minus <= half - 1);
  REQUIRE(half - 1 <= rec->morse.minus + rec->morse.zero);
  REQUIRE(rec->morse_crosscheck);

  SECTION("minimal period from the Fourier gcd") {
    REQUIRE(minimal_period(*rec) == Catch::Approx(T));
    SolutionRecord twice;
    twice.loop = extend_period(rec->loop, 1, 2);
    twice.k = 2;
    twice.alpha = rec->alpha;
    REQUIRE(minimal_period(twice) == Catch::Approx(T));
    SolutionRecord flat;
    flat.loop = FourierLoop::zero(kTwoPi, 1, 2);
    REQUIRE_THROWS_AS(minimal_period(flat), degenerate_loop);
  }
}

TEST_CASE("morse counting matches inertia of the assembled form") {
  const HamiltonianModel mdl = soft_power_model(1, 1.75);
  const FourierLoop z = circular_orbit(6.0, 1.75, 8);
  const GalerkinForm K = hessian(mdl, z, 6.0 / kTwoPi);
  const MorseCounts mc = morse_counts(K, 1e-6);
  REQUIRE(mc.minus + mc.zero + mc.plus == K.dim());
}

TEST_CASE("solver argument validation") {
  const HamiltonianModel mdl = soft_power_model(1, 1.75);
  REQUIRE_THROWS_AS(find_critical_point(mdl, -1.0, 1, 16), invalid_argument);
  REQUIRE_THROWS_AS(find_critical_point(mdl, 1.0, 0, 16), invalid_argument);
  REQUIRE_THROWS_AS(find_critical_point(mdl, 1.0, 1, 4), invalid_argument);
  REQUIRE_THROWS_AS(linking_gap(mdl, 1.0, 8, 0.5, 500), invalid_argument);
  REQUIRE_THROWS_AS(linking_gap(mdl, 1.0, 8, 4.0, 10), invalid_argument);
}
