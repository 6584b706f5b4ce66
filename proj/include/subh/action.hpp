#pragma once

// The rescaled action G_alpha(z) = alpha * int_0^tau H(alpha t, z) dt
// - 1/2 <Az, z> on the truncation E_m, with its Riesz gradient and
// Hessian form.

#include <Eigen/Dense>

#include "subh/galerkin.hpp"
#include "subh/loop.hpp"
#include "subh/model.hpp"

namespace subh {

inline double action(const HamiltonianModel& mdl, const FourierLoop& z,
                     double alpha) {
  if (alpha <= 0) throw invalid_argument("action: alpha must be positive");
  const int N = 2 * quadrature_nodes(z.m);
  double h_int = 0.0;
  for (int i = 0; i < N; ++i) {
    const double t = z.tau * i / N;
    const double v = mdl.H(alpha * t, evaluate(z, t));
    if (!std::isfinite(v)) throw evaluation_error("action: H evaluation failed");
    h_int += v;
  }
  h_int *= z.tau / N;
  return alpha * h_int - 0.5 * a_form(z, z);
}

/// Dual gradient r in flattened coordinates: dG_alpha(z)[w] = r . flatten(w).
inline VectorXd dual_gradient(const HamiltonianModel& mdl, const FourierLoop& z,
                              double alpha) {
  const int d = 2 * z.n;
  const int N = 2 * quadrature_nodes(z.m);
  // L^2 projection of alpha * H'_z(alpha t, z(t)) onto each basis block.
  MatrixXd proj = MatrixXd::Zero(d, 2 * z.m + 1);
  for (int i = 0; i < N; ++i) {
    const double t = z.tau * i / N;
    const VectorXd g = mdl.grad(alpha * t, evaluate(z, t));
    if (!g.allFinite()) throw evaluation_error("dual_gradient: H' evaluation failed");
    for (int j = -z.m; j <= z.m; ++j) {
      const double th = kTwoPi * j * t / z.tau;
      // exp(-theta J) g = cos(theta) g - sin(theta) J g
      proj.col(j + z.m) += std::cos(th) * g - std::sin(th) * apply_j(g);
    }
  }
  proj *= alpha * z.tau / N;

  VectorXd r(z.dim());
  for (int j = -z.m; j <= z.m; ++j)
    r.segment(d * (j + z.m), d) = proj.col(j + z.m) - kTwoPi * j * z.coeff(j);
  return r;
}

/// Riesz representative of dG_alpha(z) in the E-inner product.
inline FourierLoop gradient(const HamiltonianModel& mdl, const FourierLoop& z,
                            double alpha) {
  const VectorXd r = dual_gradient(mdl, z, alpha);
  const VectorXd w = gram_diagonal(z.tau, z.n, z.m);
  return unflatten(r.cwiseQuotient(w), z.tau, z.n, z.m);
}

inline double gradient_norm(const HamiltonianModel& mdl, const FourierLoop& z,
                            double alpha) {
  const VectorXd r = dual_gradient(mdl, z, alpha);
  const VectorXd w = gram_diagonal(z.tau, z.n, z.m);
  return std::sqrt(r.cwiseQuotient(w).dot(r));
}

/// The curvature coefficient B(t) = alpha * H''_zz(alpha t, z(t)).
inline CoefficientPath curvature_path(const HamiltonianModel& mdl,
                                      const FourierLoop& z, double alpha) {
  return CoefficientPath(z.tau, z.n, [mdl, z, alpha](double t) {
    return MatrixXd(alpha * mdl.hess(alpha * t, evaluate(z, t)));
  });
}

/// Hessian form of G_alpha at z on E_m: alpha*b_form(H'') - a_form,
/// i.e. the negative of the assembled (A - B) Galerkin form.  Uses the
/// same quadrature grid as dual_gradient so the two stay consistent
/// derivatives of one discretized functional.
inline GalerkinForm hessian(const HamiltonianModel& mdl, const FourierLoop& z,
                            double alpha, bool check_quadrature = false) {
  const CoefficientPath B = curvature_path(mdl, z, alpha);
  const int N = 2 * quadrature_nodes(z.m);
  MatrixXd FB = detail::bform_matrix(B, z.tau, z.m, z.n, N);
  if (check_quadrature) {
    const MatrixXd FB2 = detail::bform_matrix(B, z.tau, z.m, z.n, 2 * N);
    if ((FB2 - FB).cwiseAbs().maxCoeff() > 1e-9)
      throw quadrature_error("hessian: node doubling did not converge");
    FB = FB2;
  }
  GalerkinForm g;
  g.tau = z.tau;
  g.n = z.n;
  g.m = z.m;
  g.F = FB - detail::aform_matrix(z.tau, z.m, z.n);
  g.W = gram_diagonal(z.tau, z.n, z.m);
  return g;
}

}  // namespace subh
