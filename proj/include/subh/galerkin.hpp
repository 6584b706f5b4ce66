#pragma once

// Galerkin restriction of the bilinear form <(A - B)z, w> to the
// truncation E_m, and inertia counting of generalized eigenvalues
// against the E-inner-product Gram matrix.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "subh/errors.hpp"
#include "subh/loop.hpp"
#include "subh/symplectic.hpp"

namespace subh {

/// Symmetric form matrix F on flattened Fourier coordinates together
/// with the (diagonal, positive) Gram matrix W of the E-inner product.
struct GalerkinForm {
  double tau = kTwoPi;
  int n = 1;
  int m = 1;
  MatrixXd F;
  VectorXd W;

  int dim() const { return 2 * n * (2 * m + 1); }
};

struct InertiaCounts {
  int plus = 0;
  int minus = 0;
  int zero = 0;
};

namespace detail {

// int_0^tau P(t)^T B(t) P(t) dt at N trapezoid nodes, where the columns
// of P(t) are the basis blocks exp(2j*pi*t/tau J).
inline MatrixXd bform_matrix(const CoefficientPath& B, double tau, int m,
                             int n, int N) {
  const int d = 2 * n;
  const int K = d * (2 * m + 1);
  const MatrixXd J = standard_j(n);
  MatrixXd F = MatrixXd::Zero(K, K);
  MatrixXd P(d, K);
  for (int i = 0; i < N; ++i) {
    const double t = tau * i / N;
    for (int j = -m; j <= m; ++j) {
      const double th = kTwoPi * j * t / tau;
      P.middleCols(d * (j + m), d) =
          std::cos(th) * MatrixXd::Identity(d, d) + std::sin(th) * J;
    }
    const MatrixXd Bt = B(t);
    F.noalias() += P.transpose() * (Bt * P);
  }
  F *= tau / N;
  return 0.5 * (F + F.transpose());
}

inline MatrixXd aform_matrix(double tau, int m, int n) {
  (void)tau;  // <Az, w> = 2*pi sum_j j a_j.b_j independently of tau
  const int d = 2 * n;
  MatrixXd F = MatrixXd::Zero(d * (2 * m + 1), d * (2 * m + 1));
  for (int j = -m; j <= m; ++j)
    F.block(d * (j + m), d * (j + m), d, d) =
        kTwoPi * j * MatrixXd::Identity(d, d);
  return F;
}

}  // namespace detail

/// Assembles the form of A - B on E_m.  The A-part is exact; the B-part
/// uses periodic trapezoid quadrature with a node-doubling check.
inline GalerkinForm assemble_galerkin_form(const CoefficientPath& B, double tau,
                                           int m, bool check_quadrature = true) {
  if (m < 1) throw invalid_argument("assemble_galerkin_form: m must be >= 1");
  const int n = B.n();
  int N = quadrature_nodes(m);
  MatrixXd FB = detail::bform_matrix(B, tau, m, n, N);
  if (check_quadrature) {
    bool converged = false;
    for (int pass = 0; pass < 3 && !converged; ++pass) {
      const MatrixXd FB2 = detail::bform_matrix(B, tau, m, n, 2 * N);
      converged = (FB2 - FB).cwiseAbs().maxCoeff() <= 1e-9;
      FB = FB2;
      N *= 2;
    }
    if (!converged)
      throw quadrature_error("assemble_galerkin_form: node doubling did not converge");
  }
  GalerkinForm g;
  g.tau = tau;
  g.n = n;
  g.m = m;
  g.F = detail::aform_matrix(tau, m, n) - FB;
  g.W = gram_diagonal(tau, n, m);
  return g;
}

/// Generalized eigenvalues of F v = lambda W v, ascending.
inline VectorXd generalized_spectrum(const GalerkinForm& g) {
  const VectorXd s = g.W.cwiseSqrt().cwiseInverse();
  const MatrixXd S = s.asDiagonal() * g.F * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw numeric_error("generalized_spectrum: eigensolver failed");
  return es.eigenvalues();
}

/// Counts of generalized eigenvalues in [d, inf), (-inf, -d] and (-d, d).
inline InertiaCounts index_counts(const GalerkinForm& g, double d) {
  if (d <= 0) throw invalid_argument("index_counts: gap d must be positive");
  const VectorXd ev = generalized_spectrum(g);
  InertiaCounts c;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) >= d)
      ++c.plus;
    else if (ev(i) <= -d)
      ++c.minus;
    else
      ++c.zero;
  }
  return c;
}

}  // namespace subh
