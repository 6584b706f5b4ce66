#pragma once

// Maslov-type index pair (i_tau, nu_tau) of a periodic coefficient
// B(t), computed by Galerkin inertia counting:
//
//   dim M_d^-(P_m(A - B)P_m) = dim E_m / 2 + i_tau
//   dim M_d^0(P_m(A - B)P_m) = nu_tau
//
// for m past a (problem-dependent) threshold.  Convergence is
// certified by pair stabilization over two consecutive escalation
// levels plus a Floquet cross-check of the nullity against
// dim ker(gamma(tau) - I).

#include <sstream>
#include <vector>

#include "subh/galerkin.hpp"
#include "subh/linear_flow.hpp"

namespace subh {

struct IndexPair {
  long i = 0;
  int nu = 0;

  bool operator==(const IndexPair&) const = default;
};

namespace detail {

// The gap d cannot be derived from the unknown ||(A-B)^#||; eigenvalues
// with |lambda| <= 1e-7 count as null and d is half the smallest
// remaining magnitude, reproducing the spectral-gap semantics.
constexpr double kZeroTol = 1e-7;

inline IndexPair count_pair(const VectorXd& ev, int K) {
  IndexPair p;
  int minus = 0, zero = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= kZeroTol)
      ++zero;
    else if (ev(i) < 0)
      ++minus;
  }
  p.i = minus - K / 2;
  p.nu = zero;
  return p;
}

// Nullity of gamma(tau) - I against an absolute threshold on the
// eigenvalue scale.  A sigma_max-relative threshold misfires in both
// directions: near the identity monodromy every singular value is tiny
// (undercount), and hyperbolic monodromies have sigma_max ~ e^{lambda
// tau} (overcount).  The natural scale of "eigenvalue equals 1" is 1.
inline int floquet_nullity(const MatrixXd& monodromy_matrix, double tol) {
  const MatrixXd M =
      monodromy_matrix -
      MatrixXd::Identity(monodromy_matrix.rows(), monodromy_matrix.cols());
  Eigen::JacobiSVD<MatrixXd> svd(M);
  const VectorXd sv = svd.singularValues();
  int k = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++k;
  return k;
}

}  // namespace detail

/// Index pair at a fixed Galerkin level m and explicit gap d.
inline IndexPair maslov_index_galerkin(const CoefficientPath& B, double tau,
                                       int m, double d) {
  const GalerkinForm g = assemble_galerkin_form(B, tau, m);
  const InertiaCounts c = index_counts(g, d);
  return IndexPair{c.minus - g.dim() / 2, c.zero};
}

/// Index pair with automatic level escalation m in {8, 16, ..., 256}.
/// Returns once the pair repeats on two consecutive levels and the
/// Galerkin nullity matches the Floquet nullity of the monodromy.
inline IndexPair maslov_index(const CoefficientPath& B, double tau) {
  const int nu_floquet = detail::floquet_nullity(
      monodromy(fundamental_solution(B, tau)), 1e-8);

  bool have_prev = false;
  IndexPair prev;
  VectorXd last_spectrum;
  for (int m = 8; m <= 256; m *= 2) {
    const GalerkinForm g = assemble_galerkin_form(B, tau, m);
    const VectorXd ev = generalized_spectrum(g);
    const IndexPair pair = detail::count_pair(ev, g.dim());
    if (have_prev && pair == prev && pair.nu == nu_floquet) return pair;
    prev = pair;
    have_prev = true;
    last_spectrum = ev;
  }

  std::ostringstream msg;
  msg << "maslov_index: no stabilization by m=256 (last pair i=" << prev.i
      << " nu=" << prev.nu << ", Floquet nu=" << nu_floquet
      << "; spectrum near zero:";
  for (int i = 0; i < last_spectrum.size(); ++i)
    if (std::abs(last_spectrum(i)) < 10 * detail::kZeroTol)
      msg << ' ' << last_spectrum(i);
  msg << ')';
  throw non_convergence(msg.str());
}

/// Exact inertia-count oracle for a constant coefficient matrix.
///
/// In the real coordinates z = cos(2j pi t/tau) u + sin(2j pi t/tau) v
/// the form A - B block-diagonalizes over j with exactly computable
/// 4n x 4n blocks, so no quadrature enters.
inline IndexPair constant_block_oracle(const MatrixXd& B, double tau, int m) {
  if (B.rows() != B.cols() || B.rows() % 2 != 0)
    throw invalid_dimension("constant_block_oracle: order must be even");
  const int n = static_cast<int>(B.rows()) / 2;
  const int d = 2 * n;
  const MatrixXd Bs = 0.5 * (B + B.transpose());
  const MatrixXd J = standard_j(n);
  const double pi = std::numbers::pi;

  std::vector<double> ev;
  ev.reserve((2 * m + 1) * d);

  // j = 0 block: -tau*B against Gram weight tau.
  {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(-Bs);
    for (int i = 0; i < d; ++i) ev.push_back(es.eigenvalues()(i));
  }
  // j >= 1 pair blocks: a-part j*pi*(Ju.v - Jv.u), b-part (tau/2)(Bu.u + Bv.v),
  // Gram weight (tau*j/2) on (u, v).
  for (int j = 1; j <= m; ++j) {
    MatrixXd blk(2 * d, 2 * d);
    blk.topLeftCorner(d, d) = -(0.5 * tau) * Bs;
    blk.bottomRightCorner(d, d) = -(0.5 * tau) * Bs;
    blk.topRightCorner(d, d) = (j * pi) * J.transpose();
    blk.bottomLeftCorner(d, d) = (j * pi) * J;
    blk /= 0.5 * tau * j;  // generalized problem against the scalar Gram weight
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(blk);
    for (int i = 0; i < 2 * d; ++i) ev.push_back(es.eigenvalues()(i));
  }

  IndexPair p;
  int minus = 0, zero = 0;
  for (double v : ev) {
    if (std::abs(v) <= 1e-9)
      ++zero;
    else if (v < 0)
      ++minus;
  }
  p.i = minus - (2 * m + 1) * n;
  p.nu = zero;
  return p;
}

}  // namespace subh
