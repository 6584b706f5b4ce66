#pragma once

// Truncated W^{1/2,2} loop space: Fourier loops against the rotation
// basis exp(2j*pi*t/tau J), the E-inner product, and the A/B bilinear
// forms.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "subh/errors.hpp"
#include "subh/symplectic.hpp"

namespace subh {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// z(t) = sum_{|j| <= m} exp(2j*pi*t/tau J) a_j with a_j in R^{2n}.
/// Coefficients are the columns of `a`; column j+m holds a_j.
struct FourierLoop {
  double tau = kTwoPi;
  int n = 1;
  int m = 0;
  MatrixXd a;  // 2n x (2m+1)

  static FourierLoop zero(double tau, int n, int m) {
    FourierLoop z;
    z.tau = tau;
    z.n = n;
    z.m = m;
    z.a = MatrixXd::Zero(2 * n, 2 * m + 1);
    return z;
  }

  VectorXd coeff(int j) const { return a.col(j + m); }
  void set_coeff(int j, const VectorXd& v) { a.col(j + m) = v; }

  int dim() const { return 2 * n * (2 * m + 1); }
};

/// Pointwise evaluation z(t).
inline VectorXd evaluate(const FourierLoop& z, double t) {
  VectorXd out = VectorXd::Zero(2 * z.n);
  for (int j = -z.m; j <= z.m; ++j) {
    const double th = kTwoPi * j * t / z.tau;
    const VectorXd aj = z.a.col(j + z.m);
    out += std::cos(th) * aj + std::sin(th) * apply_j(aj);
  }
  return out;
}

namespace detail {

inline void require_compatible(const FourierLoop& z1, const FourierLoop& z2) {
  if (z1.n != z2.n || std::abs(z1.tau - z2.tau) > 1e-12 * std::max(z1.tau, z2.tau))
    throw incompatible_loops("loops differ in period or dimension");
}

}  // namespace detail

/// <z1, z2> = tau a0.b0 + tau sum_{j != 0} |j| a_j.b_j.
/// Levels may differ; missing modes count as zero.
inline double e_inner(const FourierLoop& z1, const FourierLoop& z2) {
  detail::require_compatible(z1, z2);
  const int m = std::min(z1.m, z2.m);
  double s = z1.coeff(0).dot(z2.coeff(0));
  for (int j = -m; j <= m; ++j) {
    if (j == 0) continue;
    s += std::abs(j) * z1.coeff(j).dot(z2.coeff(j));
  }
  return z1.tau * s;
}

inline double e_norm(const FourierLoop& z) { return std::sqrt(e_inner(z, z)); }

/// <Az1, z2> = int_0^tau -J z1' . z2 dt = 2*pi sum_j j a_j.b_j (exact).
inline double a_form(const FourierLoop& z1, const FourierLoop& z2) {
  detail::require_compatible(z1, z2);
  const int m = std::min(z1.m, z2.m);
  double s = 0.0;
  for (int j = -m; j <= m; ++j)
    s += j * z1.coeff(j).dot(z2.coeff(j));
  return kTwoPi * s;
}

/// Number of periodic-trapezoid nodes used for a level-m loop.
inline int quadrature_nodes(int m) { return 8 * (2 * m + 1); }

/// <B z1, z2> = int_0^tau B(t) z1(t) . z2(t) dt by periodic trapezoid
/// quadrature (spectrally accurate for smooth B).
inline double b_form(const CoefficientPath& B, const FourierLoop& z1,
                     const FourierLoop& z2) {
  detail::require_compatible(z1, z2);
  if (std::abs(B.period() - z1.tau) > 1e-12 * z1.tau)
    throw incompatible_loops("b_form: coefficient period mismatch");
  auto quad = [&](int N) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      const double t = z1.tau * i / N;
      s += (B(t) * evaluate(z1, t)).dot(evaluate(z2, t));
    }
    return s * z1.tau / N;
  };
  const int N = quadrature_nodes(std::max(z1.m, z2.m));
  const double v1 = quad(N);
  const double v2 = quad(2 * N);
  const double scale = std::max(1.0, std::abs(v2));
  if (std::abs(v2 - v1) > 1e-10 * scale)
    throw quadrature_error("b_form: node doubling did not converge");
  return v2;
}

/// Splitting z = z^+ + z^0 + z^- by mode sign.
struct SplitLoop {
  FourierLoop plus, zero, minus;
};

inline SplitLoop split(const FourierLoop& z) {
  SplitLoop s{FourierLoop::zero(z.tau, z.n, z.m), FourierLoop::zero(z.tau, z.n, z.m),
              FourierLoop::zero(z.tau, z.n, z.m)};
  for (int j = -z.m; j <= z.m; ++j) {
    if (j > 0)
      s.plus.set_coeff(j, z.coeff(j));
    else if (j == 0)
      s.zero.set_coeff(0, z.coeff(0));
    else
      s.minus.set_coeff(j, z.coeff(j));
  }
  return s;
}

/// B_rho: scales the p-part of every coefficient by rho^{omega~-1} and
/// the q-part by rho^{sigma~-1}, where omega~ = varrho*omega/(sigma+omega)
/// and sigma~ = varrho*sigma/(sigma+omega); both exponents must be >= 1.
inline FourierLoop b_rho_scale(const FourierLoop& z, double rho, double varrho,
                               double sigma, double omega) {
  if (rho <= 0) throw invalid_argument("b_rho_scale: rho must be positive");
  if (sigma <= 0 || omega <= 0)
    throw invalid_argument("b_rho_scale: sigma, omega must be positive");
  const double omega_t = varrho * omega / (sigma + omega);
  const double sigma_t = varrho * sigma / (sigma + omega);
  if (omega_t < 1.0 || sigma_t < 1.0)
    throw invalid_argument("b_rho_scale: requires omega~ >= 1 and sigma~ >= 1");
  FourierLoop out = z;
  const double cp = std::pow(rho, omega_t - 1.0);
  const double cq = std::pow(rho, sigma_t - 1.0);
  out.a.topRows(z.n) *= cp;
  out.a.bottomRows(z.n) *= cq;
  return out;
}

/// Flattened coefficient vector, block (j+m)*2n..(j+m)*2n+2n-1 = a_j.
inline VectorXd flatten(const FourierLoop& z) {
  VectorXd c(z.dim());
  for (int k = 0; k < 2 * z.m + 1; ++k) c.segment(2 * z.n * k, 2 * z.n) = z.a.col(k);
  return c;
}

inline FourierLoop unflatten(const VectorXd& c, double tau, int n, int m) {
  if (c.size() != 2 * n * (2 * m + 1))
    throw invalid_dimension("unflatten: coefficient vector has wrong length");
  FourierLoop z = FourierLoop::zero(tau, n, m);
  for (int k = 0; k < 2 * m + 1; ++k) z.a.col(k) = c.segment(2 * n * k, 2 * n);
  return z;
}

/// Diagonal of the E-inner-product Gram matrix in flattened coordinates:
/// weight tau for the j = 0 block and tau*|j| otherwise.
inline VectorXd gram_diagonal(double tau, int n, int m) {
  VectorXd w(2 * n * (2 * m + 1));
  for (int j = -m; j <= m; ++j)
    w.segment(2 * n * (j + m), 2 * n).setConstant(tau * std::max(std::abs(j), 1));
  return w;
}

}  // namespace subh
