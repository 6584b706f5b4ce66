#pragma once

// Fundamental solutions of y' = J B(t) y, iterated paths and monodromy.
//
// The one-step method is the implicit midpoint rule, i.e. the Cayley
// update (I - h/2 JB)^{-1}(I + h/2 JB); for symmetric B every step is
// symplectic up to linear-solve roundoff.

#include <Eigen/Dense>
#include <vector>

#include "subh/errors.hpp"
#include "subh/symplectic.hpp"

namespace subh {

struct SymplecticPath {
  int n = 0;
  std::vector<double> t;
  std::vector<MatrixXd> gamma;

  double horizon() const { return t.empty() ? 0.0 : t.back(); }
  std::size_t size() const { return t.size(); }
};

inline const MatrixXd& monodromy(const SymplecticPath& path) {
  if (path.gamma.empty()) throw invalid_argument("monodromy: empty path");
  return path.gamma.back();
}

namespace detail {

// Implicit midpoint sweep.  Stores at most max_samples+1 of the steps
// (always including the endpoints).
inline SymplecticPath midpoint_sweep(const CoefficientPath& B, double horizon,
                                     int steps, int max_samples) {
  const int n = B.n();
  const int d = 2 * n;
  const double h = horizon / steps;
  const MatrixXd J = standard_j(n);
  const MatrixXd I = MatrixXd::Identity(d, d);

  SymplecticPath path;
  path.n = n;
  const int stride = std::max(1, steps / max_samples);
  path.t.reserve(steps / stride + 2);
  path.gamma.reserve(steps / stride + 2);
  path.t.push_back(0.0);
  path.gamma.push_back(I);

  MatrixXd y = I;
  for (int k = 0; k < steps; ++k) {
    const MatrixXd M = J * B((k + 0.5) * h);
    const MatrixXd lhs = I - (0.5 * h) * M;
    const MatrixXd rhs = (I + (0.5 * h) * M) * y;
    y = lhs.partialPivLu().solve(rhs);
    if ((k + 1) % stride == 0 || k + 1 == steps) {
      path.t.push_back((k + 1) * h);
      path.gamma.push_back(y);
    }
  }
  return path;
}

}  // namespace detail

/// Fundamental solution of y' = J B(t) y on [0, horizon] with a fixed
/// uniform grid; B is evaluated at interval midpoints only.
inline SymplecticPath fundamental_solution(const CoefficientPath& B,
                                           double horizon, int steps) {
  if (steps < 16) throw invalid_argument("fundamental_solution: steps must be >= 16");
  if (horizon <= 0) throw invalid_argument("fundamental_solution: horizon must be positive");
  return detail::midpoint_sweep(B, horizon, steps, steps);
}

/// Adaptive variant: starts at 512 steps and doubles until the
/// monodromy changes by less than 1e-10.  Each refinement uses a
/// fourth-order triple-jump composition of midpoint steps, so every
/// step stays exactly symplectic while the 1e-10 target stays
/// affordable.
inline SymplecticPath fundamental_solution(const CoefficientPath& B,
                                           double horizon) {
  if (horizon <= 0) throw invalid_argument("fundamental_solution: horizon must be positive");
  const int n = B.n();
  const int d = 2 * n;
  const MatrixXd J = standard_j(n);
  const MatrixXd I = MatrixXd::Identity(d, d);

  // Yoshida composition weights.
  const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double w0 = 1.0 - 2.0 * w1;

  auto sweep = [&](int steps, int max_samples) {
    const double h = horizon / steps;
    SymplecticPath path;
    path.n = n;
    const int stride = std::max(1, steps / max_samples);
    path.t.push_back(0.0);
    path.gamma.push_back(I);
    MatrixXd y = I;
    for (int k = 0; k < steps; ++k) {
      const double t0 = k * h;
      double off = 0.0;
      for (double w : {w1, w0, w1}) {
        const double hs = w * h;
        const MatrixXd M = J * B(t0 + off + 0.5 * hs);
        const MatrixXd lhs = I - (0.5 * hs) * M;
        y = lhs.partialPivLu().solve((I + (0.5 * hs) * M) * y);
        off += hs;
      }
      if ((k + 1) % stride == 0 || k + 1 == steps) {
        path.t.push_back((k + 1) * h);
        path.gamma.push_back(y);
      }
    }
    return path;
  };

  constexpr int kMaxSteps = 1 << 17;
  SymplecticPath prev = sweep(512, 1024);
  for (int steps = 1024; steps <= kMaxSteps; steps *= 2) {
    SymplecticPath next = sweep(steps, 1024);
    const double diff =
        (monodromy(next) - monodromy(prev)).cwiseAbs().maxCoeff();
    // relative to the monodromy scale: hyperbolic coefficients produce
    // exponentially large entries for which an absolute target is moot
    const double scale = std::max(1.0, monodromy(next).cwiseAbs().maxCoeff());
    if (diff < 1e-10 * scale) return next;
    prev = std::move(next);
  }
  throw non_convergence("fundamental_solution: monodromy did not settle to 1e-10");
}

/// The m-th iteration path gamma^m(t) = gamma(t - j*tau) * gamma(tau)^j
/// on [0, m*tau], assembled exactly at the sample points of gamma.
inline SymplecticPath iterate_path(const SymplecticPath& path, int m) {
  if (m < 1) throw invalid_argument("iterate_path: m must be >= 1");
  if (path.gamma.empty()) throw invalid_argument("iterate_path: empty path");
  if (m == 1) return path;

  const double tau = path.horizon();
  const MatrixXd& G = monodromy(path);

  SymplecticPath out;
  out.n = path.n;
  MatrixXd Gj = MatrixXd::Identity(G.rows(), G.cols());
  for (int j = 0; j < m; ++j) {
    const std::size_t start = (j == 0) ? 0 : 1;  // skip duplicated endpoint
    for (std::size_t i = start; i < path.size(); ++i) {
      out.t.push_back(j * tau + path.t[i]);
      out.gamma.push_back(path.gamma[i] * Gj);
    }
    Gj = G * Gj;
  }
  return out;
}

}  // namespace subh
