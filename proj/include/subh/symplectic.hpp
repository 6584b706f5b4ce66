#pragma once

// Basic symplectic linear algebra: the standard structure matrix J,
// symplecticity and kernel-dimension predicates, and periodic
// symmetric-matrix coefficient paths B(t).

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>

#include "subh/errors.hpp"

namespace subh {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// The 2n x 2n block matrix [[0, -I], [I, 0]].
inline MatrixXd standard_j(int n) {
  if (n < 1) throw invalid_dimension("standard_j: n must be >= 1");
  MatrixXd J = MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = -MatrixXd::Identity(n, n);
  J.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
  return J;
}

/// exp(theta*J) = cos(theta) I + sin(theta) J, the rotation basis block.
inline MatrixXd rotation_j(int n, double theta) {
  MatrixXd R = std::cos(theta) * MatrixXd::Identity(2 * n, 2 * n);
  R += std::sin(theta) * standard_j(n);
  return R;
}

/// Applies J to a phase-space vector: J(p, q) = (-q, p).
inline VectorXd apply_j(const VectorXd& z) {
  const int n = static_cast<int>(z.size()) / 2;
  VectorXd out(2 * n);
  out.head(n) = -z.tail(n);
  out.tail(n) = z.head(n);
  return out;
}

/// true iff the max-entry norm of M^T J M - J is <= tol.
inline bool is_symplectic(const MatrixXd& M, double tol) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() == 0)
    throw invalid_dimension("is_symplectic: matrix order must be even");
  if (tol <= 0) throw invalid_argument("is_symplectic: tol must be positive");
  const MatrixXd J = standard_j(static_cast<int>(M.rows()) / 2);
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff() <= tol;
}

/// Number of singular values of M at or below tol * sigma_max
/// (tol * 1 when M vanishes).  Relative threshold keeps the count
/// stable across matrix scalings.
inline int kernel_dimension(const MatrixXd& M, double tol = 1e-8) {
  if (M.rows() != M.cols())
    throw invalid_dimension("kernel_dimension: matrix must be square");
  if (tol <= 0) throw invalid_argument("kernel_dimension: tol must be positive");
  Eigen::JacobiSVD<MatrixXd> svd(M);
  const VectorXd sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double thr = tol * (smax > 0 ? smax : 1.0);
  int k = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= thr) ++k;
  return k;
}

/// A tau-periodic symmetric-matrix-valued coefficient B(t).
///
/// Evaluations are symmetrized (M + M^T)/2; the worst asymmetry seen is
/// tracked and can be inspected through max_asymmetry().  Copies share
/// the tracker.
class CoefficientPath {
 public:
  using Evaluator = std::function<MatrixXd(double)>;

  CoefficientPath(double period, int n, Evaluator eval)
      : period_(period),
        n_(n),
        eval_(std::move(eval)),
        asym_(std::make_shared<std::atomic<double>>(0.0)) {
    if (period_ <= 0) throw invalid_argument("CoefficientPath: period must be positive");
    if (n_ < 1) throw invalid_dimension("CoefficientPath: n must be >= 1");
  }

  static CoefficientPath constant(const MatrixXd& B, double period) {
    if (B.rows() != B.cols() || B.rows() % 2 != 0)
      throw invalid_dimension("CoefficientPath::constant: order must be even");
    const int n = static_cast<int>(B.rows()) / 2;
    return CoefficientPath(period, n, [B](double) { return B; });
  }

  double period() const { return period_; }
  int n() const { return n_; }
  int dim() const { return 2 * n_; }

  /// Same evaluator viewed over a different period (m-th iteration).
  CoefficientPath with_period(double period) const {
    CoefficientPath p(period, n_, eval_);
    p.asym_ = asym_;
    return p;
  }

  MatrixXd operator()(double t) const {
    MatrixXd M = eval_(t);
    if (M.rows() != 2 * n_ || M.cols() != 2 * n_)
      throw invalid_dimension("CoefficientPath: evaluator returned wrong order");
    if (!M.allFinite())
      throw evaluation_error("CoefficientPath: non-finite B at t=" + std::to_string(t));
    const double a = (M - M.transpose()).cwiseAbs().maxCoeff();
    double cur = asym_->load(std::memory_order_relaxed);
    while (a > cur && !asym_->compare_exchange_weak(cur, a)) {
    }
    return 0.5 * (M + M.transpose());
  }

  /// Largest asymmetry |M - M^T|_inf observed so far; above 1e-10 the
  /// supplied evaluator is suspect.
  double max_asymmetry() const { return asym_->load(); }

 private:
  double period_;
  int n_;
  Evaluator eval_;
  std::shared_ptr<std::atomic<double>> asym_;
};

}  // namespace subh
