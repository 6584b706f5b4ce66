#pragma once

// Phase shifts, the Liu-Long iteration inequalities as checkable
// reports, and geometric-distinctness certificates.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "subh/loop.hpp"
#include "subh/maslov.hpp"

namespace subh {

/// j*z(t) = z(t + j*tau) for a loop of period k*tau.  In Fourier
/// coordinates mode l rotates by exp(2*l*j*pi/k J).
inline FourierLoop phase_shift(const FourierLoop& z, int j, double tau) {
  const double kreal = z.tau / tau;
  const int k = static_cast<int>(std::lround(kreal));
  if (k < 1 || std::abs(kreal - k) > 1e-9)
    throw invalid_argument("phase_shift: loop period is not an integer multiple of tau");
  FourierLoop out = z;
  for (int l = -z.m; l <= z.m; ++l) {
    const double th = kTwoPi * l * j / static_cast<double>(k);
    const VectorXd al = z.coeff(l);
    out.set_coeff(l, std::cos(th) * al + std::sin(th) * apply_j(al));
  }
  return out;
}

struct IterationRow {
  int m = 1;
  long i_m = 0;
  int nu_m = 0;
  long prop2_lower = 0, prop2_upper = 0;
  long prop3_lower = 0, prop3_upper = 0;
  bool holds = false;
};

struct IterationReport {
  IndexPair base;
  std::vector<IterationRow> rows;
  bool all_hold = true;
};

/// Computes (i_{m tau}, nu_{m tau}) for m = 1..m_max by treating B as
/// m*tau-periodic, and fills both inequality chains:
///   Prop 2:  m(i+nu-n)-n      <= i_m <= m(i+n)+n-nu_m
///   Prop 3:  m(i+nu-n)+n-nu   <= i_m <= m(i+n)-n-(nu_m-nu)
inline IterationReport check_iteration_inequalities(const CoefficientPath& B,
                                                    double tau, int m_max) {
  if (m_max < 2) throw invalid_argument("check_iteration_inequalities: m_max must be >= 2");
  const long n = B.n();
  IterationReport rep;
  rep.base = maslov_index(B, tau);
  const long i1 = rep.base.i;
  const long nu1 = rep.base.nu;
  for (int m = 1; m <= m_max; ++m) {
    const IndexPair pm =
        (m == 1) ? rep.base : maslov_index(B.with_period(m * tau), m * tau);
    IterationRow row;
    row.m = m;
    row.i_m = pm.i;
    row.nu_m = pm.nu;
    row.prop2_lower = m * (i1 + nu1 - n) - n;
    row.prop2_upper = m * (i1 + n) + n - pm.nu;
    row.prop3_lower = m * (i1 + nu1 - n) + n - nu1;
    row.prop3_upper = m * (i1 + n) - n - (pm.nu - nu1);
    row.holds = row.prop2_lower <= pm.i && pm.i <= row.prop2_upper &&
                row.prop3_lower <= pm.i && pm.i <= row.prop3_upper;
    rep.all_hold = rep.all_hold && row.holds;
    rep.rows.push_back(row);
  }
  return rep;
}

/// Re-indexes a k*tau-periodic loop as an L*tau-periodic one
/// (mode l becomes mode l * L/k); requires k | L.
inline FourierLoop extend_period(const FourierLoop& z, int k, int L) {
  if (L % k != 0) throw invalid_argument("extend_period: k must divide L");
  const int r = L / k;
  FourierLoop out = FourierLoop::zero(z.tau * r, z.n, z.m * r);
  for (int l = -z.m; l <= z.m; ++l) out.set_coeff(l * r, z.coeff(l));
  return out;
}

struct DistinctnessResult {
  bool distinct = false;
  int shift = 0;         // minimizing integer shift
  double min_distance = 0.0;  // normalized L^2 distance at that shift
};

/// Geometric distinctness up to integer phase shifts: both loops are
/// extended to the common period lcm(k1,k2)*tau and the minimum over
/// shifts j of ||j*z1 - z2||_{L^2} / max(||z1||, ||z2||, 1) is compared
/// with tol.
inline DistinctnessResult distinctness(const FourierLoop& z1, int k1,
                                       const FourierLoop& z2, int k2,
                                       double tau, double tol = 1e-4) {
  const int L = static_cast<int>(std::lcm(static_cast<std::int64_t>(k1),
                                          static_cast<std::int64_t>(k2)));
  const FourierLoop e1 = extend_period(z1, k1, L);
  const FourierLoop e2 = extend_period(z2, k2, L);
  const int m = std::max(e1.m, e2.m);

  auto l2sq = [&](const FourierLoop& z) {
    double s = 0.0;
    for (int l = -z.m; l <= z.m; ++l) s += z.coeff(l).squaredNorm();
    return z.tau * s;
  };
  const double scale =
      std::max({std::sqrt(l2sq(e1)), std::sqrt(l2sq(e2)), 1.0});

  DistinctnessResult best;
  best.min_distance = std::numeric_limits<double>::infinity();
  for (int j = 0; j < L; ++j) {
    const FourierLoop shifted = phase_shift(e1, j, tau);
    double s = 0.0;
    for (int l = -m; l <= m; ++l) {
      const VectorXd a = (std::abs(l) <= shifted.m) ? shifted.coeff(l)
                                                    : VectorXd::Zero(2 * e1.n);
      const VectorXd b =
          (std::abs(l) <= e2.m) ? e2.coeff(l) : VectorXd::Zero(2 * e2.n);
      s += (a - b).squaredNorm();
    }
    const double dist = std::sqrt(e1.tau * s) / scale;
    if (dist < best.min_distance) {
      best.min_distance = dist;
      best.shift = j;
    }
  }
  best.distinct = best.min_distance > tol;
  return best;
}

/// Informational continuous-shift distance for autonomous systems:
/// min over s in [0, tau) of ||z1(. + s) - z2||_{L^2} / scale, by coarse
/// grid plus golden-section refinement.  Shifting by s rotates mode l
/// through the angle 2*pi*l*s/tau.
inline double continuous_shift_distance(const FourierLoop& z1,
                                        const FourierLoop& z2) {
  detail::require_compatible(z1, z2);
  const int m = std::max(z1.m, z2.m);
  auto coeff_or_zero = [](const FourierLoop& z, int l) {
    return std::abs(l) <= z.m ? z.coeff(l) : VectorXd::Zero(2 * z.n);
  };
  double scale = 1.0;
  for (int l = -m; l <= m; ++l)
    scale = std::max({scale, std::sqrt(z1.tau) * coeff_or_zero(z1, l).norm(),
                      std::sqrt(z1.tau) * coeff_or_zero(z2, l).norm()});
  auto dist = [&](double s) {
    double acc = 0.0;
    for (int l = -m; l <= m; ++l) {
      const double th = kTwoPi * l * s / z1.tau;
      const VectorXd a = coeff_or_zero(z1, l);
      const VectorXd rot = std::cos(th) * a + std::sin(th) * apply_j(a);
      acc += (rot - coeff_or_zero(z2, l)).squaredNorm();
    }
    return std::sqrt(z1.tau * acc) / scale;
  };
  const int grid = 64 * std::max(1, m);
  double best_s = 0.0, best = dist(0.0);
  for (int i = 1; i < grid; ++i) {
    const double s = z1.tau * i / grid;
    const double v = dist(s);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_s - z1.tau / grid, hi = best_s + z1.tau / grid;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = dist(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = dist(x2);
    }
  }
  return std::min({best, f1, f2});
}

/// Theorem-level distinctness threshold: the least integer l with
/// l > 2n / (i + nu - n), or nothing when i + nu <= n.
inline std::optional<long> distinctness_bound(const IndexPair& pair, int n) {
  const long denom = pair.i + pair.nu - n;
  if (denom <= 0) return std::nullopt;
  return 2 * n / denom + 1;  // floor(x)+1 is the least integer > x here
}

}  // namespace subh
