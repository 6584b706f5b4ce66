#pragma once

// Deflated damped-Newton search for nontrivial critical points of
// G_alpha on E_m, post-hoc certification of the index interval of
// Theorem 3.1, subharmonic families with distinctness matrices, and
// the sampled linking-gap geometry of Lemma 3.3.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "subh/action.hpp"
#include "subh/iteration.hpp"
#include "subh/maslov.hpp"

namespace subh {

struct MorseCounts {
  int minus = 0, zero = 0, plus = 0;
};

struct SolutionRecord {
  FourierLoop loop;
  int k = 1;          // period multiple
  double alpha = 1.0;  // rescale factor T / (2 pi) of the base period
  double residual = 0.0;     // E-norm of the gradient
  double ode_defect = 0.0;   // sup |z' - alpha_k J H'| on a fine grid
  double action_value = 0.0;
  IndexPair index;
  MorseCounts morse;
  bool index_interval = false;   // i <= n <= i + nu
  bool nontrivial = false;       // ||z|| > 1e-6 and action > 0
  bool index_indeterminate = false;
  bool morse_crosscheck = false;
  bool outside_theorem_range = false;  // quadratic-plus models: k beyond 2*pi/(wT)
};

struct SolverOptions {
  double residual_tol = 1e-8;
  int max_newton = 120;
  int max_seeds = 48;
  unsigned seed = 1u;
  double varrho = 2.5;  // B_rho exponent used for linking-informed seeds
};

/// Inertia counts of a Hessian form; same counting engine as
/// index_counts, sign convention of the Hessian (not of A - B).
inline MorseCounts morse_counts(const GalerkinForm& form, double d) {
  const InertiaCounts c = index_counts(form, d);
  return MorseCounts{c.minus, c.zero, c.plus};
}

namespace detail {

// Damped pseudo-inverse solve of the symmetric indefinite Hessian:
// eigenvalues are inverted as ev/(ev^2 + delta^2), which handles the
// near-singular directions of autonomous problems.
inline VectorXd hessian_solve(const GalerkinForm& K, const VectorXd& rhs) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(K.F);
  if (es.info() != Eigen::Success)
    throw numeric_error("hessian_solve: eigensolver failed");
  const VectorXd& ev = es.eigenvalues();
  const double delta = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  VectorXd y = es.eigenvectors().transpose() * rhs;
  for (int i = 0; i < y.size(); ++i) y(i) *= ev(i) / (ev(i) * ev(i) + delta * delta);
  return es.eigenvectors() * y;
}

struct Deflation {
  std::vector<VectorXd> points;  // flattened coordinates; 0 is always present
  VectorXd gram;

  double factor(const VectorXd& c) const {
    double mu = 1.0;
    for (const auto& p : points) {
      const VectorXd d = c - p;
      mu *= 1.0 + 1.0 / d.dot(gram.cwiseProduct(d));
    }
    return mu;
  }

  // Scaling of the undeflated Newton step s = K^{-1} r that yields the
  // deflated step (Sherman-Morrison applied to mu*K + r grad(mu)^T).
  double step_scale(const VectorXd& c, const VectorXd& s) const {
    const double mu = factor(c);
    double gs = 0.0;  // grad(mu) . s
    for (const auto& p : points) {
      const VectorXd d = c - p;
      const double q = d.dot(gram.cwiseProduct(d));
      gs += (mu / (1.0 + 1.0 / q)) * (-2.0 / (q * q)) * d.dot(gram.cwiseProduct(s));
    }
    const double denom = mu + gs;
    if (std::abs(denom) < 1e-14 * std::max(1.0, mu)) return 1.0;
    return mu / denom;
  }
};

inline std::vector<FourierLoop> make_seeds(double tau, int n, int m,
                                           const ModelParams& P,
                                           const SolverOptions& opt) {
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> gauss;
  std::vector<FourierLoop> seeds;

  // Deterministic single-mode seeds across amplitude scales first; the
  // circular families of autonomous models live in this subspace.
  for (double amp : {0.5, 2.0, 8.0, 32.0, 128.0}) {
    FourierLoop z = FourierLoop::zero(tau, n, m);
    VectorXd v = VectorXd::Zero(2 * n);
    v(0) = amp;
    z.set_coeff(1, v);
    seeds.push_back(z);
  }

  auto random_plus = [&](int top_mode) {
    FourierLoop z = FourierLoop::zero(tau, n, m);
    for (int j = 1; j <= std::min(top_mode, m); ++j) {
      VectorXd v(2 * n);
      for (int i = 0; i < 2 * n; ++i) v(i) = gauss(rng);
      z.set_coeff(j, v / (1.0 + j));
    }
    return z;
  };

  // Linking-informed seeds: points of B_theta(dQ) for escalating theta.
  for (double theta : {2.0, 4.0, 8.0}) {
    for (int rep = 0; rep < 4; ++rep) {
      FourierLoop z = random_plus(3);
      const double nrm = e_norm(z);
      if (nrm < 1e-12) continue;
      z.a *= theta / nrm;
      seeds.push_back(b_rho_scale(z, theta, opt.varrho, P.sigma, P.omega));
    }
  }
  // Small E^+ perturbations of E^0 rays.
  for (int rep = 0; rep < 8; ++rep) {
    FourierLoop z = FourierLoop::zero(tau, n, m);
    VectorXd c(2 * n);
    for (int i = 0; i < 2 * n; ++i) c(i) = gauss(rng);
    z.set_coeff(0, 2.0 * c.normalized());
    FourierLoop pert = random_plus(2);
    z.a += 0.3 * pert.a;
    seeds.push_back(z);
  }
  // Generic multi-scale random seeds.
  while (static_cast<int>(seeds.size()) < opt.max_seeds) {
    FourierLoop z = random_plus(std::min(5, m));
    z.a *= std::pow(2.0, (static_cast<int>(seeds.size()) % 5) - 1);
    seeds.push_back(z);
  }
  seeds.resize(std::min<std::size_t>(seeds.size(), opt.max_seeds));
  return seeds;
}

}  // namespace detail

/// Newton search for a nontrivial critical point of G_{k*alpha} on E_m.
/// The trivial solution z = 0 is excluded by deflation.  Returns
/// nothing when no seed converges (existence is only guaranteed for
/// alpha large).
inline std::optional<SolutionRecord> find_critical_point(
    const HamiltonianModel& mdl, double alpha, int k, int m,
    const SolverOptions& opt = {},
    const std::vector<FourierLoop>& known = {}) {
  if (alpha <= 0) throw invalid_argument("find_critical_point: alpha must be positive");
  if (k < 1) throw invalid_argument("find_critical_point: k must be >= 1");
  if (m < 8) throw invalid_argument("find_critical_point: m must be >= 8");
  const double tau = kTwoPi;
  const double alpha_k = k * alpha;
  const int n = mdl.n;

  detail::Deflation defl;
  defl.gram = gram_diagonal(tau, n, m);
  defl.points.push_back(VectorXd::Zero(2 * n * (2 * m + 1)));
  for (const auto& z : known)
    if (z.m == m) defl.points.push_back(flatten(z));

  const auto seeds = detail::make_seeds(tau, n, m, mdl.params, opt);
  for (const FourierLoop& seed : seeds) {
    FourierLoop z = seed;
    bool ok = false;
    for (int it = 0; it < opt.max_newton; ++it) {
      const VectorXd r = dual_gradient(mdl, z, alpha_k);
      const double gnorm = std::sqrt(r.cwiseQuotient(defl.gram).dot(r));
      if (gnorm <= opt.residual_tol) {
        ok = e_norm(z) > 1e-6;
        break;
      }
      const GalerkinForm K = hessian(mdl, z, alpha_k);
      const VectorXd c = flatten(z);
      VectorXd step = -detail::hessian_solve(K, r);
      step *= defl.step_scale(c, -step);
      // keep individual steps sane relative to the current iterate
      const double cap = std::max(10.0, 0.25 * e_norm(z));
      const double slen = std::sqrt(step.cwiseProduct(defl.gram).dot(step));
      if (slen > cap) step *= cap / slen;

      const double merit0 = defl.factor(c) * gnorm;
      double damping = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 12; ++ls) {
        const VectorXd cand = c + damping * step;
        const FourierLoop zc = unflatten(cand, tau, n, m);
        double merit;
        try {
          const VectorXd rc = dual_gradient(mdl, zc, alpha_k);
          merit = defl.factor(cand) *
                  std::sqrt(rc.cwiseQuotient(defl.gram).dot(rc));
        } catch (const evaluation_error&) {
          damping *= 0.5;
          continue;
        }
        if (merit < merit0 || damping < 1e-3) {
          z = zc;
          accepted = true;
          break;
        }
        damping *= 0.5;
      }
      if (!accepted) break;
    }
    if (ok) {
      SolutionRecord rec;
      rec.loop = z;
      rec.k = k;
      rec.alpha = alpha;
      rec.residual = gradient_norm(mdl, z, alpha_k);
      rec.action_value = action(mdl, z, alpha_k);
      rec.nontrivial = e_norm(z) > 1e-6 && rec.action_value > 0;
      return rec;
    }
  }
  return std::nullopt;
}

/// Sup over a fine grid of |z' - alpha_k J H'_z(alpha_k t, z)|, with z'
/// by spectral differentiation (exact on E_m).
inline double ode_defect(const HamiltonianModel& mdl, const FourierLoop& z,
                         double alpha_k, int grid = 1024) {
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = z.tau * i / grid;
    VectorXd dz = VectorXd::Zero(2 * z.n);
    for (int j = -z.m; j <= z.m; ++j) {
      const double th = kTwoPi * j * t / z.tau;
      const double w = kTwoPi * j / z.tau;
      const VectorXd aj = z.coeff(j);
      // d/dt exp(theta J) a = w J exp(theta J) a
      dz += w * (std::cos(th) * apply_j(aj) - std::sin(th) * aj);
    }
    const VectorXd rhs =
        alpha_k * apply_j(VectorXd(mdl.grad(alpha_k * t, evaluate(z, t))));
    worst = std::max(worst, (dz - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

/// Fills the index pair, Morse counts and the Theorem 3.1 certificates
/// of an accepted record.
inline SolutionRecord verify_solution(const HamiltonianModel& mdl,
                                      SolutionRecord rec) {
  const double alpha_k = rec.k * rec.alpha;
  const int n = mdl.n;
  rec.ode_defect = ode_defect(mdl, rec.loop, alpha_k);
  if (mdl.bhat) {
    const auto bound = k_range_bound(*mdl.bhat, rec.alpha * kTwoPi);
    rec.outside_theorem_range = bound && rec.k > *bound;
  }

  const CoefficientPath B = curvature_path(mdl, rec.loop, alpha_k);
  try {
    rec.index = maslov_index(B, rec.loop.tau);
    rec.index_interval = rec.index.i <= n && n <= rec.index.i + rec.index.nu;
  } catch (const non_convergence&) {
    rec.index_indeterminate = true;
  }

  // Morse counts of the truncated Hessian at the solution, cross-checked
  // against the counting identities: m^- = dim E_m/2 - i - nu.
  const GalerkinForm K = hessian(mdl, rec.loop, alpha_k);
  const VectorXd ev = generalized_spectrum(K);
  MorseCounts mc;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= detail::kZeroTol)
      ++mc.zero;
    else if (ev(i) < 0)
      ++mc.minus;
    else
      ++mc.plus;
  }
  rec.morse = mc;
  if (!rec.index_indeterminate) {
    const long expect_minus = K.dim() / 2 - rec.index.i - rec.index.nu;
    rec.morse_crosscheck = (mc.minus == expect_minus && mc.zero == rec.index.nu);
  }
  return rec;
}

struct FamilyResult {
  std::vector<std::optional<SolutionRecord>> records;  // index k-1
  MatrixXd distinct;  // k_max x k_max; 1 distinct, 0 not, NaN missing
  std::vector<std::optional<long>> thresholds;  // distinctness_bound per k
};

/// Runs the solver for k = 1..k_max and fills the pairwise
/// distinctness matrix together with the Theorem 1.1 thresholds.
inline FamilyResult subharmonic_family(const HamiltonianModel& mdl, double alpha,
                                       int k_max, int m,
                                       const SolverOptions& opt = {}) {
  if (k_max < 1) throw invalid_argument("subharmonic_family: k_max must be >= 1");
  FamilyResult fam;
  fam.distinct = MatrixXd::Constant(k_max, k_max,
                                    std::numeric_limits<double>::quiet_NaN());
  for (int k = 1; k <= k_max; ++k) {
    auto rec = find_critical_point(mdl, alpha, k, m, opt);
    if (rec) {
      *rec = verify_solution(mdl, *rec);
      fam.thresholds.push_back(distinctness_bound(rec->index, mdl.n));
    } else {
      fam.thresholds.push_back(std::nullopt);
    }
    fam.records.push_back(std::move(rec));
  }
  for (int a = 1; a <= k_max; ++a) {
    for (int b = 1; b <= k_max; ++b) {
      if (!fam.records[a - 1] || !fam.records[b - 1]) continue;
      const auto res =
          distinctness(fam.records[a - 1]->loop, a, fam.records[b - 1]->loop, b,
                       kTwoPi);
      fam.distinct(a - 1, b - 1) = res.distinct ? 1.0 : 0.0;
    }
  }
  return fam;
}

struct LinkingReport {
  double theta = 0.0;
  int m = 0;
  double varrho = 0.0;
  double sup_on_boundary = 0.0;
  double inf_on_s = 0.0;
  bool gap_holds = false;
};

/// Samples G_alpha over B_theta(dQ_m) (dQ_m the theta-sphere of E_m^+)
/// and over S_m = E_m^- + E^0 + u0, and reports the sampled gap.
inline LinkingReport linking_gap(const HamiltonianModel& mdl, double alpha,
                                 int m, double theta, int nsamples,
                                 double varrho = 2.5, unsigned seed = 1u) {
  if (theta <= 1.0) throw invalid_argument("linking_gap: theta must exceed 1");
  if (nsamples < 100) throw invalid_argument("linking_gap: nsamples must be >= 100");
  const double tau = kTwoPi;
  const int n = mdl.n;
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  LinkingReport rep;
  rep.theta = theta;
  rep.m = m;
  rep.varrho = varrho;
  rep.sup_on_boundary = -std::numeric_limits<double>::infinity();
  rep.inf_on_s = std::numeric_limits<double>::infinity();

  // u0: unit vector of the first positive mode, ||u0|| = 1.
  FourierLoop u0 = FourierLoop::zero(tau, n, m);
  {
    VectorXd e1 = VectorXd::Zero(2 * n);
    e1(0) = 1.0 / std::sqrt(tau);
    u0.set_coeff(1, e1);
  }

  for (int s = 0; s < nsamples; ++s) {
    // boundary sample: random direction of E_m^+, scaled to the sphere,
    // pushed through B_theta
    FourierLoop zb = FourierLoop::zero(tau, n, m);
    for (int j = 1; j <= m; ++j) {
      VectorXd v(2 * n);
      for (int i = 0; i < 2 * n; ++i) v(i) = gauss(rng);
      zb.set_coeff(j, v / (1.0 + 0.5 * j));
    }
    zb.a *= theta / e_norm(zb);
    const FourierLoop mapped =
        b_rho_scale(zb, theta, varrho, mdl.params.sigma, mdl.params.omega);
    rep.sup_on_boundary =
        std::max(rep.sup_on_boundary, action(mdl, mapped, alpha));

    // S_m sample: u0 plus a point of the radius-10*theta ball of E_m^- + E^0
    FourierLoop zs = u0;
    FourierLoop neg = FourierLoop::zero(tau, n, m);
    for (int j = -m; j <= 0; ++j) {
      VectorXd v(2 * n);
      for (int i = 0; i < 2 * n; ++i) v(i) = gauss(rng);
      neg.set_coeff(j, v);
    }
    const double radius = 10.0 * theta * std::pow(unif(rng), 0.5);
    const double nn = e_norm(neg);
    if (nn > 1e-12) {
      neg.a *= radius / nn;
      zs.a += neg.a;
    }
    rep.inf_on_s = std::min(rep.inf_on_s, action(mdl, zs, alpha));
  }
  rep.gap_holds = rep.sup_on_boundary < rep.inf_on_s;
  return rep;
}

/// Minimal period k*T/g from the gcd g of the active Fourier modes
/// (j = 0 is neutral); throws degenerate_loop when no nonconstant mode
/// is active.
inline double minimal_period(const SolutionRecord& rec, double tol = 1e-6) {
  double amax = 0.0;
  for (int j = -rec.loop.m; j <= rec.loop.m; ++j)
    amax = std::max(amax, rec.loop.coeff(j).norm());
  long g = 0;
  for (int j = -rec.loop.m; j <= rec.loop.m; ++j) {
    if (j == 0) continue;
    if (rec.loop.coeff(j).norm() > tol * amax) g = std::gcd(g, std::labs(j));
  }
  if (g == 0) throw degenerate_loop("minimal_period: no active nonconstant mode");
  const double T = rec.alpha * kTwoPi;
  return rec.k * T / static_cast<double>(g);
}

}  // namespace subh
