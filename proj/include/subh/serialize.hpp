#pragma once

// JSON (de)serialization of loops, coefficient paths, models and report
// payloads, shared by the CLI and the test fixtures.  Doubles are
// emitted in shortest round-trip form, which is byte-deterministic for
// a fixed config and seed.

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "subh/iteration.hpp"
#include "subh/model.hpp"
#include "subh/solver.hpp"

namespace subh {

using json = nlohmann::json;

inline json loop_to_json(const FourierLoop& z) {
  json coeffs = json::array();
  for (int j = -z.m; j <= z.m; ++j) {
    json row = json::array();
    const VectorXd a = z.coeff(j);
    for (int i = 0; i < a.size(); ++i) row.push_back(a(i));
    coeffs.push_back(std::move(row));
  }
  return json{{"tau", z.tau}, {"n", z.n}, {"m", z.m}, {"coeffs", coeffs}};
}

inline FourierLoop loop_from_json(const json& j) {
  if (!j.contains("tau") || !j.contains("n") || !j.contains("m") ||
      !j.contains("coeffs"))
    throw invalid_argument("loop: requires fields tau, n, m, coeffs");
  const double tau = j.at("tau").get<double>();
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  if (tau <= 0 || n < 1 || m < 0)
    throw invalid_argument("loop: tau > 0, n >= 1, m >= 0 required");
  const auto& coeffs = j.at("coeffs");
  if (static_cast<int>(coeffs.size()) != 2 * m + 1)
    throw invalid_argument("loop: coeffs must list 2m+1 rows (j = -m..m)");
  FourierLoop z = FourierLoop::zero(tau, n, m);
  for (int k = 0; k < 2 * m + 1; ++k) {
    const auto& row = coeffs.at(k);
    if (static_cast<int>(row.size()) != 2 * n)
      throw invalid_argument("loop: each coefficient row must hold 2n reals");
    VectorXd a(2 * n);
    for (int i = 0; i < 2 * n; ++i) a(i) = row.at(i).get<double>();
    z.set_coeff(k - m, a);
  }
  return z;
}

namespace detail {

inline MatrixXd matrix_from_json(const json& j, int d) {
  if (static_cast<int>(j.size()) != d)
    throw invalid_argument("matrix: wrong row count");
  MatrixXd M(d, d);
  for (int r = 0; r < d; ++r) {
    const auto& row = j.at(r);
    if (static_cast<int>(row.size()) != d)
      throw invalid_argument("matrix: wrong column count");
    for (int c = 0; c < d; ++c) M(r, c) = row.at(c).get<double>();
  }
  return M;
}

inline json matrix_to_json(const MatrixXd& M) {
  json out = json::array();
  for (int r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

/// Coefficient config:
///   {n, period, constant?: [[...]],
///    terms?: [{harmonic, cos?: [[...]], sin?: [[...]]}]}
/// builds B(t) = constant + sum_j cos(2 pi j t/T) C_j + sin(...) S_j.
inline CoefficientPath coefficient_from_json(const json& j) {
  if (!j.contains("n") || !j.contains("period"))
    throw invalid_argument("coefficient: requires fields n, period");
  const int n = j.at("n").get<int>();
  const double T = j.at("period").get<double>();
  if (n < 1 || T <= 0)
    throw invalid_argument("coefficient: n >= 1 and period > 0 required");
  const int d = 2 * n;
  MatrixXd C0 = MatrixXd::Zero(d, d);
  if (j.contains("constant")) C0 = detail::matrix_from_json(j.at("constant"), d);
  std::vector<int> harmonics;
  std::vector<MatrixXd> cosparts, sinparts;
  if (j.contains("terms")) {
    for (const auto& term : j.at("terms")) {
      harmonics.push_back(term.at("harmonic").get<int>());
      cosparts.push_back(term.contains("cos")
                             ? detail::matrix_from_json(term.at("cos"), d)
                             : MatrixXd::Zero(d, d));
      sinparts.push_back(term.contains("sin")
                             ? detail::matrix_from_json(term.at("sin"), d)
                             : MatrixXd::Zero(d, d));
    }
  }
  return CoefficientPath(T, n, [=](double t) {
    MatrixXd B = C0;
    for (std::size_t i = 0; i < harmonics.size(); ++i) {
      const double th = kTwoPi * harmonics[i] * t / T;
      B += std::cos(th) * cosparts[i] + std::sin(th) * sinparts[i];
    }
    return B;
  });
}

/// Model config: {type: soft_power|anisotropic, n, beta, sigma?, omega?,
/// weight?: {amplitude, period}, bhat?: <coefficient config>}.
inline HamiltonianModel model_from_json(const json& j) {
  if (!j.contains("type") || !j.contains("n"))
    throw invalid_argument("model: requires fields type, n");
  const std::string type = j.at("type").get<std::string>();
  const int n = j.at("n").get<int>();
  if (n < 1) throw invalid_argument("model: n >= 1 required");
  const double beta = j.value("beta", 1.75);

  HamiltonianModel mdl;
  if (type == "soft_power") {
    mdl = soft_power_model(n, beta);
  } else if (type == "anisotropic") {
    mdl = anisotropic_model(n, j.value("sigma", 1.0), j.value("omega", 1.0),
                            beta);
  } else {
    throw invalid_argument("model: unknown type '" + type + "'");
  }

  if (j.contains("weight")) {
    const auto& w = j.at("weight");
    const double amp = w.at("amplitude").get<double>();
    const double period = w.at("period").get<double>();
    if (!(amp >= 0 && amp < 1))
      throw invalid_argument("model: weight amplitude must lie in [0, 1)");
    auto a = [amp, period](double t) {
      return 1.0 + amp * std::cos(kTwoPi * t / period);
    };
    mdl = nonautonomous_model(mdl, a, period, 1.0 - amp, 1.0 + amp);
  }
  if (j.contains("bhat")) {
    const CoefficientPath Bhat = coefficient_from_json(j.at("bhat"));
    mdl = quadratic_plus_model(Bhat, mdl);
  }
  return mdl;
}

inline json to_json(const IndexPair& p) {
  return json{{"i", p.i}, {"nu", p.nu}};
}

inline json to_json(const IterationReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back(json{{"m", r.m},
                        {"i_m", r.i_m},
                        {"nu_m", r.nu_m},
                        {"prop2_lower", r.prop2_lower},
                        {"prop2_upper", r.prop2_upper},
                        {"prop3_lower", r.prop3_lower},
                        {"prop3_upper", r.prop3_upper},
                        {"holds", r.holds}});
  return json{{"base", to_json(rep.base)},
              {"rows", rows},
              {"all_hold", rep.all_hold}};
}

inline json to_json(const DistinctnessResult& r) {
  return json{{"distinct", r.distinct},
              {"shift", r.shift},
              {"min_distance", r.min_distance}};
}

inline json to_json(const MorseCounts& m) {
  return json{{"minus", m.minus}, {"zero", m.zero}, {"plus", m.plus}};
}

inline json to_json(const SolutionRecord& rec) {
  return json{{"loop", loop_to_json(rec.loop)},
              {"k", rec.k},
              {"alpha", rec.alpha},
              {"residual", rec.residual},
              {"ode_defect", rec.ode_defect},
              {"action_value", rec.action_value},
              {"index", to_json(rec.index)},
              {"morse", to_json(rec.morse)},
              {"index_interval", rec.index_interval},
              {"nontrivial", rec.nontrivial},
              {"index_indeterminate", rec.index_indeterminate},
              {"morse_crosscheck", rec.morse_crosscheck},
              {"outside_theorem_range", rec.outside_theorem_range}};
}

inline json to_json(const LinkingReport& rep) {
  return json{{"theta", rep.theta},
              {"m", rep.m},
              {"varrho", rep.varrho},
              {"sup_on_boundary", rep.sup_on_boundary},
              {"inf_on_s", rep.inf_on_s},
              {"gap_holds", rep.gap_holds}};
}

inline const char* to_string(HypothesisStatus s) {
  switch (s) {
    case HypothesisStatus::certified_on_grid: return "certified_on_grid";
    case HypothesisStatus::violated: return "violated";
    default: return "not_applicable";
  }
}

inline json to_json(const HypothesisEntry& e) {
  json out{{"name", e.name},
           {"status", to_string(e.status)},
           {"margin", e.margin},
           {"note", e.note}};
  if (e.status == HypothesisStatus::violated) {
    json wz = json::array();
    for (int i = 0; i < e.witness_z.size(); ++i) wz.push_back(e.witness_z(i));
    out["witness"] =
        json{{"t", e.witness_t}, {"z", wz}, {"value", e.witness_value}};
  }
  return out;
}

inline json to_json(const HypothesisReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries) entries.push_back(to_json(e));
  return json{{"entries", entries},
              {"all_applicable_hold", rep.all_applicable_hold()}};
}

inline json to_json(const FamilyResult& fam) {
  json records = json::array();
  for (const auto& r : fam.records)
    records.push_back(r ? to_json(*r) : json(nullptr));
  json thresholds = json::array();
  for (const auto& t : fam.thresholds)
    thresholds.push_back(t ? json(*t) : json(nullptr));
  json distinct = json::array();
  for (int r = 0; r < fam.distinct.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < fam.distinct.cols(); ++c) {
      const double v = fam.distinct(r, c);
      row.push_back(std::isnan(v) ? json(nullptr) : json(v != 0.0));
    }
    distinct.push_back(std::move(row));
  }
  return json{{"records", records},
              {"distinctness_thresholds", thresholds},
              {"distinct", distinct}};
}

/// Standard report envelope emitted by every CLI subcommand.
inline json make_report(const std::string& command, const json& config_echo,
                        const json& results) {
  return json{{"schema_version", "1.0"},
              {"command", command},
              {"config_echo", config_echo},
              {"results", results}};
}

/// CSV rendering of a matrix (spectra rows, distinctness matrices).
inline std::string to_csv(const MatrixXd& M) {
  std::ostringstream os;
  os.precision(17);
  for (int r = 0; r < M.rows(); ++r) {
    for (int c = 0; c < M.cols(); ++c) {
      if (c) os << ',';
      os << M(r, c);
    }
    os << '\n';
  }
  return os.str();
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("cannot read file: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace subh
