// Command-line front end: loads model/coefficient configs, dispatches
// library computations and writes JSON/CSV reports.
//
// Exit codes: 0 success, 2 validation error, 3 numeric non-convergence.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "subh/subh.hpp"

namespace {

using subh::json;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  // -1 / NaN sentinels: "not set on the command line".
  int m = -1;
  int steps = -1;
  double T = std::numeric_limits<double>::quiet_NaN();
  int k = -1;
  int kmax = -1;
  double theta = std::numeric_limits<double>::quiet_NaN();
  long seed = -1;
  double tol = std::numeric_limits<double>::quiet_NaN();

  json config;  // parsed config file (possibly empty object)

  // Flag wins over config field over default.
  int geti(const char* key, int dflt, int flag) const {
    if (flag >= 0) return flag;
    return config.value(key, dflt);
  }
  double getd(const char* key, double dflt, double flag) const {
    if (!std::isnan(flag)) return flag;
    return config.value(key, dflt);
  }
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out(opt.out_path);
    if (!out) throw subh::invalid_argument("cannot write file: " + opt.out_path);
    out << text << '\n';
  }
}

void emit_json(const Options& opt, const std::string& command,
               const json& results) {
  emit(opt, subh::make_report(command, opt.config, results).dump(2));
}

subh::CoefficientPath require_coefficient(const Options& opt) {
  if (opt.config.contains("coefficient"))
    return subh::coefficient_from_json(opt.config.at("coefficient"));
  if (opt.config.contains("n") && opt.config.contains("period"))
    return subh::coefficient_from_json(opt.config);
  throw subh::invalid_argument("config must supply a coefficient spec");
}

subh::HamiltonianModel require_model(const Options& opt) {
  if (opt.config.contains("model"))
    return subh::model_from_json(opt.config.at("model"));
  if (opt.config.contains("type")) return subh::model_from_json(opt.config);
  throw subh::invalid_argument("config must supply a model spec");
}

int run_index(const Options& opt) {
  const subh::CoefficientPath B = require_coefficient(opt);
  const subh::IndexPair pair = subh::maslov_index(B, B.period());
  json results{{"index", subh::to_json(pair)},
               {"period", B.period()},
               {"n", B.n()},
               {"max_asymmetry", B.max_asymmetry()}};
  emit_json(opt, "index", results);
  return 0;
}

int run_iterate(const Options& opt) {
  const subh::CoefficientPath B = require_coefficient(opt);
  const int m_max = opt.geti("k_max", 5, opt.kmax);
  const auto rep = subh::check_iteration_inequalities(B, B.period(), m_max);
  emit_json(opt, "iterate", subh::to_json(rep));
  return 0;
}

subh::SolverOptions solver_options(const Options& opt) {
  subh::SolverOptions so;
  so.residual_tol = opt.getd("tol", 1e-8, opt.tol);
  so.seed = static_cast<unsigned>(
      opt.geti("seed", 1, static_cast<int>(opt.seed)));
  so.varrho = opt.getd("varrho", 2.5, std::numeric_limits<double>::quiet_NaN());
  return so;
}

int run_solve(const Options& opt) {
  const subh::HamiltonianModel mdl = require_model(opt);
  const double T = opt.getd("T", subh::kTwoPi, opt.T);
  const int k = opt.geti("k", 1, opt.k);
  const int m = opt.geti("m", 32, opt.m);
  const double alpha = T / subh::kTwoPi;
  auto rec = subh::find_critical_point(mdl, alpha, k, m, solver_options(opt));
  if (!rec) {
    emit_json(opt, "solve",
              json{{"found", false},
                   {"diagnostic", "no seed converged to a nontrivial critical point"}});
    return 3;
  }
  *rec = subh::verify_solution(mdl, *rec);
  emit_json(opt, "solve", json{{"found", true}, {"record", subh::to_json(*rec)}});
  return 0;
}

int run_subharmonics(const Options& opt) {
  const subh::HamiltonianModel mdl = require_model(opt);
  const double T = opt.getd("T", subh::kTwoPi, opt.T);
  const int k_max = opt.geti("k_max", 3, opt.kmax);
  const int m = opt.geti("m", 32, opt.m);
  const auto fam = subh::subharmonic_family(mdl, T / subh::kTwoPi, k_max, m,
                                            solver_options(opt));
  if (opt.format == "csv") {
    emit(opt, subh::to_csv(fam.distinct));
  } else {
    json results = subh::to_json(fam);
    if (mdl.bhat) {
      const auto bound = subh::k_range_bound(*mdl.bhat, T);
      results["k_range_bound"] = bound ? json(*bound) : json(nullptr);
    }
    emit_json(opt, "subharmonics", results);
  }
  return 0;
}

int run_linking(const Options& opt) {
  const subh::HamiltonianModel mdl = require_model(opt);
  const double T = opt.getd("T", subh::kTwoPi, opt.T);
  const int m = opt.geti("m", 16, opt.m);
  const double theta = opt.getd("theta", 4.0, opt.theta);
  const int nsamples = opt.geti("nsamples", 500, opt.steps);
  const double varrho =
      opt.getd("varrho", 2.5, std::numeric_limits<double>::quiet_NaN());
  const unsigned seed =
      static_cast<unsigned>(opt.geti("seed", 1, static_cast<int>(opt.seed)));
  const auto rep = subh::linking_gap(mdl, T / subh::kTwoPi, m, theta, nsamples,
                                     varrho, seed);
  emit_json(opt, "linking", subh::to_json(rep));
  return 0;
}

int run_hypotheses(const Options& opt) {
  const subh::HamiltonianModel mdl = require_model(opt);
  subh::GridSpec grid;
  grid.seed = static_cast<unsigned>(
      opt.geti("seed", static_cast<int>(grid.seed), static_cast<int>(opt.seed)));
  subh::HypothesisReport rep = subh::verify_hypotheses(mdl, grid);
  if (mdl.bhat)
    rep.entries.push_back(subh::check_h7(*mdl.bhat, mdl.params.mu,
                                         mdl.params.upsilon, grid));
  emit_json(opt, "hypotheses", subh::to_json(rep));
  return 0;
}

int run_minimal_period(const Options& opt) {
  if (!opt.config.contains("loop"))
    throw subh::invalid_argument("config must supply a loop for minimal-period");
  subh::SolutionRecord rec;
  rec.loop = subh::loop_from_json(opt.config.at("loop"));
  rec.k = opt.geti("k", 1, opt.k);
  rec.alpha = opt.getd("T", subh::kTwoPi, opt.T) / subh::kTwoPi;
  const double period = subh::minimal_period(rec);
  emit_json(opt, "minimal-period",
            json{{"minimal_period", period},
                 {"full_period", rec.k * rec.alpha * subh::kTwoPi}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maslov-type indices and subharmonic orbits of periodic "
               "Hamiltonian systems"};
  app.require_subcommand(1);

  Options opt;
  for (const char* name : {"index", "iterate", "solve", "subharmonics",
                           "linking", "hypotheses", "minimal-period"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--out", opt.out_path, "output path (default stdout)");
    sub->add_option("--format", opt.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--m", opt.m, "Galerkin level");
    sub->add_option("--steps", opt.steps, "integration steps / sample count");
    sub->add_option("--T", opt.T, "base period");
    sub->add_option("--k", opt.k, "period multiple");
    sub->add_option("--kmax", opt.kmax, "largest period multiple");
    sub->add_option("--theta", opt.theta, "linking radius");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--tol", opt.tol, "residual tolerance");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    opt.config = opt.config_path.empty() ? json::object()
                                         : subh::load_json_file(opt.config_path);
    if (opt.format == "csv" && command != "subharmonics")
      throw subh::invalid_argument("csv output is only available for subharmonics");

    if (command == "index") return run_index(opt);
    if (command == "iterate") return run_iterate(opt);
    if (command == "solve") return run_solve(opt);
    if (command == "subharmonics") return run_subharmonics(opt);
    if (command == "linking") return run_linking(opt);
    if (command == "hypotheses") return run_hypotheses(opt);
    if (command == "minimal-period") return run_minimal_period(opt);
    throw subh::invalid_argument("unknown command: " + command);
  } catch (const subh::non_convergence& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const subh::quadrature_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const subh::numeric_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const subh::evaluation_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const subh::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
