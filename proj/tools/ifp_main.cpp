// ifp: command-line front end for the intuitionistic fuzzy fixed-point
// toolkit. Loads instance documents, runs checks and solves, and emits JSON
// reports plus CSV iterate traces with stable schemas.
//
// Exit codes: 0 success / verdict true, 1 verdict false or failed theorem
// hypothesis, 2 malformed input or usage error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifp/analysis.hpp"
#include "ifp/io.hpp"
#include "ifp/maps.hpp"
#include "ifp/numfmt.hpp"
#include "ifp/solvers.hpp"
#include "ifp/space.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
  std::string input;
  std::string out;
  bool no_meta = false;
  double tol = 1e-9;
  std::size_t max_iter = 1000;
  std::vector<double> t_grid;
  bool flag_strict_xii = false;
  bool flag_no_strict_xii = false;

  std::optional<std::vector<double>> t_grid_override() const {
    if (t_grid.empty()) return std::nullopt;
    return t_grid;
  }
  std::optional<bool> strict_xii() const {
    if (flag_strict_xii) return true;
    if (flag_no_strict_xii) return false;
    return std::nullopt;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("input", opts.input, "instance document (JSON)")->required();
  cmd->add_option("--out", opts.out, "write the JSON report to this path");
  cmd->add_flag("--no-meta", opts.no_meta, "omit the timestamped meta block");
  cmd->add_option("--tol", opts.tol, "numeric tolerance")->capture_default_str();
  cmd->add_option("--max-iter", opts.max_iter, "iteration budget")->capture_default_str();
  cmd->add_option("--t-grid", opts.t_grid, "override the document t grid")->delimiter(',');
  cmd->add_flag("--strict-xii", opts.flag_strict_xii, "require an idempotent operation pair");
  cmd->add_flag("--no-strict-xii", opts.flag_no_strict_xii, "do not require idempotency");
}

std::string csv_path_for(const std::string& out) {
  const std::string suffix = ".json";
  if (out.size() > suffix.size() && out.ends_with(suffix)) {
    return out.substr(0, out.size() - suffix.size()) + ".csv";
  }
  return out + ".csv";
}

json meta_block() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return {{"tool", "ifp"}, {"version", "1.0.0"}, {"timestamp", buf}};
}

// Emits the report: to --out when given (with a one-line summary on stdout),
// to stdout otherwise.
void emit(const CommonOpts& opts, json report, json manifest, const std::string& summary,
          const std::string& csv = "") {
  manifest["outputs"] = json::array();
  if (!opts.out.empty()) {
    manifest["outputs"].push_back(opts.out);
    if (!csv.empty()) manifest["outputs"].push_back(csv_path_for(opts.out));
  }
  report["manifest"] = manifest;
  if (!opts.no_meta) report["meta"] = meta_block();

  if (!opts.out.empty()) {
    ifp::atomic_write_file(opts.out, report.dump(2) + "\n");
    if (!csv.empty()) ifp::atomic_write_file(csv_path_for(opts.out), csv);
    if (!summary.empty()) std::cout << summary << "\n";
  } else {
    // Without --out the JSON report is the stdout payload.
    std::cout << report.dump(2) << "\n";
  }
}

json base_manifest(const std::string& command, const CommonOpts& opts, json options,
                   int exit_code) {
  options["tol"] = opts.tol;
  return {{"command", command},
          {"input", opts.input},
          {"options", std::move(options)},
          {"exit_code", exit_code}};
}

// ---- check-axioms ---------------------------------------------------------

int cmd_check_axioms(const CommonOpts& opts) {
  const auto doc = ifp::load_document(opts.input, opts.t_grid_override());
  const bool check_xii = opts.strict_xii().value_or(false);
  const auto report = ifp::check_ifm_axioms(doc.instance, opts.tol, check_xii);

  std::cout << "axiom    verdict\n";
  for (const auto& row : report.checks) {
    std::string id = "(" + row.axiom + ")";
    id.resize(8, ' ');
    std::cout << id << " " << ifp::to_string(row.verdict) << "\n";
  }
  for (const auto& w : report.witnesses) {
    std::cout << "  witness (" << w.axiom << "): points=[";
    for (std::size_t i = 0; i < w.points.size(); ++i) {
      std::cout << (i ? "," : "") << w.points[i];
    }
    std::cout << "] t=[";
    for (std::size_t i = 0; i < w.ts.size(); ++i) {
      std::cout << (i ? "," : "") << ifp::format_double(w.ts[i]);
    }
    std::cout << "] lhs=" << ifp::format_double(w.lhs) << " rhs=" << ifp::format_double(w.rhs)
              << "\n";
  }

  const int code = report.all_passed() ? 0 : 1;
  json options = {{"t_grid", doc.instance.t_grid()}, {"strict_xii", check_xii}};
  if (!opts.out.empty()) {
    emit(opts, ifp::axiom_report_json(report), base_manifest("check-axioms", opts, options, code),
         "");
  }
  return code;
}

// ---- certify ---------------------------------------------------------------

struct CertifyOpts {
  std::string kind = "ts-if";
  double k = 0.0;
  bool auto_k = false;
  double eps = 0.0;
  double lambda = 0.0;
  double t = 0.0;
};

int cmd_certify(const CommonOpts& opts, const CertifyOpts& copts) {
  const auto doc = ifp::load_document(opts.input, opts.t_grid_override());
  if (!doc.map) throw ifp::ParseError("$.map: document contains no map");

  ifp::CertifyOutcome outcome;
  std::optional<double> k_star;
  json options = {{"kind", copts.kind}, {"t_grid", doc.instance.t_grid()}};

  if (copts.kind == "ts-if") {
    double k = copts.k;
    if (copts.auto_k) {
      const auto mc = ifp::min_contraction_constant(doc.instance, *doc.map);
      if (!mc.contractive) {
        outcome.counterexample = mc.blocking;
        emit(opts, ifp::certify_report_json(outcome, std::nullopt),
             base_manifest("certify", opts, options, 1), "not certified: not contractive");
        return 1;
      }
      k_star = mc.k_star;
      k = mc.k_star > 0.0 ? mc.k_star : 0.5;
      options["auto_k"] = true;
    } else {
      if (!(k > 0.0 && k < 1.0)) throw ifp::DomainError("--k must lie in (0,1)");
      options["k"] = k;
    }
    outcome = ifp::is_ts_if_contractive(doc.instance, *doc.map, k);
  } else if (copts.kind == "local") {
    if (!(copts.eps > 0.0 && copts.eps < 1.0)) throw ifp::DomainError("--eps must lie in (0,1)");
    if (!(copts.lambda > 0.0 && copts.lambda < 1.0)) {
      throw ifp::DomainError("--lambda must lie in (0,1)");
    }
    options["eps"] = copts.eps;
    options["lambda"] = copts.lambda;
    if (copts.t > 0.0) {
      options["t"] = copts.t;
      const double ts[] = {copts.t};
      outcome = ifp::is_locally_contractive(doc.instance, *doc.map, copts.eps, copts.lambda, ts);
    } else {
      outcome = ifp::is_locally_contractive(doc.instance, *doc.map, copts.eps, copts.lambda);
    }
  } else {
    throw ifp::DomainError("--kind must be ts-if or local");
  }

  const int code = outcome.certified() ? 0 : 1;
  const std::string summary =
      outcome.certified() ? "certified (" + copts.kind + ")" : "not certified (" + copts.kind + ")";
  emit(opts, ifp::certify_report_json(outcome, k_star),
       base_manifest("certify", opts, options, code), summary);
  return code;
}

// ---- solve -----------------------------------------------------------------

struct SolveOpts {
  std::string mode = "picard";
  std::string x0;
  std::string center;
  double k = 0.0;
  bool has_k = false;
  double r = 0.0;
  double t = 0.0;
  double eps = 0.0;
  double lambda = 0.0;
  std::size_t m = 1;
};

int cmd_solve(const CommonOpts& opts, const SolveOpts& sopts) {
  const auto doc = ifp::load_document(opts.input, opts.t_grid_override());
  if (!doc.map) throw ifp::ParseError("$.map: document contains no map");

  ifp::SolverConfig config;
  config.tol = opts.tol;
  config.max_iter = opts.max_iter;
  config.m = sopts.m;
  config.strict_xii = opts.strict_xii();

  json options = {{"mode", sopts.mode},
                  {"max_iter", opts.max_iter},
                  {"t_grid", doc.instance.t_grid()}};

  const auto finish = [&](const ifp::SolveReport& report,
                          std::optional<std::string> error) -> int {
    const int code = (report.converged && !error) ? 0 : 1;
    json rj = ifp::solve_report_json(report);
    rj["error"] = error ? json(*error) : json(nullptr);
    std::string summary;
    if (error) {
      summary = "hypothesis error: " + *error;
    } else if (report.converged) {
      summary = "converged: fixed point " + *report.fixed_point + " after " +
                std::to_string(report.iterations_used) + " iterations";
    } else {
      summary = "did not converge within " + std::to_string(opts.max_iter) + " iterations";
    }
    emit(opts, std::move(rj), base_manifest("solve", opts, options, code), summary,
         ifp::solve_trace_csv(report));
    return code;
  };

  try {
    if (sopts.mode == "picard") {
      if (sopts.x0.empty()) throw ifp::DomainError("--x0 is required for picard mode");
      config.x0 = sopts.x0;
      options["x0"] = sopts.x0;
      std::optional<ifp::ContractionCertificate> cert;
      if (sopts.has_k) {
        options["k"] = sopts.k;
        ifp::ContractionCertificate c;
        c.kind = ifp::ContractionCertificate::Kind::TsIf;
        c.k = sopts.k;
        cert = c;
      }
      return finish(ifp::picard_solve(doc.instance, *doc.map, config, cert), std::nullopt);
    }
    if (sopts.mode == "ball") {
      if (sopts.center.empty()) throw ifp::DomainError("--center is required for ball mode");
      if (!(sopts.r > 0.0 && sopts.r < 1.0)) throw ifp::DomainError("--r must lie in (0,1)");
      if (!(sopts.t > 0.0)) throw ifp::DomainError("--t must be positive");
      options["center"] = sopts.center;
      options["r"] = sopts.r;
      options["t"] = sopts.t;
      double k = sopts.k;
      if (!sopts.has_k) {
        const auto mc = ifp::min_contraction_constant(doc.instance, *doc.map);
        if (!mc.contractive) {
          throw ifp::HypothesisError("map is not TS-IF contractive and no --k was given");
        }
        k = mc.k_star > 0.0 ? mc.k_star : 0.5;
      }
      options["k"] = k;
      const ifp::Ball ball{sopts.center, sopts.r, sopts.t, true};
      return finish(ifp::ball_solve(doc.instance, *doc.map, ball, k, config), std::nullopt);
    }
    if (sopts.mode == "power") {
      if (sopts.x0.empty()) throw ifp::DomainError("--x0 is required for power mode");
      config.x0 = sopts.x0;
      options["x0"] = sopts.x0;
      options["m"] = sopts.m;
      std::optional<double> k;
      if (sopts.has_k) {
        k = sopts.k;
        options["k"] = sopts.k;
      }
      return finish(ifp::power_solve(doc.instance, *doc.map, config, k), std::nullopt);
    }
    if (sopts.mode == "chain") {
      if (sopts.x0.empty()) throw ifp::DomainError("--x0 is required for chain mode");
      if (!(sopts.t > 0.0)) throw ifp::DomainError("--t must be positive");
      config.x0 = sopts.x0;
      options["x0"] = sopts.x0;
      options["eps"] = sopts.eps;
      options["lambda"] = sopts.lambda;
      options["t"] = sopts.t;
      return finish(
          ifp::chain_solve(doc.instance, *doc.map, sopts.eps, sopts.lambda, config, sopts.t),
          std::nullopt);
    }
    throw ifp::DomainError("--mode must be picard, ball, power or chain");
  } catch (const ifp::SolveHypothesisError& e) {
    return finish(e.report, e.what());
  }
}

// ---- chain -----------------------------------------------------------------

struct ChainOpts {
  std::string from;
  std::string to;
  double eta = 0.0;
  double t = 0.0;
};

int cmd_chain(const CommonOpts& opts, const ChainOpts& copts) {
  const auto doc = ifp::load_document(opts.input, opts.t_grid_override());
  json options = {{"from", copts.from},
                  {"to", copts.to},
                  {"eta", copts.eta},
                  {"t", copts.t},
                  {"t_grid", doc.instance.t_grid()}};
  try {
    const auto chain = ifp::build_chain(doc.instance, copts.from, copts.to, copts.eta, copts.t);
    const std::string summary =
        "chain with " + std::to_string(chain.links.size()) + " links";
    emit(opts, ifp::chain_report_json(copts.eta, copts.t, chain, std::nullopt),
         base_manifest("chain", opts, options, 0), summary);
    return 0;
  } catch (const ifp::NotChainableError& e) {
    emit(opts, ifp::chain_report_json(copts.eta, copts.t, std::nullopt, e.components),
         base_manifest("chain", opts, options, 1), std::string("not chainable: ") + e.what());
    return 1;
  }
}

// ---- enumerate -------------------------------------------------------------

int cmd_enumerate(const CommonOpts& opts, double k) {
  const auto doc = ifp::load_document(opts.input, opts.t_grid_override());
  std::size_t cap = ifp::kDefaultEnumerationCap;
  if (const char* env = std::getenv("IFP_ENUM_CAP")) {
    try {
      cap = std::stoull(env);
    } catch (const std::exception&) {
      throw ifp::DomainError("IFP_ENUM_CAP is not a valid integer");
    }
  }
  const auto maps = ifp::enumerate_contractive_maps(doc.instance, k, cap);
  json options = {{"k", k}, {"cap", cap}, {"t_grid", doc.instance.t_grid()}};
  emit(opts, ifp::enumeration_report_json(doc.instance, k, maps),
       base_manifest("enumerate", opts, options, 0),
       std::to_string(maps.size()) + " certified maps");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-point solver toolkit for intuitionistic fuzzy metric spaces"};
  app.require_subcommand(1);

  CommonOpts check_opts;
  auto* check = app.add_subcommand("check-axioms", "validate the space axioms of an instance");
  add_common(check, check_opts);

  CommonOpts certify_common;
  CertifyOpts certify_opts;
  auto* certify = app.add_subcommand("certify", "certify a contraction hypothesis for the map");
  add_common(certify, certify_common);
  certify->add_option("--kind", certify_opts.kind, "ts-if or local")->capture_default_str();
  auto* k_opt = certify->add_option("--k", certify_opts.k, "ts-if contraction constant");
  certify->add_flag("--auto-k", certify_opts.auto_k, "derive k from the minimal constant")
      ->excludes(k_opt);
  certify->add_option("--eps", certify_opts.eps, "local contractivity eps");
  certify->add_option("--lambda", certify_opts.lambda, "local contractivity lambda");
  certify->add_option("--t", certify_opts.t, "single t value for the local check");

  CommonOpts solve_common;
  SolveOpts solve_opts;
  auto* solve = app.add_subcommand("solve", "run a fixed-point procedure");
  add_common(solve, solve_common);
  solve->add_option("--mode", solve_opts.mode, "picard | ball | power | chain")
      ->capture_default_str();
  solve->add_option("--x0", solve_opts.x0, "start point");
  solve->add_option("--center", solve_opts.center, "ball center");
  auto* solve_k = solve->add_option("--k", solve_opts.k, "contraction constant");
  solve->add_option("--r", solve_opts.r, "ball radius");
  solve->add_option("--t", solve_opts.t, "evaluation t for ball/chain modes");
  solve->add_option("--eps", solve_opts.eps, "chain mode eps");
  solve->add_option("--lambda", solve_opts.lambda, "chain mode lambda");
  solve->add_option("--m", solve_opts.m, "power-map order");

  CommonOpts chain_common;
  ChainOpts chain_opts;
  auto* chain = app.add_subcommand("chain", "build a shortest eta-chain between two points");
  add_common(chain, chain_common);
  chain->add_option("--from", chain_opts.from, "chain start")->required();
  chain->add_option("--to", chain_opts.to, "chain end")->required();
  chain->add_option("--eta", chain_opts.eta, "eta threshold")->required();
  chain->add_option("--t", chain_opts.t, "evaluation t")->required();

  CommonOpts enum_common;
  double enum_k = 0.0;
  auto* enumerate = app.add_subcommand("enumerate", "list all TS-IF contractive maps at k");
  add_common(enumerate, enum_common);
  enumerate->add_option("--k", enum_k, "contraction constant")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check_axioms(check_opts);
    if (certify->parsed()) return cmd_certify(certify_common, certify_opts);
    if (solve->parsed()) {
      solve_opts.has_k = solve_k->count() > 0;
      return cmd_solve(solve_common, solve_opts);
    }
    if (chain->parsed()) return cmd_chain(chain_common, chain_opts);
    if (enumerate->parsed()) return cmd_enumerate(enum_common, enum_k);
  } catch (const ifp::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ifp::ConstructionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ifp::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ifp::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ifp::WitnessNotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ifp::HypothesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ifp::InvariantViolationError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  } catch (const ifp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
