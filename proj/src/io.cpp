#include "ifp/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifp/numfmt.hpp"

namespace ifp {

using nlohmann::json;

namespace {

const json& require_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

std::string require_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path + ": expected a string");
  return v.get<std::string>();
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

std::vector<double> require_number_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(require_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SquareMatrix require_matrix(const json& v, std::size_t n, const std::string& path) {
  if (!v.is_array() || v.size() != n) {
    throw ParseError(path + ": expected " + std::to_string(n) + " rows");
  }
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = require_number_array(v[i], path + "[" + std::to_string(i) + "]");
    if (row.size() != n) {
      throw ParseError(path + "[" + std::to_string(i) + "]: expected " + std::to_string(n) +
                       " entries");
    }
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = row[j];
  }
  return m;
}

void require_symmetric_with_diagonal(const SquareMatrix& m, double diagonal,
                                     const std::string& path) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.at(i, i) != diagonal) {
      throw ParseError(path + "[" + std::to_string(i) + "][" + std::to_string(i) +
                       "]: diagonal must be exactly " + format_double(diagonal));
    }
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m.at(i, j) != m.at(j, i)) {
        throw ParseError(path + ": matrix is not symmetric at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
    }
  }
}

void require_range(const SquareMatrix& m, double lo, double hi, const std::string& path) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!(m.at(i, j) >= lo && m.at(i, j) <= hi)) {
        throw ParseError(path + "[" + std::to_string(i) + "][" + std::to_string(j) +
                         "]: value outside [" + format_double(lo) + "," + format_double(hi) + "]");
      }
    }
  }
}

MeshTable parse_mesh_table(const json& spec, const std::string& path) {
  const double step = require_number(require_field(spec, "step", path), path + ".step");
  const auto& table = require_field(spec, "table", path);
  if (!table.is_array() || table.empty()) throw ParseError(path + ".table: expected rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < table.size(); ++i) {
    rows.push_back(require_number_array(table[i], path + ".table[" + std::to_string(i) + "]"));
  }
  try {
    return MeshTable(step, std::move(rows));
  } catch (const ConstructionError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

TNormSpec parse_tnorm(const json& spec, const std::string& path) {
  const std::string kind = require_string(require_field(spec, "kind", path), path + ".kind");
  if (kind == "minimum") return TNormSpec::minimum();
  if (kind == "product") return TNormSpec::product();
  if (kind == "lukasiewicz") return TNormSpec::lukasiewicz();
  if (kind == "custom-table") return TNormSpec::custom(parse_mesh_table(spec, path));
  throw ParseError(path + ".kind: unknown t-norm kind '" + kind + "'");
}

TConormSpec parse_tconorm(const json& spec, const std::string& path) {
  const std::string kind = require_string(require_field(spec, "kind", path), path + ".kind");
  if (kind == "maximum") return TConormSpec::maximum();
  if (kind == "probabilistic-sum") return TConormSpec::probabilistic_sum();
  if (kind == "lukasiewicz") return TConormSpec::lukasiewicz();
  if (kind == "custom-table") return TConormSpec::custom(parse_mesh_table(spec, path));
  throw ParseError(path + ".kind: unknown t-conorm kind '" + kind + "'");
}

PairProfile parse_profile(const json& spec, std::size_t n, const std::string& path) {
  const std::string kind = require_string(require_field(spec, "kind", path), path + ".kind");
  if (kind == "constant") {
    auto mu = require_matrix(require_field(spec, "mu", path), n, path + ".mu");
    auto nu = require_matrix(require_field(spec, "nu", path), n, path + ".nu");
    require_symmetric_with_diagonal(mu, 1.0, path + ".mu");
    require_symmetric_with_diagonal(nu, 0.0, path + ".nu");
    require_range(mu, 0.0, 1.0, path + ".mu");
    require_range(nu, 0.0, 1.0, path + ".nu");
    return PairProfile::constant(std::move(mu), std::move(nu));
  }
  if (kind == "standard" || kind == "exponential") {
    auto dist = require_matrix(require_field(spec, "dist", path), n, path + ".dist");
    require_symmetric_with_diagonal(dist, 0.0, path + ".dist");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!(dist.at(i, j) >= 0.0)) {
          throw ParseError(path + ".dist[" + std::to_string(i) + "][" + std::to_string(j) +
                           "]: negative distance");
        }
      }
    }
    if (kind == "standard") return PairProfile::standard(std::move(dist));
    const double base = require_number(require_field(spec, "base", path), path + ".base");
    if (!(base > 0.0 && base < 1.0)) throw ParseError(path + ".base: must lie in (0,1)");
    return PairProfile::exponential(base, std::move(dist));
  }
  throw ParseError(path + ".kind: unknown profile kind '" + kind + "'");
}

}  // namespace

LoadedDocument parse_document(const json& doc,
                              const std::optional<std::vector<double>>& t_grid_override) {
  if (!doc.is_object()) throw ParseError("$: expected a JSON object");

  const auto& points_json = require_field(doc, "points", "$");
  if (!points_json.is_array() || points_json.empty()) {
    throw ParseError("$.points: expected a nonempty array");
  }
  std::vector<std::string> points;
  for (std::size_t i = 0; i < points_json.size(); ++i) {
    points.push_back(require_string(points_json[i], "$.points[" + std::to_string(i) + "]"));
  }

  TNormSpec tnorm = parse_tnorm(require_field(doc, "tnorm", "$"), "$.tnorm");
  TConormSpec tconorm = parse_tconorm(require_field(doc, "tconorm", "$"), "$.tconorm");

  std::vector<double> t_grid;
  if (t_grid_override) {
    t_grid = *t_grid_override;
  } else {
    t_grid = require_number_array(require_field(doc, "t_grid", "$"), "$.t_grid");
  }

  PairProfile profile = parse_profile(require_field(doc, "profile", "$"), points.size(),
                                      "$.profile");

  FiniteInstance instance(std::move(points), std::move(profile), std::move(tnorm),
                          std::move(tconorm), std::move(t_grid));

  LoadedDocument out{std::move(instance), std::nullopt};
  if (doc.contains("map")) {
    const auto& map_json = doc["map"];
    if (!map_json.is_object()) throw ParseError("$.map: expected an object");
    std::map<std::string, std::string> images;
    for (const auto& [from, to] : map_json.items()) {
      if (!out.instance.has_point(from)) throw ParseError("$.map: unknown point '" + from + "'");
      images[from] = require_string(to, "$.map." + from);
      if (!out.instance.has_point(images[from])) {
        throw ParseError("$.map." + from + ": unknown image '" + images[from] + "'");
      }
    }
    try {
      out.map = SelfMap::from_labels(out.instance, images);
    } catch (const ConstructionError& e) {
      throw ParseError(std::string("$.map: ") + e.what());
    }
  }
  return out;
}

LoadedDocument load_document(const std::string& path,
                             const std::optional<std::vector<double>>& t_grid_override) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("$: invalid JSON: " + std::string(e.what()));
  }
  try {
    return parse_document(doc, t_grid_override);
  } catch (const ConstructionError& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
}

json axiom_report_json(const AxiomReport& report) {
  json checks = json::array();
  for (const auto& row : report.checks) {
    checks.push_back({{"axiom", row.axiom}, {"verdict", to_string(row.verdict)}});
  }
  json witnesses = json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back({{"axiom", w.axiom},
                         {"points", w.points},
                         {"t", w.ts},
                         {"lhs", w.lhs},
                         {"rhs", w.rhs}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "axiom_report"},
          {"all_passed", report.all_passed()},
          {"checks", checks},
          {"witnesses", witnesses}};
}

json certificate_json(const ContractionCertificate& cert) {
  json out = {{"kind", to_string(cert.kind)},
              {"checked_t", cert.checked_t},
              {"witness_mode", to_string(cert.witness_mode)}};
  if (cert.kind == ContractionCertificate::Kind::TsIf) {
    out["k"] = cert.k;
  } else {
    out["eps"] = cert.eps;
    out["lambda"] = cert.lambda;
  }
  return out;
}

json counterexample_json(const ContractionCounterexample& ce) {
  return {{"x", ce.x},     {"y", ce.y},     {"t", ce.t},
          {"lhs", ce.lhs}, {"rhs", ce.rhs}, {"clause", ce.clause}};
}

json certify_report_json(const CertifyOutcome& outcome, std::optional<double> k_star) {
  json out = {{"schema_version", kSchemaVersion},
              {"kind", "certificate_report"},
              {"certified", outcome.certified()},
              {"certificate", nullptr},
              {"counterexample", nullptr},
              {"k_star", nullptr}};
  if (outcome.certificate) out["certificate"] = certificate_json(*outcome.certificate);
  if (outcome.counterexample) out["counterexample"] = counterexample_json(*outcome.counterexample);
  if (k_star) out["k_star"] = *k_star;
  return out;
}

json solve_report_json(const SolveReport& report) {
  json residuals = json::array();
  for (const auto& row : report.residuals) {
    residuals.push_back({{"n", row.n}, {"t", row.t}, {"mu", row.mu}, {"nu", row.nu}});
  }
  json premises = json::array();
  for (const auto& p : report.premise_checks) {
    premises.push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
  }
  json out = {{"schema_version", kSchemaVersion},
              {"kind", "solve_report"},
              {"mode", report.mode},
              {"converged", report.converged},
              {"fixed_point", nullptr},
              {"iterations_used", report.iterations_used},
              {"iterates", report.iterates},
              {"residuals", residuals},
              {"premises", premises},
              {"certificate", nullptr},
              {"geometric_bound",
               {{"checked", report.geometric_bound.checked},
                {"ok", report.geometric_bound.ok},
                {"max_mu_violation", report.geometric_bound.max_mu_violation},
                {"max_nu_violation", report.geometric_bound.max_nu_violation}}},
              {"containment", nullptr},
              {"step_invariant", nullptr},
              {"cycle", nullptr}};
  if (report.fixed_point) out["fixed_point"] = *report.fixed_point;
  if (report.certificate) out["certificate"] = certificate_json(*report.certificate);
  if (!report.containment.empty()) {
    json rows = json::array();
    for (const auto& c : report.containment) {
      rows.push_back({{"n", c.n}, {"inside", c.inside}, {"mu", c.mu}, {"nu", c.nu}});
    }
    out["containment"] = rows;
  }
  if (!report.step_invariant.empty()) {
    json rows = json::array();
    for (const auto& s : report.step_invariant) {
      rows.push_back({{"m", s.m}, {"ok", s.ok}, {"mu", s.mu}, {"nu", s.nu}});
    }
    out["step_invariant"] = rows;
  }
  if (report.cycle) out["cycle"] = *report.cycle;
  return out;
}

json chain_report_json(double eta, double t, const std::optional<Chain>& chain,
                       const std::optional<std::vector<std::vector<std::string>>>& components) {
  json out = {{"schema_version", kSchemaVersion},
              {"kind", "chain_report"},
              {"eta", eta},
              {"t", t},
              {"chainable", chain.has_value()},
              {"chain", nullptr},
              {"components", nullptr}};
  if (chain) {
    json links = json::array();
    for (const auto& link : chain->links) {
      links.push_back(
          {{"from", link.from}, {"to", link.to}, {"mu", link.mu}, {"nu", link.nu}});
    }
    out["chain"] = {{"points", chain->points}, {"links", links}};
  }
  if (components) out["components"] = *components;
  return out;
}

json enumeration_report_json(const FiniteInstance& instance, double k,
                             const std::vector<SelfMap>& maps) {
  json list = json::array();
  for (const auto& map : maps) {
    json images = json::object();
    for (std::size_t i = 0; i < instance.size(); ++i) {
      images[instance.label(i)] = instance.label(map.apply(i));
    }
    list.push_back({{"images", images}, {"fixed_points", fixed_points(instance, map)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "enumeration_report"},
          {"k", k},
          {"count", maps.size()},
          {"maps", list}};
}

std::string solve_trace_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "n,point,t,mu_residual,nu_residual\n";
  for (const auto& row : report.residuals) {
    out << row.n << ',' << report.iterates[row.n] << ',' << format_double(row.t) << ','
        << format_double(row.mu) << ',' << format_double(row.nu) << '\n';
  }
  return out.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace ifp
