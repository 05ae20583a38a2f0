#include "ifp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>
#include <utility>

#include "ifp/numfmt.hpp"

namespace ifp {

namespace {

constexpr double kGeometricSlack = 1e-12;

void check_axiom_premise(const FiniteInstance& inst, const SolverConfig& config,
                         SolveReport& report) {
  const auto axioms = check_ifm_axioms(inst, config.tol > 0 ? config.tol : 1e-9);
  std::string detail;
  if (!axioms.all_passed()) {
    for (const auto& row : axioms.checks) {
      if (row.verdict == AxiomVerdict::Fail) {
        detail = "axiom (" + row.axiom + ") fails";
        break;
      }
    }
  }
  report.premise_checks.push_back({"axioms", axioms.all_passed(), detail});
  if (!axioms.all_passed()) {
    throw SolveHypothesisError("instance is not axiom-passing: " + detail, report);
  }
}

void check_xii_premise(const FiniteInstance& inst, bool required, SolveReport& report) {
  if (!required) return;
  const bool ok = inst.tnorm().idempotent() && inst.tconorm().idempotent();
  report.premise_checks.push_back(
      {"strict_xii", ok, ok ? "" : "operation pair is not idempotent"});
  if (!ok) {
    throw SolveHypothesisError("property (xii) requires an idempotent operation pair", report);
  }
}

std::string counterexample_detail(const ContractionCounterexample& ce) {
  return "(" + ce.x + "," + ce.y + ") at t=" + format_double(ce.t) + ": " + ce.clause +
         " [lhs=" + format_double(ce.lhs) + ", rhs=" + format_double(ce.rhs) + "]";
}

struct IterationOutcome {
  std::vector<std::size_t> iterates;
  bool converged = false;
  std::optional<std::vector<std::string>> cycle;
};

// Applies the map until the iterate repeats exactly (finite profiles), the
// residuals fall within tol (blackbox profiles), a cycle appears, or the
// iteration budget runs out.
IterationOutcome run_iteration(const FiniteInstance& inst, const SelfMap& map, std::size_t start,
                               const SolverConfig& config) {
  const bool residual_stop = inst.profile().kind() == PairProfile::Kind::Blackbox;

  IterationOutcome out;
  out.iterates.push_back(start);
  std::unordered_map<std::size_t, std::size_t> first_seen{{start, 0}};

  std::size_t cur = start;
  for (std::size_t i = 1; i <= config.max_iter; ++i) {
    const std::size_t next = map.apply(cur);
    if (next == cur) {
      out.converged = true;
      return out;
    }
    if (residual_stop) {
      bool within = true;
      for (double t : inst.t_grid()) {
        if (1.0 - inst.mu(cur, next, t) > config.tol || inst.nu(cur, next, t) > config.tol) {
          within = false;
          break;
        }
      }
      if (within) {
        out.iterates.push_back(next);
        out.converged = true;
        return out;
      }
    }
    const auto seen = first_seen.find(next);
    if (seen != first_seen.end()) {
      // Revisiting a non-fixed point: a cycle of period >= 2. A certified
      // map cannot do this; it flags unsound blackbox inputs.
      std::vector<std::string> cycle;
      for (std::size_t j = seen->second; j < out.iterates.size(); ++j) {
        cycle.push_back(inst.label(out.iterates[j]));
      }
      out.iterates.push_back(next);
      out.cycle = std::move(cycle);
      return out;
    }
    first_seen.emplace(next, out.iterates.size());
    out.iterates.push_back(next);
    cur = next;
  }
  return out;
}

void fill_residuals(const FiniteInstance& inst, SolveReport& report) {
  for (std::size_t n = 0; n + 1 < report.iterates.size(); ++n) {
    const std::size_t a = inst.index_of(report.iterates[n]);
    const std::size_t b = inst.index_of(report.iterates[n + 1]);
    for (double t : inst.t_grid()) {
      report.residuals.push_back({n, t, inst.mu(a, b, t), inst.nu(a, b, t)});
    }
  }
}

// Certified runs shrink residuals geometrically:
// mu(x_n, x_{n+1}, t) >= mu(x_0, x_1, t) / k^n and
// nu(x_n, x_{n+1}, t) <= k^n * nu(x_0, x_1, t).
void check_geometric_bound(double k, SolveReport& report) {
  report.geometric_bound.checked = true;
  if (report.residuals.empty()) return;
  std::unordered_map<double, std::pair<double, double>> first;  // t -> (mu0, nu0)
  for (const auto& row : report.residuals) {
    if (row.n == 0) first[row.t] = {row.mu, row.nu};
  }
  for (const auto& row : report.residuals) {
    const auto [mu0, nu0] = first.at(row.t);
    const double kn = std::pow(k, static_cast<double>(row.n));
    const double mu_bound = std::min(1.0, mu0 / kn);
    const double nu_bound = kn * nu0;
    report.geometric_bound.max_mu_violation =
        std::max(report.geometric_bound.max_mu_violation, mu_bound - row.mu);
    report.geometric_bound.max_nu_violation =
        std::max(report.geometric_bound.max_nu_violation, row.nu - nu_bound);
  }
  report.geometric_bound.ok = report.geometric_bound.max_mu_violation <= kGeometricSlack &&
                              report.geometric_bound.max_nu_violation <= kGeometricSlack;
}

void finish_iteration(const FiniteInstance& inst, const SelfMap& map,
                      const IterationOutcome& outcome, SolveReport& report) {
  for (std::size_t idx : outcome.iterates) report.iterates.push_back(inst.label(idx));
  report.iterations_used = report.iterates.size() - 1;
  report.converged = outcome.converged;
  report.cycle = outcome.cycle;
  fill_residuals(inst, report);
  if (outcome.converged) {
    report.fixed_point = report.iterates.back();
    if (inst.profile().kind() != PairProfile::Kind::Blackbox) {
      const std::size_t fp = inst.index_of(*report.fixed_point);
      if (map.apply(fp) != fp) {
        throw InvariantViolationError("converged iterate is not a fixed point of the map");
      }
    }
  }
}

// TS-IF scan restricted to a subset of points (used by the ball procedure).
CertifyOutcome ts_if_on_subset(const FiniteInstance& inst, const SelfMap& map, double k,
                               const std::vector<std::size_t>& members) {
  if (inst.profile().kind() == PairProfile::Kind::Standard && members.size() > 1) {
    // Same analytic failure as the full-space checker.
    return is_ts_if_contractive(inst, map, k);
  }
  CertifyOutcome out;
  const std::vector<double> ts = inst.profile().t_independent()
                                     ? std::vector<double>{inst.t_grid().front()}
                                     : inst.t_grid();
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const std::size_t x = members[i], y = members[j];
      const std::size_t tx = map.apply(x), ty = map.apply(y);
      for (double t : ts) {
        if (k * inst.mu(tx, ty, t) < inst.mu(x, y, t)) {
          out.counterexample = {inst.label(x), inst.label(y), t, k * inst.mu(tx, ty, t),
                                inst.mu(x, y, t), "k*mu(T(x),T(y),t) >= mu(x,y,t)"};
          return out;
        }
        if (inst.nu(tx, ty, t) / k > inst.nu(x, y, t)) {
          out.counterexample = {inst.label(x), inst.label(y), t, inst.nu(tx, ty, t) / k,
                                inst.nu(x, y, t), "(1/k)*nu(T(x),T(y),t) <= nu(x,y,t)"};
          return out;
        }
      }
    }
  }
  ContractionCertificate cert;
  cert.kind = ContractionCertificate::Kind::TsIf;
  cert.k = k;
  cert.checked_t = inst.t_grid();
  cert.witness_mode = inst.profile().kind() == PairProfile::Kind::Blackbox
                          ? ContractionCertificate::WitnessMode::Grid
                          : ContractionCertificate::WitnessMode::Exact;
  out.certificate = std::move(cert);
  return out;
}

}  // namespace

SolveReport picard_solve(const FiniteInstance& inst, const SelfMap& map,
                         const SolverConfig& config,
                         std::optional<ContractionCertificate> certificate) {
  SolveReport report;
  report.mode = "picard";
  const std::size_t start = inst.index_of(config.x0);

  check_axiom_premise(inst, config, report);
  check_xii_premise(inst, config.strict_xii.value_or(false), report);

  if (certificate) {
    // Never trust a passed-in certificate blindly; re-validate it.
    const auto outcome = is_ts_if_contractive(inst, map, certificate->k);
    if (!outcome.certified()) {
      report.premise_checks.push_back(
          {"ts_if_certificate", false, counterexample_detail(*outcome.counterexample)});
      throw SolveHypothesisError(
          "supplied certificate is unsound: " + counterexample_detail(*outcome.counterexample),
          report);
    }
    report.certificate = *outcome.certificate;
  } else {
    const auto mc = min_contraction_constant(inst, map);
    if (!mc.contractive) {
      const std::string detail =
          mc.blocking ? counterexample_detail(*mc.blocking) : "no contraction constant";
      report.premise_checks.push_back({"ts_if_certificate", false, detail});
      throw SolveHypothesisError("map is not TS-IF contractive: " + detail, report);
    }
    const auto outcome = is_ts_if_contractive(inst, map, mc.k_star > 0.0 ? mc.k_star : 0.5);
    if (!outcome.certified()) {
      throw InvariantViolationError("minimal constant failed to certify");
    }
    report.certificate = *outcome.certificate;
  }
  report.premise_checks.push_back(
      {"ts_if_certificate", true, "k=" + format_double(report.certificate->k)});

  finish_iteration(inst, map, run_iteration(inst, map, start, config), report);
  check_geometric_bound(report.certificate->k, report);
  return report;
}

SolveReport ball_solve(const FiniteInstance& inst, const SelfMap& map, const Ball& ball, double k,
                       const SolverConfig& config) {
  if (!ball.closed) throw DomainError("ball_solve requires a closed ball");
  if (!(k > 0.0 && k < 1.0)) throw DomainError("k must lie in (0,1)");
  SolveReport report;
  report.mode = "ball";
  const std::size_t center = inst.index_of(ball.center);

  check_axiom_premise(inst, config, report);
  check_xii_premise(inst, config.strict_xii.value_or(true), report);

  const auto member_labels = ball_members(inst, ball);
  std::vector<std::size_t> members;
  for (const auto& label : member_labels) members.push_back(inst.index_of(label));

  const auto outcome = ts_if_on_subset(inst, map, k, members);
  if (!outcome.certified()) {
    report.premise_checks.push_back(
        {"ts_if_on_ball", false, counterexample_detail(*outcome.counterexample)});
    throw SolveHypothesisError("map is not TS-IF contractive on the ball: " +
                                   counterexample_detail(*outcome.counterexample),
                               report);
  }
  report.certificate = *outcome.certificate;
  report.premise_checks.push_back({"ts_if_on_ball", true, "k=" + format_double(k)});

  // Center premise of the closed-ball procedure, at the ball's own t.
  const std::size_t tc = map.apply(center);
  const double mu_lhs = k * inst.mu(center, tc, ball.t);
  const double mu_rhs = 1.0 - ball.r;
  if (!(mu_lhs > mu_rhs)) {
    const std::string detail = format_double(mu_lhs) + " ≯ " + format_double(mu_rhs);
    report.premise_checks.push_back({"ball_mu_premise", false, detail});
    throw SolveHypothesisError("premise k*mu(x,T(x),t) > 1-r fails: " + detail, report);
  }
  report.premise_checks.push_back(
      {"ball_mu_premise", true, format_double(mu_lhs) + " > " + format_double(mu_rhs)});

  const double nu_lhs = inst.nu(center, tc, ball.t) / k;
  if (!(nu_lhs < ball.r)) {
    const std::string detail = format_double(nu_lhs) + " ≮ " + format_double(ball.r);
    report.premise_checks.push_back({"ball_nu_premise", false, detail});
    throw SolveHypothesisError("premise (1/k)*nu(x,T(x),t) < r fails: " + detail, report);
  }
  report.premise_checks.push_back(
      {"ball_nu_premise", true, format_double(nu_lhs) + " < " + format_double(ball.r)});

  SolverConfig run = config;
  run.x0 = ball.center;
  finish_iteration(inst, map, run_iteration(inst, map, center, run), report);
  check_geometric_bound(k, report);

  // Every iterate must stay inside the closed ball.
  for (std::size_t n = 0; n < report.iterates.size(); ++n) {
    const std::size_t p = inst.index_of(report.iterates[n]);
    const double m = inst.mu(center, p, ball.t);
    const double v = inst.nu(center, p, ball.t);
    const bool inside = m > 1.0 - ball.r && v < ball.r;
    report.containment.push_back({n, inside, m, v});
    if (!inside) {
      throw InvariantViolationError("iterate " + report.iterates[n] +
                                    " escaped the closed ball at step " + std::to_string(n));
    }
  }
  return report;
}

SolveReport power_solve(const FiniteInstance& inst, const SelfMap& map,
                        const SolverConfig& config, std::optional<double> k) {
  if (config.m < 2) throw DomainError("power mode requires m >= 2");
  SolveReport report;
  report.mode = "power";
  const std::size_t start = inst.index_of(config.x0);

  check_axiom_premise(inst, config, report);
  check_xii_premise(inst, config.strict_xii.value_or(false), report);

  // T itself must be t-uniformly continuous.
  const auto grid = standard_epsilon_grid();
  const auto modulus = uniform_continuity_modulus(inst, map, grid);
  if (!modulus.complete()) {
    std::string detail;
    for (const auto& row : modulus.rows) {
      if (!row.r) {
        detail = "no modulus at eps=" + format_double(row.epsilon);
        break;
      }
    }
    report.premise_checks.push_back({"t_uniform_continuity", false, detail});
    throw SolveHypothesisError("map is not t-uniformly continuous: " + detail, report);
  }
  report.premise_checks.push_back({"t_uniform_continuity", true, ""});

  const SelfMap powered = map.power(config.m);
  CertifyOutcome outcome;
  if (k) {
    outcome = is_ts_if_contractive(inst, powered, *k);
  } else {
    const auto mc = min_contraction_constant(inst, powered);
    if (!mc.contractive) {
      const std::string detail =
          mc.blocking ? counterexample_detail(*mc.blocking) : "no contraction constant";
      report.premise_checks.push_back({"power_certificate", false, detail});
      throw SolveHypothesisError(
          "T^" + std::to_string(config.m) + " is not TS-IF contractive: " + detail, report);
    }
    outcome = is_ts_if_contractive(inst, powered, mc.k_star > 0.0 ? mc.k_star : 0.5);
  }
  if (!outcome.certified()) {
    const std::string detail = counterexample_detail(*outcome.counterexample);
    report.premise_checks.push_back({"power_certificate", false, detail});
    throw SolveHypothesisError(
        "T^" + std::to_string(config.m) + " is not TS-IF contractive: " + detail, report);
  }
  report.certificate = *outcome.certificate;
  report.premise_checks.push_back(
      {"power_certificate", true, "k=" + format_double(report.certificate->k)});

  finish_iteration(inst, powered, run_iteration(inst, powered, start, config), report);
  check_geometric_bound(report.certificate->k, report);

  if (report.converged && inst.profile().kind() != PairProfile::Kind::Blackbox) {
    // The B-fixed point must be fixed under T itself.
    const std::size_t y = inst.index_of(*report.fixed_point);
    const bool fixed_under_t = map.apply(y) == y;
    report.premise_checks.push_back({"t_fixedness", fixed_under_t,
                                     "T(" + *report.fixed_point + ") = " +
                                         inst.label(map.apply(y))});
    if (!fixed_under_t) {
      throw InvariantViolationError("fixed point of T^" + std::to_string(config.m) +
                                    " is not fixed under T");
    }
  }
  return report;
}

namespace {

void require_chain_params(double eta, std::span<const double> ts) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
  if (ts.empty()) throw DomainError("at least one t value is required");
  for (double t : ts) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
  }
}

bool eta_linked(const FiniteInstance& inst, std::size_t u, std::size_t v, double eta,
                std::span<const double> ts) {
  for (double t : ts) {
    if (!(inst.mu(u, v, t) > eta && inst.nu(u, v, t) < 1.0 - eta)) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> eta_components(const FiniteInstance& inst, double eta,
                                                     std::span<const double> ts) {
  const std::size_t n = inst.size();
  const auto linked = [&](std::size_t u, std::size_t v) {
    return eta_linked(inst, u, v, eta, ts);
  };
  std::vector<std::vector<std::size_t>> components;
  std::vector<bool> seen(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> component;
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      component.push_back(u);
      for (std::size_t v = 0; v < n; ++v) {
        if (!seen[v] && v != u && linked(u, v)) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

std::vector<std::vector<std::string>> component_labels(
    const FiniteInstance& inst, const std::vector<std::vector<std::size_t>>& components) {
  std::vector<std::vector<std::string>> out;
  for (const auto& component : components) {
    std::vector<std::string> labels;
    for (std::size_t i : component) labels.push_back(inst.label(i));
    out.push_back(std::move(labels));
  }
  return out;
}

}  // namespace

Chain build_chain(const FiniteInstance& inst, const std::string& a, const std::string& b,
                  double eta, std::span<const double> ts) {
  require_chain_params(eta, ts);
  const double report_t = *std::min_element(ts.begin(), ts.end());
  const std::size_t src = inst.index_of(a);
  const std::size_t dst = inst.index_of(b);

  const auto linked = [&](std::size_t u, std::size_t v) {
    return eta_linked(inst, u, v, eta, ts);
  };

  // Breadth-first search; neighbours visited in point order, so the shortest
  // chain found is deterministic.
  std::vector<std::optional<std::size_t>> parent(inst.size());
  std::deque<std::size_t> queue{src};
  std::vector<bool> seen(inst.size(), false);
  seen[src] = true;
  bool found = src == dst;
  while (!queue.empty() && !found) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < inst.size(); ++v) {
      if (seen[v] || v == u || !linked(u, v)) continue;
      seen[v] = true;
      parent[v] = u;
      if (v == dst) {
        found = true;
        break;
      }
      queue.push_back(v);
    }
  }
  if (!found) {
    throw NotChainableError("no eta-chain joins " + a + " and " + b,
                            component_labels(inst, eta_components(inst, eta, ts)));
  }

  std::vector<std::size_t> path{dst};
  while (path.back() != src) path.push_back(*parent[path.back()]);
  std::reverse(path.begin(), path.end());

  Chain chain;
  chain.eta = eta;
  chain.t = report_t;
  for (std::size_t i : path) chain.points.push_back(inst.label(i));
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    chain.links.push_back({inst.label(path[i]), inst.label(path[i + 1]),
                           inst.mu(path[i], path[i + 1], report_t),
                           inst.nu(path[i], path[i + 1], report_t)});
  }
  return chain;
}

Chain build_chain(const FiniteInstance& inst, const std::string& a, const std::string& b,
                  double eta, double t) {
  const double single[] = {t};
  return build_chain(inst, a, b, eta, std::span<const double>(single));
}

Chainability is_chainable(const FiniteInstance& inst, double eta, std::span<const double> ts) {
  require_chain_params(eta, ts);
  const auto components = eta_components(inst, eta, ts);
  return {components.size() == 1, component_labels(inst, components)};
}

Chainability is_chainable(const FiniteInstance& inst, double eta, double t) {
  const double single[] = {t};
  return is_chainable(inst, eta, std::span<const double>(single));
}

IterationTrace iterate_trace(const FiniteInstance& inst, const SelfMap& map,
                             const std::string& x0, const SolverConfig& config) {
  const auto outcome = run_iteration(inst, map, inst.index_of(x0), config);
  IterationTrace trace;
  for (std::size_t idx : outcome.iterates) trace.iterates.push_back(inst.label(idx));
  trace.converged = outcome.converged;
  trace.cycle = outcome.cycle;
  return trace;
}

SolveReport chain_solve(const FiniteInstance& inst, const SelfMap& map, double eps, double lambda,
                        const SolverConfig& config, double t) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  SolveReport report;
  report.mode = "chain";
  const std::size_t start = inst.index_of(config.x0);

  check_axiom_premise(inst, config, report);
  check_xii_premise(inst, config.strict_xii.value_or(true), report);

  const auto chainable = is_chainable(inst, eps, t);
  if (!chainable.chainable) {
    std::string detail = std::to_string(chainable.components.size()) + " components";
    report.premise_checks.push_back({"chainable", false, detail});
    throw SolveHypothesisError(
        "instance is not eps-chainable at t=" + format_double(t) + ": " + detail, report);
  }
  report.premise_checks.push_back({"chainable", true, ""});

  const double single_t[] = {t};
  const auto outcome = is_locally_contractive(inst, map, eps, lambda, single_t);
  if (!outcome.certified()) {
    const std::string detail = counterexample_detail(*outcome.counterexample);
    report.premise_checks.push_back({"locally_contractive", false, detail});
    throw SolveHypothesisError(
        "map is not (eps,lambda)-uniformly locally contractive: " + detail, report);
  }
  report.certificate = *outcome.certificate;
  report.premise_checks.push_back({"locally_contractive", true,
                                   "eps=" + format_double(eps) +
                                       ", lambda=" + format_double(lambda)});

  finish_iteration(inst, map, run_iteration(inst, map, start, config), report);

  // Step bounds for m >= 1: every T-step pair must stay eps-near. The
  // m = 0 pair is not derivable when chainability is known only at this
  // single t, so it is reported in the residuals but not asserted.
  const auto check_step = [&](std::size_t m, std::size_t xm, std::size_t xm1) {
    const double mu = inst.mu(xm, xm1, t);
    const double nu = inst.nu(xm, xm1, t);
    const bool ok = mu > eps && nu < 1.0 - eps;
    report.step_invariant.push_back({m, ok, mu, nu});
    if (!ok) {
      throw InvariantViolationError("step bound mu > eps, nu < 1-eps fails at m=" +
                                    std::to_string(m));
    }
  };
  std::vector<std::size_t> idx;
  for (const auto& label : report.iterates) idx.push_back(inst.index_of(label));
  for (std::size_t m = 1; m + 1 < idx.size(); ++m) check_step(m, idx[m], idx[m + 1]);
  if (report.converged && idx.size() >= 2) {
    // The stabilized pair (x_m, T(x_m)) with equal entries.
    check_step(idx.size() - 1, idx.back(), map.apply(idx.back()));
  }
  return report;
}

}  // namespace ifp
