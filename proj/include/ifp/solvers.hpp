#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ifp/analysis.hpp"
#include "ifp/maps.hpp"
#include "ifp/space.hpp"

namespace ifp {

struct SolverConfig {
  std::string x0;
  double tol = 1e-9;
  std::size_t max_iter = 1000;
  std::size_t m = 1;  // power-map order
  // Require an idempotent operation pair; defaults per mode when unset
  // (the ball and chain procedures fold constant values, so they default
  // to true).
  std::optional<bool> strict_xii;
};

struct PremiseCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ResidualRow {
  std::size_t n = 0;
  double t = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

struct ContainmentRow {
  std::size_t n = 0;
  bool inside = false;
  double mu = 0.0;
  double nu = 0.0;
};

struct StepInvariantRow {
  std::size_t m = 0;  // step index, starting at 1
  bool ok = false;
  double mu = 0.0;
  double nu = 0.0;
};

struct GeometricBoundCheck {
  bool checked = false;
  bool ok = true;
  double max_mu_violation = 0.0;
  double max_nu_violation = 0.0;
};

struct SolveReport {
  std::string mode;  // picard | ball | power | chain
  std::vector<std::string> iterates;
  std::vector<ResidualRow> residuals;  // one row per (n, t)
  bool converged = false;
  std::optional<std::string> fixed_point;
  std::size_t iterations_used = 0;
  std::vector<PremiseCheck> premise_checks;
  std::optional<ContractionCertificate> certificate;
  GeometricBoundCheck geometric_bound;
  std::vector<ContainmentRow> containment;      // ball mode
  std::vector<StepInvariantRow> step_invariant;  // chain mode
  std::optional<std::vector<std::string>> cycle;
};

// Raised when a solve premise fails; carries the report built so far, with
// the failing premise recorded, so callers can still render it.
struct SolveHypothesisError : HypothesisError {
  SolveHypothesisError(const std::string& message, SolveReport partial)
      : HypothesisError(message), report(std::move(partial)) {}
  SolveReport report;
};

// Picard iteration under a TS-IF contraction certificate (computed via
// min_contraction_constant when not supplied). Finite-profile instances stop
// on exact iterate equality; blackbox profiles stop on (mu, nu) residuals
// within tol across the grid.
SolveReport picard_solve(const FiniteInstance& instance, const SelfMap& map,
                         const SolverConfig& config,
                         std::optional<ContractionCertificate> certificate = std::nullopt);

// Contraction on a closed ball: requires the TS-IF condition on the ball's
// member set plus k*mu(x,Tx,t) > 1-r and (1/k)*nu(x,Tx,t) < r at the ball's
// center x; iterates from the center and asserts every iterate stays inside.
SolveReport ball_solve(const FiniteInstance& instance, const SelfMap& map, const Ball& ball,
                       double k, const SolverConfig& config);

// Power-map reduction: T must be t-uniformly continuous and B = T^m TS-IF
// contractive. Runs Picard on B and verifies the result is fixed under T.
SolveReport power_solve(const FiniteInstance& instance, const SelfMap& map,
                        const SolverConfig& config,
                        std::optional<double> k = std::nullopt);

struct ChainLink {
  std::string from;
  std::string to;
  double mu = 0.0;
  double nu = 0.0;
};

struct Chain {
  double eta = 0.0;
  double t = 0.0;
  std::vector<std::string> points;
  std::vector<ChainLink> links;
};

// Raised when two points cannot be joined in the eta-graph; carries the
// graph's connected components.
struct NotChainableError : Error {
  NotChainableError(std::string message, std::vector<std::vector<std::string>> components)
      : Error(std::move(message)), components(std::move(components)) {}
  std::vector<std::vector<std::string>> components;
};

// Shortest eta-chain between two points (breadth-first over the graph whose
// edges satisfy mu > eta and nu < 1-eta at the given t). The span overloads
// quantify the link inequalities over every supplied t (all-grid mode); the
// reported link values use the smallest one, where the bounds are tightest.
Chain build_chain(const FiniteInstance& instance, const std::string& a, const std::string& b,
                  double eta, double t);
Chain build_chain(const FiniteInstance& instance, const std::string& a, const std::string& b,
                  double eta, std::span<const double> ts);

struct Chainability {
  bool chainable = false;
  std::vector<std::vector<std::string>> components;
};

Chainability is_chainable(const FiniteInstance& instance, double eta, double t);
Chainability is_chainable(const FiniteInstance& instance, double eta,
                          std::span<const double> ts);

// Fixed-point procedure for (eps, lambda)-uniformly locally contractive maps
// on an eps-chainable instance. Asserts the step bounds
// mu(T^m x, T^{m+1} x, t) > eps and nu < 1-eps for every step m >= 1.
SolveReport chain_solve(const FiniteInstance& instance, const SelfMap& map, double eps,
                        double lambda, const SolverConfig& config, double t);

struct IterationTrace {
  std::vector<std::string> iterates;
  bool converged = false;
  std::optional<std::vector<std::string>> cycle;
};

// Raw iteration without premise checks: diagnostics for uncertified maps.
// Reports a cycle when an iterate repeats without being fixed.
IterationTrace iterate_trace(const FiniteInstance& instance, const SelfMap& map,
                             const std::string& x0, const SolverConfig& config);

}  // namespace ifp
