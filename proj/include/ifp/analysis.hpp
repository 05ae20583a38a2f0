#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifp/maps.hpp"
#include "ifp/space.hpp"

namespace ifp {

struct SequenceTraceRow {
  std::size_t n = 0;
  double t = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

struct SequenceTrace {
  std::vector<SequenceTraceRow> rows;
};

// Per-step values against a fixed target point, per t in the grid.
SequenceTrace trace_to_target(const FiniteInstance& instance,
                              std::span<const std::string> sequence, const std::string& target);

// Per-step values between x_n and x_{n+p}.
SequenceTrace trace_consecutive(const FiniteInstance& instance,
                                std::span<const std::string> sequence, std::size_t p = 1);

std::string trace_to_csv(const SequenceTrace& trace);

struct CauchyFailure {
  std::size_t n = 0;
  std::size_t p = 0;
  double t = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

struct CauchyVerdict {
  bool cauchy_like = false;
  // First index from which the sequence is literally constant.
  std::size_t stabilization_index = 0;
  std::optional<CauchyFailure> witness;  // first failing (n, p, t) in scan order
};

// A finite trace counts as cauchy-like when its constant tail has at least
// two entries and every pair (x_n, x_{n+p}) with n at or past the
// stabilization index stays within tol of (mu, nu) = (1, 0) for p <= p_max
// and every grid t. On finite instances this matches eventual constancy.
CauchyVerdict cauchy_check(const FiniteInstance& instance, std::span<const std::string> sequence,
                           double tol, std::size_t p_max);

struct ConvergenceFailure {
  std::size_t n = 0;
  double t = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

struct ConvergenceVerdict {
  bool converges = false;
  std::size_t tail_index = 0;  // first index of the qualifying tail
  std::optional<ConvergenceFailure> witness;
};

// Converges iff some tail of length >= 2 keeps 1 - mu(x_n, target, t) <= tol
// and nu(x_n, target, t) <= tol for every grid t.
ConvergenceVerdict convergence_check(const FiniteInstance& instance,
                                     std::span<const std::string> sequence,
                                     const std::string& target, double tol);

struct TransportVerdict {
  bool ok = false;
  // Blackbox profiles are only sampled, so their tails carry no verdict.
  bool decisive = true;
  double max_mu_deviation = 0.0;
  double max_nu_deviation = 0.0;
  std::size_t tail_index = 0;
};

// Checks mu(x_n, y_n, t) -> mu(x, y, t) (and the nu analogue) over the tail
// where both sequences have converged. Requires both precondition
// convergences; on finite instances the tail deviation is exactly zero.
TransportVerdict limit_transport_check(const FiniteInstance& instance,
                                       std::span<const std::string> xs,
                                       std::span<const std::string> ys, const std::string& x,
                                       const std::string& y, double tol);

// Image-sequence convergence T(x_n) -> T(x) for a t-uniformly continuous map.
ConvergenceVerdict sequential_continuity_check(const FiniteInstance& instance, const SelfMap& map,
                                               std::span<const std::string> xs,
                                               const std::string& x, double tol);

struct ModulusRow {
  double epsilon = 0.0;
  std::optional<double> r;  // largest qualifying grid r, if any
};

struct ModulusTable {
  std::vector<ModulusRow> rows;
  bool complete() const;
};

// For each eps: the largest r from the descending grid {0.49, ..., 0.01} such
// that mu(x,y,t) >= 1-r and nu(x,y,t) <= r imply mu(Tx,Ty,t) >= 1-eps and
// nu(Tx,Ty,t) <= eps for every pair and every grid t. A missing r signals
// failure of t-uniform continuity at that eps.
ModulusTable uniform_continuity_modulus(const FiniteInstance& instance, const SelfMap& map,
                                        std::span<const double> epsilons);

// {0.05, 0.10, ..., 0.95}
std::vector<double> standard_epsilon_grid();

}  // namespace ifp
