#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ifp/algebra.hpp"
#include "ifp/errors.hpp"

namespace ifp {

class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), v_(n * n, fill) {}
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }
  bool is_symmetric() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

using PairEvaluator = std::function<double(std::size_t, std::size_t, double)>;

// Per-pair nearness/non-nearness data. Constant and exponential profiles do
// not depend on t; standard profiles use mu = t/(t+d), nu = d/(t+d); blackbox
// profiles defer to caller-supplied evaluators.
class PairProfile {
 public:
  enum class Kind { Constant, Standard, Exponential, Blackbox };

  static PairProfile constant(SquareMatrix mu, SquareMatrix nu);
  static PairProfile standard(SquareMatrix dist);
  static PairProfile exponential(double base, SquareMatrix dist);
  static PairProfile blackbox(std::size_t n, PairEvaluator mu, PairEvaluator nu);

  Kind kind() const { return kind_; }
  std::size_t size() const { return size_; }
  bool t_independent() const { return kind_ == Kind::Constant || kind_ == Kind::Exponential; }

  double mu(std::size_t x, std::size_t y, double t) const;
  double nu(std::size_t x, std::size_t y, double t) const;

  const SquareMatrix& dist() const;      // standard/exponential only
  double base() const { return base_; }  // exponential only
  const SquareMatrix& mu_table() const;  // constant only
  const SquareMatrix& nu_table() const;  // constant only

 private:
  PairProfile() = default;

  Kind kind_ = Kind::Constant;
  std::size_t size_ = 0;
  SquareMatrix mu_;
  SquareMatrix nu_;
  SquareMatrix dist_;
  double base_ = 0.0;
  PairEvaluator mu_fn_;
  PairEvaluator nu_fn_;
};

std::string to_string(PairProfile::Kind kind);

// A finite intuitionistic fuzzy metric space: labelled points, a pair
// profile, the (t-norm, t-conorm) pair and the t values at which universally
// quantified conditions are checked. Immutable after construction.
class FiniteInstance {
 public:
  FiniteInstance(std::vector<std::string> points, PairProfile profile, TNormSpec tnorm,
                 TConormSpec tconorm, std::vector<double> t_grid, bool strict = false);

  const std::vector<std::string>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const std::string& label(std::size_t i) const { return points_[i]; }
  std::size_t index_of(const std::string& label) const;
  bool has_point(const std::string& label) const;

  const PairProfile& profile() const { return profile_; }
  const TNormSpec& tnorm() const { return tnorm_; }
  const TConormSpec& tconorm() const { return tconorm_; }
  const std::vector<double>& t_grid() const { return t_grid_; }

  // Degree of nearness / non-nearness; t must be positive.
  double mu(std::size_t x, std::size_t y, double t) const;
  double nu(std::size_t x, std::size_t y, double t) const;
  double mu(const std::string& x, const std::string& y, double t) const;
  double nu(const std::string& x, const std::string& y, double t) const;

 private:
  std::vector<std::string> points_;
  PairProfile profile_;
  TNormSpec tnorm_;
  TConormSpec tconorm_;
  std::vector<double> t_grid_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Ball {
  std::string center;
  double r = 0.0;  // radius in (0,1)
  double t = 0.0;  // parameter, positive
  bool closed = true;
};

enum class AxiomVerdict { Pass, SampledPass, Fail, Skipped };
std::string to_string(AxiomVerdict verdict);

struct AxiomWitness {
  std::string axiom;
  std::vector<std::string> points;
  std::vector<double> ts;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AxiomCheckRow {
  std::string axiom;
  AxiomVerdict verdict = AxiomVerdict::Pass;
};

struct AxiomReport {
  std::vector<AxiomCheckRow> checks;
  std::vector<AxiomWitness> witnesses;  // one per failing axiom

  bool all_passed() const;
  AxiomVerdict verdict(const std::string& axiom) const;
  const AxiomWitness* witness(const std::string& axiom) const;
};

// Checks the space axioms on the instance: pointwise conditions over
// points^2 x t_grid, the two triangle conditions over points^3 and all
// (s,t) grid pairs, monotonicity of mu/nu across consecutive grid values
// (reported as sampled-pass), and idempotency of the operation pair when
// check_xii is set (skipped otherwise). The original condition "nu > 0" is
// checked as nu < 1 and labelled "vii*"; the nu-triangle uses the nu-nu form.
AxiomReport check_ifm_axioms(const FiniteInstance& instance, double tol, bool check_xii = false);

struct MetricScheme {
  enum class Kind { Standard, Exponential };
  Kind kind = Kind::Standard;
  double base = 0.5;

  static MetricScheme standard() { return {Kind::Standard, 0.0}; }
  static MetricScheme exponential(double base) { return {Kind::Exponential, base}; }
};

// Builds an instance from a classical metric; dist must be symmetric with a
// zero diagonal, nonnegative entries and satisfy the triangle inequality.
FiniteInstance induced_from_metric(std::vector<std::string> labels, const SquareMatrix& dist,
                                   const MetricScheme& scheme, TNormSpec tnorm,
                                   TConormSpec tconorm, std::vector<double> t_grid);

// Points y with mu(center, y, t) > 1-r and nu(center, y, t) < r, in point
// order. Open and closed balls share this membership predicate.
std::vector<std::string> ball_members(const FiniteInstance& instance, const Ball& ball);

struct ClosedSubsetVerdict {
  bool closed = true;
  std::string rationale;
};

ClosedSubsetVerdict is_closed_subset(const FiniteInstance& instance,
                                     std::span<const std::string> subset);

struct TriangleCheck {
  bool ok = false;
  double mu_lhs = 0.0;
  double mu_rhs = 0.0;
  double nu_lhs = 0.0;
  double nu_rhs = 0.0;
};

// n-fold triangle inequality along a path: mu(first, last, t) must dominate
// the t-norm fold of the link values at t/n, dually for nu.
TriangleCheck grand_triangle_check(const FiniteInstance& instance,
                                   std::span<const std::string> path, double t, double tol);

}  // namespace ifp
