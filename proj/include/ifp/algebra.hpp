#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifp/errors.hpp"

namespace ifp {

// Square table of operation values on a uniform mesh of [0,1]; values between
// mesh points come from bilinear interpolation, so a table always describes a
// continuous operation.
class MeshTable {
 public:
  MeshTable(double step, std::vector<std::vector<double>> rows);

  double step() const { return step_; }
  std::size_t side() const { return side_; }
  double value_at(std::size_t i, std::size_t j) const { return values_[i * side_ + j]; }
  const std::vector<double>& values() const { return values_; }

  // Bilinear evaluation; a, b must lie in [0,1].
  double operator()(double a, double b) const;

 private:
  double step_ = 0.0;
  std::size_t side_ = 0;
  std::vector<double> values_;  // row-major
};

enum class TNormKind { Minimum, Product, Lukasiewicz, CustomTable };
enum class TConormKind { Maximum, ProbabilisticSum, Lukasiewicz, CustomTable };

std::string to_string(TNormKind kind);
std::string to_string(TConormKind kind);
TNormKind tnorm_kind_from_string(const std::string& s);
TConormKind tconorm_kind_from_string(const std::string& s);

// A t-norm: commutative, associative, monotone binary operation on [0,1]
// with identity 1. Built-in kinds are closed-form; custom kinds interpolate
// a mesh table. The idempotent flag is derived at construction.
class TNormSpec {
 public:
  static TNormSpec minimum();
  static TNormSpec product();
  static TNormSpec lukasiewicz();
  static TNormSpec custom(MeshTable table);

  TNormKind kind() const { return kind_; }
  bool idempotent() const { return idempotent_; }
  const std::optional<MeshTable>& table() const { return table_; }

  /// Applies the operation; arguments must lie in [0,1].
  double apply(double a, double b) const;

  /// Left fold of apply over a nonempty list.
  double fold(std::span<const double> values) const;

 private:
  TNormSpec(TNormKind kind, std::optional<MeshTable> table, bool idempotent);

  TNormKind kind_;
  std::optional<MeshTable> table_;
  bool idempotent_;
};

// Dual operation: identity 0.
class TConormSpec {
 public:
  static TConormSpec maximum();
  static TConormSpec probabilistic_sum();
  static TConormSpec lukasiewicz();
  static TConormSpec custom(MeshTable table);

  TConormKind kind() const { return kind_; }
  bool idempotent() const { return idempotent_; }
  const std::optional<MeshTable>& table() const { return table_; }

  double apply(double a, double b) const;
  double fold(std::span<const double> values) const;

 private:
  TConormSpec(TConormKind kind, std::optional<MeshTable> table, bool idempotent);

  TConormKind kind_;
  std::optional<MeshTable> table_;
  bool idempotent_;
};

// One law checked on a mesh. `witness` holds the mesh points of the first
// violation found by an ascending scan; empty when the law passed.
struct LawCheck {
  std::string law;
  bool passed = true;
  std::vector<double> witness;
};

struct OperationAxiomReport {
  std::vector<LawCheck> laws;  // boundary, commutativity, associativity, monotonicity
  bool idempotent = false;
  std::optional<double> idempotent_witness;  // first mesh point with op(a,a) != a

  bool all_passed() const;
  const LawCheck& law(const std::string& name) const;
};

// Scans the four operation laws on a uniform mesh with the given step
// (step must lie in (0, 0.25]). Built-in kinds are compared exactly except
// associativity, which tolerates accumulated rounding; custom tables use tol.
OperationAxiomReport check_operation_axioms(const TNormSpec& spec, double mesh_step, double tol);
OperationAxiomReport check_operation_axioms(const TConormSpec& spec, double mesh_step, double tol);

struct ResidualWitness {
  double r3 = 0.0;
  double r4 = 0.0;
};

// For r1 > r2 in (0,1), the smallest grid values r3, r4 in (0,1) with
// tnorm(r1, r3) > r2 and tconorm(r4, r2) < r1. Throws WitnessNotFoundError
// when the grid holds no qualifying value; callers refine the grid.
ResidualWitness find_residual_witness(const TNormSpec& tnorm, const TConormSpec& tconorm,
                                      double r1, double r2, double grid_step);

struct IdempotentWitness {
  double r6 = 0.0;
  double r7 = 0.0;
};

// For r5 in (0,1), the smallest grid values r6, r7 in (0,1) with
// tnorm(r6, r6) >= r5 and tconorm(r7, r7) <= r5.
IdempotentWitness find_idempotent_witness(const TNormSpec& tnorm, const TConormSpec& tconorm,
                                          double r5, double grid_step);

}  // namespace ifp
