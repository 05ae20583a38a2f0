#include "ifp/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

namespace ifp {

namespace {

void require_unit_closed(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0,1]");
  }
}

void require_unit_open(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw DomainError(std::string(name) + " must lie in (0,1)");
  }
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Derived at construction: true iff op(a,a) = a on every mesh point.
bool table_idempotent(const MeshTable& table) {
  for (std::size_t i = 0; i < table.side(); ++i) {
    double a = static_cast<double>(i) * table.step();
    if (i + 1 == table.side()) a = 1.0;
    if (std::fabs(table.value_at(i, i) - a) > 1e-12) return false;
  }
  return true;
}

}  // namespace

MeshTable::MeshTable(double step, std::vector<std::vector<double>> rows) : step_(step) {
  if (!(step > 0.0 && step < 1.0)) {
    throw ConstructionError("mesh step must lie in (0,1)");
  }
  side_ = rows.size();
  if (side_ < 2) throw ConstructionError("custom table needs at least two mesh rows");
  if (std::fabs((static_cast<double>(side_) - 1.0) * step - 1.0) > 1e-9) {
    throw ConstructionError("mesh step does not tile [0,1] for the given table side");
  }
  values_.reserve(side_ * side_);
  for (const auto& row : rows) {
    if (row.size() != side_) throw ConstructionError("custom table is not square");
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConstructionError("custom table value outside [0,1]");
      values_.push_back(v);
    }
  }
}

double MeshTable::operator()(double a, double b) const {
  const double ua = a / step_;
  const double ub = b / step_;
  const std::size_t i = std::min(static_cast<std::size_t>(ua), side_ - 2);
  const std::size_t j = std::min(static_cast<std::size_t>(ub), side_ - 2);
  const double fa = ua - static_cast<double>(i);
  const double fb = ub - static_cast<double>(j);
  const double v00 = value_at(i, j);
  const double v10 = value_at(i + 1, j);
  const double v01 = value_at(i, j + 1);
  const double v11 = value_at(i + 1, j + 1);
  return (1.0 - fa) * ((1.0 - fb) * v00 + fb * v01) + fa * ((1.0 - fb) * v10 + fb * v11);
}

std::string to_string(TNormKind kind) {
  switch (kind) {
    case TNormKind::Minimum: return "minimum";
    case TNormKind::Product: return "product";
    case TNormKind::Lukasiewicz: return "lukasiewicz";
    case TNormKind::CustomTable: return "custom-table";
  }
  return "?";
}

std::string to_string(TConormKind kind) {
  switch (kind) {
    case TConormKind::Maximum: return "maximum";
    case TConormKind::ProbabilisticSum: return "probabilistic-sum";
    case TConormKind::Lukasiewicz: return "lukasiewicz";
    case TConormKind::CustomTable: return "custom-table";
  }
  return "?";
}

TNormKind tnorm_kind_from_string(const std::string& s) {
  if (s == "minimum") return TNormKind::Minimum;
  if (s == "product") return TNormKind::Product;
  if (s == "lukasiewicz") return TNormKind::Lukasiewicz;
  if (s == "custom-table") return TNormKind::CustomTable;
  throw ConstructionError("unknown t-norm kind: " + s);
}

TConormKind tconorm_kind_from_string(const std::string& s) {
  if (s == "maximum") return TConormKind::Maximum;
  if (s == "probabilistic-sum") return TConormKind::ProbabilisticSum;
  if (s == "lukasiewicz") return TConormKind::Lukasiewicz;
  if (s == "custom-table") return TConormKind::CustomTable;
  throw ConstructionError("unknown t-conorm kind: " + s);
}

TNormSpec::TNormSpec(TNormKind kind, std::optional<MeshTable> table, bool idempotent)
    : kind_(kind), table_(std::move(table)), idempotent_(idempotent) {}

TNormSpec TNormSpec::minimum() { return TNormSpec(TNormKind::Minimum, std::nullopt, true); }
TNormSpec TNormSpec::product() { return TNormSpec(TNormKind::Product, std::nullopt, false); }
TNormSpec TNormSpec::lukasiewicz() { return TNormSpec(TNormKind::Lukasiewicz, std::nullopt, false); }
TNormSpec TNormSpec::custom(MeshTable table) {
  const bool idem = table_idempotent(table);
  return TNormSpec(TNormKind::CustomTable, std::move(table), idem);
}

double TNormSpec::apply(double a, double b) const {
  require_unit_closed(a, "a");
  require_unit_closed(b, "b");
  switch (kind_) {
    case TNormKind::Minimum:
      return std::min(a, b);
    case TNormKind::Product:
      return a * b;
    case TNormKind::Lukasiewicz:
      // Identity handled first so a*1 = a holds bit-exactly.
      if (b == 1.0) return a;
      if (a == 1.0) return b;
      return std::max(0.0, (a + b) - 1.0);
    case TNormKind::CustomTable:
      return clamp_unit((*table_)(a, b));
  }
  return 0.0;
}

double TNormSpec::fold(std::span<const double> values) const {
  if (values.empty()) throw DomainError("fold over empty list");
  double acc = values[0];
  require_unit_closed(acc, "value");
  for (std::size_t i = 1; i < values.size(); ++i) acc = apply(acc, values[i]);
  return acc;
}

TConormSpec::TConormSpec(TConormKind kind, std::optional<MeshTable> table, bool idempotent)
    : kind_(kind), table_(std::move(table)), idempotent_(idempotent) {}

TConormSpec TConormSpec::maximum() { return TConormSpec(TConormKind::Maximum, std::nullopt, true); }
TConormSpec TConormSpec::probabilistic_sum() {
  return TConormSpec(TConormKind::ProbabilisticSum, std::nullopt, false);
}
TConormSpec TConormSpec::lukasiewicz() {
  return TConormSpec(TConormKind::Lukasiewicz, std::nullopt, false);
}
TConormSpec TConormSpec::custom(MeshTable table) {
  const bool idem = table_idempotent(table);
  return TConormSpec(TConormKind::CustomTable, std::move(table), idem);
}

double TConormSpec::apply(double a, double b) const {
  require_unit_closed(a, "a");
  require_unit_closed(b, "b");
  switch (kind_) {
    case TConormKind::Maximum:
      return std::max(a, b);
    case TConormKind::ProbabilisticSum:
      // Annihilator handled first; the rounded a+b-ab form dips below 1 there.
      if (a == 1.0 || b == 1.0) return 1.0;
      return clamp_unit((a + b) - a * b);
    case TConormKind::Lukasiewicz:
      return std::min(1.0, a + b);
    case TConormKind::CustomTable:
      return clamp_unit((*table_)(a, b));
  }
  return 0.0;
}

double TConormSpec::fold(std::span<const double> values) const {
  if (values.empty()) throw DomainError("fold over empty list");
  double acc = values[0];
  require_unit_closed(acc, "value");
  for (std::size_t i = 1; i < values.size(); ++i) acc = apply(acc, values[i]);
  return acc;
}

bool OperationAxiomReport::all_passed() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawCheck& c) { return c.passed; });
}

const LawCheck& OperationAxiomReport::law(const std::string& name) const {
  for (const auto& c : laws) {
    if (c.law == name) return c;
  }
  throw DomainError("no such law: " + name);
}

namespace {

std::vector<double> build_mesh(double step) {
  if (!(step > 0.0 && step <= 0.25)) throw DomainError("mesh step must lie in (0, 0.25]");
  std::vector<double> mesh;
  for (std::size_t k = 0;; ++k) {
    const double v = static_cast<double>(k) * step;
    if (v > 1.0 - 1e-12) break;
    mesh.push_back(v);
  }
  mesh.push_back(1.0);
  return mesh;
}

// Associativity of the closed-form arithmetic kinds accumulates up to a few
// ulps on a mesh, so "exact" comparison keeps that much slack.
constexpr double kBuiltinAssocSlack = 1e-14;

OperationAxiomReport check_axioms_impl(const std::function<double(double, double)>& op,
                                       double identity, bool closed_form, double mesh_step,
                                       double tol) {
  const auto mesh = build_mesh(mesh_step);
  const double eq_tol = closed_form ? 0.0 : tol;
  const double assoc_tol = closed_form ? kBuiltinAssocSlack : tol;

  OperationAxiomReport report;

  LawCheck boundary{"boundary", true, {}};
  for (double a : mesh) {
    if (std::fabs(op(a, identity) - a) > eq_tol) {
      boundary.passed = false;
      boundary.witness = {a, identity};
      break;
    }
  }
  report.laws.push_back(std::move(boundary));

  LawCheck comm{"commutativity", true, {}};
  for (std::size_t i = 0; i < mesh.size() && comm.passed; ++i) {
    for (std::size_t j = i + 1; j < mesh.size(); ++j) {
      if (std::fabs(op(mesh[i], mesh[j]) - op(mesh[j], mesh[i])) > eq_tol) {
        comm.passed = false;
        comm.witness = {mesh[i], mesh[j]};
        break;
      }
    }
  }
  report.laws.push_back(std::move(comm));

  LawCheck assoc{"associativity", true, {}};
  for (double a : mesh) {
    for (double b : mesh) {
      for (double c : mesh) {
        if (std::fabs(op(a, op(b, c)) - op(op(a, b), c)) > assoc_tol) {
          assoc.passed = false;
          assoc.witness = {a, b, c};
          break;
        }
      }
      if (!assoc.passed) break;
    }
    if (!assoc.passed) break;
  }
  report.laws.push_back(std::move(assoc));

  // Monotone in each argument on consecutive mesh points; with commutativity
  // this covers the joint two-argument law.
  LawCheck mono{"monotonicity", true, {}};
  for (double b : mesh) {
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      if (op(mesh[i], b) > op(mesh[i + 1], b) + eq_tol) {
        mono.passed = false;
        mono.witness = {mesh[i], mesh[i + 1], b};
        break;
      }
      if (op(b, mesh[i]) > op(b, mesh[i + 1]) + eq_tol) {
        mono.passed = false;
        mono.witness = {b, mesh[i], mesh[i + 1]};
        break;
      }
    }
    if (!mono.passed) break;
  }
  report.laws.push_back(std::move(mono));

  report.idempotent = true;
  for (double a : mesh) {
    if (std::fabs(op(a, a) - a) > (closed_form ? 0.0 : tol)) {
      report.idempotent = false;
      report.idempotent_witness = a;
      break;
    }
  }
  return report;
}

}  // namespace

OperationAxiomReport check_operation_axioms(const TNormSpec& spec, double mesh_step, double tol) {
  return check_axioms_impl([&spec](double a, double b) { return spec.apply(a, b); }, 1.0,
                           spec.kind() != TNormKind::CustomTable, mesh_step, tol);
}

OperationAxiomReport check_operation_axioms(const TConormSpec& spec, double mesh_step, double tol) {
  return check_axioms_impl([&spec](double a, double b) { return spec.apply(a, b); }, 0.0,
                           spec.kind() != TConormKind::CustomTable, mesh_step, tol);
}

namespace {

// Grid points k*step restricted to (0,1), ascending.
template <typename Pred>
std::optional<double> first_grid_value(double step, Pred&& pred) {
  if (!(step > 0.0 && step < 1.0)) throw DomainError("grid step must lie in (0,1)");
  for (std::size_t k = 1;; ++k) {
    const double v = static_cast<double>(k) * step;
    if (v >= 1.0 - 1e-15) return std::nullopt;
    if (pred(v)) return v;
  }
}

}  // namespace

ResidualWitness find_residual_witness(const TNormSpec& tnorm, const TConormSpec& tconorm,
                                      double r1, double r2, double grid_step) {
  require_unit_open(r1, "r1");
  require_unit_open(r2, "r2");
  if (!(r1 > r2)) throw DomainError("r1 must exceed r2");

  const auto r3 = first_grid_value(grid_step, [&](double v) { return tnorm.apply(r1, v) > r2; });
  const auto r4 = first_grid_value(grid_step, [&](double v) { return tconorm.apply(v, r2) < r1; });
  if (!r3 || !r4) {
    throw WitnessNotFoundError(std::string("no witness on the grid for ") +
                               (!r3 ? "r3 (t-norm residual)" : "r4 (t-conorm residual)"));
  }
  return {*r3, *r4};
}

IdempotentWitness find_idempotent_witness(const TNormSpec& tnorm, const TConormSpec& tconorm,
                                          double r5, double grid_step) {
  require_unit_open(r5, "r5");

  const auto r6 = first_grid_value(grid_step, [&](double v) { return tnorm.apply(v, v) >= r5; });
  const auto r7 = first_grid_value(grid_step, [&](double v) { return tconorm.apply(v, v) <= r5; });
  if (!r6 || !r7) {
    throw WitnessNotFoundError(std::string("no witness on the grid for ") +
                               (!r6 ? "r6 (t-norm square)" : "r7 (t-conorm square)"));
  }
  return {*r6, *r7};
}

}  // namespace ifp
