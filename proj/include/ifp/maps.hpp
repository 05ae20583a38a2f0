#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifp/space.hpp"

namespace ifp {

// A total self-map on an instance's point set, stored as an image table.
class SelfMap {
 public:
  SelfMap(std::string name, std::vector<std::size_t> images);

  static SelfMap from_labels(const FiniteInstance& instance,
                             const std::map<std::string, std::string>& images,
                             std::string name = "T");
  static SelfMap constant(const FiniteInstance& instance, const std::string& target,
                          std::string name = "const");
  static SelfMap identity(const FiniteInstance& instance);

  const std::string& name() const { return name_; }
  std::size_t size() const { return images_.size(); }
  std::size_t apply(std::size_t x) const;
  std::string apply_label(const FiniteInstance& instance, const std::string& x) const;
  const std::vector<std::size_t>& images() const { return images_; }

  // The m-fold composition of the map with itself.
  SelfMap power(std::size_t m) const;

 private:
  std::string name_;
  std::vector<std::size_t> images_;
};

struct ContractionCertificate {
  enum class Kind { TsIf, Local };
  enum class WitnessMode { Exact, Grid };

  Kind kind = Kind::TsIf;
  double k = 0.0;       // ts-if constant
  double eps = 0.0;     // local
  double lambda = 0.0;  // local
  std::vector<double> checked_t;
  WitnessMode witness_mode = WitnessMode::Exact;
};

std::string to_string(ContractionCertificate::Kind kind);
std::string to_string(ContractionCertificate::WitnessMode mode);

struct ContractionCounterexample {
  std::string x;
  std::string y;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string clause;  // which inequality failed, human-readable
};

struct CertifyOutcome {
  std::optional<ContractionCertificate> certificate;
  std::optional<ContractionCounterexample> counterexample;

  bool certified() const { return certificate.has_value(); }
};

// Checks k*mu(Tx,Ty,t) >= mu(x,y,t) and (1/k)*nu(Tx,Ty,t) <= nu(x,y,t) over
// all distinct pairs. t handling is exact per profile: constant/exponential
// values do not depend on t; on standard profiles the mu condition fails for
// every map at large t and the checker reports that analytically instead of
// trusting a finite grid; blackbox profiles scan the t_grid.
CertifyOutcome is_ts_if_contractive(const FiniteInstance& instance, const SelfMap& map, double k);

struct MinConstantResult {
  bool contractive = false;
  double k_star = 0.0;  // meaningful when contractive
  std::optional<ContractionCounterexample> blocking;
};

// The smallest constant k* certifying the map, or "not contractive" with the
// blocking pair. The nu ratio treats 0/0 as 0.
MinConstantResult min_contraction_constant(const FiniteInstance& instance, const SelfMap& map);

// (eps, lambda)-uniform local contractivity: the contraction inequalities are
// required only on distinct pairs whose premise fires. Checked at the given t
// values (the instance grid by default; t-independent profiles need one).
CertifyOutcome is_locally_contractive(const FiniteInstance& instance, const SelfMap& map,
                                      double eps, double lambda, std::span<const double> ts);
CertifyOutcome is_locally_contractive(const FiniteInstance& instance, const SelfMap& map,
                                      double eps, double lambda);

// Oracle: exact fixed-point set by table scan, in point order.
std::vector<std::string> fixed_points(const FiniteInstance& instance, const SelfMap& map);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// Oracle: all total self-maps certified at constant k, in lexicographic order
// of their image tuples. Throws ResourceError when |X|^|X| exceeds the cap.
std::vector<SelfMap> enumerate_contractive_maps(const FiniteInstance& instance, double k,
                                                std::size_t cap = kDefaultEnumerationCap);

}  // namespace ifp
