#include "ifp/maps.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ifp/numfmt.hpp"

namespace ifp {

SelfMap::SelfMap(std::string name, std::vector<std::size_t> images)
    : name_(std::move(name)), images_(std::move(images)) {
  if (images_.empty()) throw ConstructionError("self-map needs at least one point");
  for (std::size_t img : images_) {
    if (img >= images_.size()) throw ConstructionError("self-map image out of range");
  }
}

SelfMap SelfMap::from_labels(const FiniteInstance& instance,
                             const std::map<std::string, std::string>& images,
                             std::string name) {
  if (images.size() != instance.size()) {
    throw ConstructionError("map must assign exactly one image to every point");
  }
  std::vector<std::size_t> table(instance.size());
  for (const auto& [from, to] : images) {
    table[instance.index_of(from)] = instance.index_of(to);
  }
  return SelfMap(std::move(name), std::move(table));
}

SelfMap SelfMap::constant(const FiniteInstance& instance, const std::string& target,
                          std::string name) {
  return SelfMap(std::move(name),
                 std::vector<std::size_t>(instance.size(), instance.index_of(target)));
}

SelfMap SelfMap::identity(const FiniteInstance& instance) {
  std::vector<std::size_t> table(instance.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = i;
  return SelfMap("identity", std::move(table));
}

std::size_t SelfMap::apply(std::size_t x) const {
  if (x >= images_.size()) throw DomainError("point index out of range");
  return images_[x];
}

std::string SelfMap::apply_label(const FiniteInstance& instance, const std::string& x) const {
  return instance.label(apply(instance.index_of(x)));
}

SelfMap SelfMap::power(std::size_t m) const {
  if (m == 0) throw DomainError("map power must be at least 1");
  std::vector<std::size_t> table(images_.size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    std::size_t r = x;
    for (std::size_t i = 0; i < m; ++i) r = images_[r];
    table[x] = r;
  }
  return SelfMap(name_ + "^" + std::to_string(m), std::move(table));
}

std::string to_string(ContractionCertificate::Kind kind) {
  return kind == ContractionCertificate::Kind::TsIf ? "ts-if" : "local";
}

std::string to_string(ContractionCertificate::WitnessMode mode) {
  return mode == ContractionCertificate::WitnessMode::Exact ? "exact" : "grid";
}

namespace {

void require_map_size(const FiniteInstance& instance, const SelfMap& map) {
  if (map.size() != instance.size()) {
    throw DomainError("map size does not match the instance");
  }
}

// On a standard profile mu(x,y,t) -> 1 as t grows, so k*mu(Tx,Ty,t) < mu(x,y,t)
// eventually holds for every k < 1 and every distinct pair. Produce a concrete
// failing t by doubling from the top of the grid.
ContractionCounterexample standard_profile_counterexample(const FiniteInstance& inst,
                                                          const SelfMap& map, double k) {
  const std::size_t x = 0, y = 1;
  double t = std::max(1.0, inst.t_grid().back());
  while (k * inst.mu(map.apply(x), map.apply(y), t) >= inst.mu(x, y, t)) t *= 2.0;
  ContractionCounterexample ce;
  ce.x = inst.label(x);
  ce.y = inst.label(y);
  ce.t = t;
  ce.lhs = k * inst.mu(map.apply(x), map.apply(y), t);
  ce.rhs = inst.mu(x, y, t);
  ce.clause = "k*mu(T(x),T(y),t) >= mu(x,y,t) fails for large t (standard profile)";
  return ce;
}

std::vector<double> checked_t_values(const FiniteInstance& inst) {
  if (inst.profile().t_independent()) return {inst.t_grid().front()};
  return inst.t_grid();
}

}  // namespace

CertifyOutcome is_ts_if_contractive(const FiniteInstance& inst, const SelfMap& map, double k) {
  if (!(k > 0.0 && k < 1.0)) throw DomainError("k must lie in (0,1)");
  require_map_size(inst, map);

  CertifyOutcome out;
  const bool exact = inst.profile().kind() != PairProfile::Kind::Blackbox;

  if (inst.profile().kind() == PairProfile::Kind::Standard && inst.size() > 1) {
    out.counterexample = standard_profile_counterexample(inst, map, k);
    return out;
  }

  for (std::size_t x = 0; x < inst.size(); ++x) {
    for (std::size_t y = x + 1; y < inst.size(); ++y) {
      const std::size_t tx = map.apply(x), ty = map.apply(y);
      for (double t : checked_t_values(inst)) {
        const double mu_lhs = k * inst.mu(tx, ty, t);
        const double mu_rhs = inst.mu(x, y, t);
        if (mu_lhs < mu_rhs) {
          out.counterexample = {inst.label(x), inst.label(y), t, mu_lhs, mu_rhs,
                                "k*mu(T(x),T(y),t) >= mu(x,y,t)"};
          return out;
        }
        const double nu_lhs = inst.nu(tx, ty, t) / k;
        const double nu_rhs = inst.nu(x, y, t);
        if (nu_lhs > nu_rhs) {
          out.counterexample = {inst.label(x), inst.label(y), t, nu_lhs, nu_rhs,
                                "(1/k)*nu(T(x),T(y),t) <= nu(x,y,t)"};
          return out;
        }
      }
    }
  }

  ContractionCertificate cert;
  cert.kind = ContractionCertificate::Kind::TsIf;
  cert.k = k;
  cert.checked_t = inst.t_grid();
  cert.witness_mode = exact ? ContractionCertificate::WitnessMode::Exact
                            : ContractionCertificate::WitnessMode::Grid;
  out.certificate = std::move(cert);
  return out;
}

MinConstantResult min_contraction_constant(const FiniteInstance& inst, const SelfMap& map) {
  require_map_size(inst, map);
  MinConstantResult out;

  if (inst.profile().kind() == PairProfile::Kind::Standard && inst.size() > 1) {
    // sup_t mu(x,y,t) = 1 forces the mu ratio to 1, so no k < 1 exists.
    out.contractive = false;
    out.k_star = 1.0;
    ContractionCounterexample ce;
    ce.x = inst.label(0);
    ce.y = inst.label(1);
    ce.t = inst.t_grid().back();
    ce.lhs = 1.0;
    ce.rhs = 1.0;
    ce.clause = "standard profile: sup_t mu(x,y,t)/mu(T(x),T(y),t) = 1";
    out.blocking = std::move(ce);
    return out;
  }

  double k_star = 0.0;
  for (std::size_t x = 0; x < inst.size(); ++x) {
    for (std::size_t y = x + 1; y < inst.size(); ++y) {
      const std::size_t tx = map.apply(x), ty = map.apply(y);
      for (double t : checked_t_values(inst)) {
        const double mu_ratio = inst.mu(x, y, t) / inst.mu(tx, ty, t);
        const double nu_img = inst.nu(tx, ty, t);
        const double nu_src = inst.nu(x, y, t);
        double nu_ratio = 0.0;
        if (nu_img != 0.0) {
          if (nu_src == 0.0) {
            out.contractive = false;
            out.k_star = 1.0;
            out.blocking = {inst.label(x), inst.label(y), t, nu_img, nu_src,
                            "nu(x,y,t) = 0 but nu(T(x),T(y),t) > 0: no finite ratio"};
            return out;
          }
          nu_ratio = nu_img / nu_src;
        }
        const double ratio = std::max(mu_ratio, nu_ratio);
        if (ratio >= 1.0) {
          out.contractive = false;
          out.k_star = ratio;
          out.blocking = {inst.label(x), inst.label(y), t, ratio, 1.0,
                          "pair ratio reaches 1: not contractive"};
          return out;
        }
        k_star = std::max(k_star, ratio);
      }
    }
  }
  out.contractive = true;
  out.k_star = k_star;
  return out;
}

CertifyOutcome is_locally_contractive(const FiniteInstance& inst, const SelfMap& map, double eps,
                                      double lambda, std::span<const double> ts) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
  if (ts.empty()) throw DomainError("at least one t value is required");
  for (double t : ts) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
  }
  require_map_size(inst, map);

  CertifyOutcome out;
  std::vector<double> checked(ts.begin(), ts.end());
  if (inst.profile().t_independent()) checked = {ts.front()};

  for (std::size_t x = 0; x < inst.size(); ++x) {
    for (std::size_t y = x + 1; y < inst.size(); ++y) {
      const std::size_t tx = map.apply(x), ty = map.apply(y);
      for (double t : checked) {
        const double mu_src = inst.mu(x, y, t);
        if (mu_src > eps) {
          const double lhs = lambda * inst.mu(tx, ty, t);
          if (!(lhs > mu_src)) {
            out.counterexample = {inst.label(x), inst.label(y), t, lhs, mu_src,
                                  "mu(x,y,t) > eps but lambda*mu(T(x),T(y),t) <= mu(x,y,t)"};
            return out;
          }
        }
        const double nu_src = inst.nu(x, y, t);
        if (nu_src < 1.0 - eps) {
          const double lhs = inst.nu(tx, ty, t) / lambda;
          if (!(lhs < nu_src)) {
            out.counterexample = {inst.label(x), inst.label(y), t, lhs, nu_src,
                                  "nu(x,y,t) < 1-eps but (1/lambda)*nu(T(x),T(y),t) >= nu(x,y,t)"};
            return out;
          }
        }
      }
    }
  }

  ContractionCertificate cert;
  cert.kind = ContractionCertificate::Kind::Local;
  cert.eps = eps;
  cert.lambda = lambda;
  cert.checked_t = std::vector<double>(ts.begin(), ts.end());
  cert.witness_mode = inst.profile().t_independent()
                          ? ContractionCertificate::WitnessMode::Exact
                          : ContractionCertificate::WitnessMode::Grid;
  out.certificate = std::move(cert);
  return out;
}

CertifyOutcome is_locally_contractive(const FiniteInstance& inst, const SelfMap& map, double eps,
                                      double lambda) {
  return is_locally_contractive(inst, map, eps, lambda, inst.t_grid());
}

std::vector<std::string> fixed_points(const FiniteInstance& inst, const SelfMap& map) {
  require_map_size(inst, map);
  std::vector<std::string> out;
  for (std::size_t x = 0; x < inst.size(); ++x) {
    if (map.apply(x) == x) out.push_back(inst.label(x));
  }
  return out;
}

std::vector<SelfMap> enumerate_contractive_maps(const FiniteInstance& inst, double k,
                                                std::size_t cap) {
  const std::size_t n = inst.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > cap / n) throw ResourceError("enumeration cap exceeded: |X|^|X| > cap");
    total *= n;
  }
  if (total > cap) throw ResourceError("enumeration cap exceeded: |X|^|X| > cap");

  std::vector<SelfMap> certified;
  std::vector<std::size_t> images(n, 0);
  for (std::size_t count = 0; count < total; ++count) {
    SelfMap candidate("T", images);
    if (is_ts_if_contractive(inst, candidate, k).certified()) {
      certified.push_back(std::move(candidate));
    }
    // Advance the image tuple; the last position varies fastest, which
    // yields lexicographic order of the tuples.
    for (std::size_t pos = n; pos-- > 0;) {
      if (++images[pos] < n) break;
      images[pos] = 0;
    }
  }
  return certified;
}

}  // namespace ifp
