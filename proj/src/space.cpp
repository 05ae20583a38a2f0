#include "ifp/space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "ifp/numfmt.hpp"

namespace ifp {

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  SquareMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ConstructionError("matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

bool SquareMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (at(i, j) != at(j, i)) return false;
    }
  }
  return true;
}

namespace {

void require_structure(const SquareMatrix& m, double diagonal, const char* what) {
  if (!m.is_symmetric()) throw ConstructionError(std::string(what) + " matrix is not symmetric");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.at(i, i) != diagonal) {
      throw ConstructionError(std::string(what) + " matrix diagonal must be exactly " +
                              format_double(diagonal));
    }
  }
}

void require_dist(const SquareMatrix& dist) {
  require_structure(dist, 0.0, "dist");
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t j = 0; j < dist.size(); ++j) {
      if (!(dist.at(i, j) >= 0.0)) throw ConstructionError("dist matrix has a negative entry");
    }
  }
}

}  // namespace

PairProfile PairProfile::constant(SquareMatrix mu, SquareMatrix nu) {
  if (mu.size() != nu.size()) throw ConstructionError("mu and nu matrices differ in size");
  require_structure(mu, 1.0, "mu");
  require_structure(nu, 0.0, "nu");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (!(mu.at(i, j) >= 0.0 && mu.at(i, j) <= 1.0) ||
          !(nu.at(i, j) >= 0.0 && nu.at(i, j) <= 1.0)) {
        throw ConstructionError("profile values must lie in [0,1]");
      }
    }
  }
  PairProfile p;
  p.kind_ = Kind::Constant;
  p.size_ = mu.size();
  p.mu_ = std::move(mu);
  p.nu_ = std::move(nu);
  return p;
}

PairProfile PairProfile::standard(SquareMatrix dist) {
  require_dist(dist);
  PairProfile p;
  p.kind_ = Kind::Standard;
  p.size_ = dist.size();
  p.dist_ = std::move(dist);
  return p;
}

PairProfile PairProfile::exponential(double base, SquareMatrix dist) {
  if (!(base > 0.0 && base < 1.0)) throw ConstructionError("exponential base must lie in (0,1)");
  require_dist(dist);
  PairProfile p;
  p.kind_ = Kind::Exponential;
  p.size_ = dist.size();
  p.base_ = base;
  p.dist_ = std::move(dist);
  return p;
}

PairProfile PairProfile::blackbox(std::size_t n, PairEvaluator mu, PairEvaluator nu) {
  if (n == 0) throw ConstructionError("blackbox profile needs at least one point");
  if (!mu || !nu) throw ConstructionError("blackbox profile needs both evaluators");
  PairProfile p;
  p.kind_ = Kind::Blackbox;
  p.size_ = n;
  p.mu_fn_ = std::move(mu);
  p.nu_fn_ = std::move(nu);
  return p;
}

double PairProfile::mu(std::size_t x, std::size_t y, double t) const {
  switch (kind_) {
    case Kind::Constant: return mu_.at(x, y);
    case Kind::Standard: return t / (t + dist_.at(x, y));
    case Kind::Exponential: return std::pow(base_, dist_.at(x, y));
    case Kind::Blackbox: return mu_fn_(x, y, t);
  }
  return 0.0;
}

double PairProfile::nu(std::size_t x, std::size_t y, double t) const {
  switch (kind_) {
    case Kind::Constant: return nu_.at(x, y);
    case Kind::Standard: return dist_.at(x, y) / (t + dist_.at(x, y));
    case Kind::Exponential: return 1.0 - std::pow(base_, dist_.at(x, y));
    case Kind::Blackbox: return nu_fn_(x, y, t);
  }
  return 0.0;
}

const SquareMatrix& PairProfile::dist() const {
  if (kind_ != Kind::Standard && kind_ != Kind::Exponential) {
    throw DomainError("profile has no distance matrix");
  }
  return dist_;
}

const SquareMatrix& PairProfile::mu_table() const {
  if (kind_ != Kind::Constant) throw DomainError("profile has no mu table");
  return mu_;
}

const SquareMatrix& PairProfile::nu_table() const {
  if (kind_ != Kind::Constant) throw DomainError("profile has no nu table");
  return nu_;
}

std::string to_string(PairProfile::Kind kind) {
  switch (kind) {
    case PairProfile::Kind::Constant: return "constant";
    case PairProfile::Kind::Standard: return "standard";
    case PairProfile::Kind::Exponential: return "exponential";
    case PairProfile::Kind::Blackbox: return "blackbox";
  }
  return "?";
}

FiniteInstance::FiniteInstance(std::vector<std::string> points, PairProfile profile,
                               TNormSpec tnorm, TConormSpec tconorm, std::vector<double> t_grid,
                               bool strict)
    : points_(std::move(points)),
      profile_(std::move(profile)),
      tnorm_(std::move(tnorm)),
      tconorm_(std::move(tconorm)),
      t_grid_(std::move(t_grid)) {
  if (points_.empty()) throw ConstructionError("instance needs at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].empty()) throw ConstructionError("point labels must be nonempty");
    if (!index_.emplace(points_[i], i).second) {
      throw ConstructionError("duplicate point label: " + points_[i]);
    }
  }
  if (profile_.size() != points_.size()) {
    throw ConstructionError("profile size does not match the point count");
  }
  if (t_grid_.empty()) throw ConstructionError("t_grid must be nonempty");
  double prev = 0.0;
  for (double t : t_grid_) {
    if (!(t > prev)) throw ConstructionError("t_grid must be strictly positive and ascending");
    prev = t;
  }
  if (strict) {
    const auto report = check_ifm_axioms(*this, 1e-9);
    if (!report.all_passed()) {
      std::string axiom = "?";
      for (const auto& row : report.checks) {
        if (row.verdict == AxiomVerdict::Fail) {
          axiom = row.axiom;
          break;
        }
      }
      throw ConstructionError("strict instance fails axiom (" + axiom + ")");
    }
  }
}

std::size_t FiniteInstance::index_of(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) throw DomainError("unknown point label: " + label);
  return it->second;
}

bool FiniteInstance::has_point(const std::string& label) const {
  return index_.find(label) != index_.end();
}

double FiniteInstance::mu(std::size_t x, std::size_t y, double t) const {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  return profile_.mu(x, y, t);
}

double FiniteInstance::nu(std::size_t x, std::size_t y, double t) const {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  return profile_.nu(x, y, t);
}

double FiniteInstance::mu(const std::string& x, const std::string& y, double t) const {
  return mu(index_of(x), index_of(y), t);
}

double FiniteInstance::nu(const std::string& x, const std::string& y, double t) const {
  return nu(index_of(x), index_of(y), t);
}

std::string to_string(AxiomVerdict verdict) {
  switch (verdict) {
    case AxiomVerdict::Pass: return "pass";
    case AxiomVerdict::SampledPass: return "sampled-pass";
    case AxiomVerdict::Fail: return "fail";
    case AxiomVerdict::Skipped: return "skipped";
  }
  return "?";
}

bool AxiomReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const AxiomCheckRow& row) {
    return row.verdict == AxiomVerdict::Fail;
  });
}

AxiomVerdict AxiomReport::verdict(const std::string& axiom) const {
  for (const auto& row : checks) {
    if (row.axiom == axiom) return row.verdict;
  }
  throw DomainError("no such axiom row: " + axiom);
}

const AxiomWitness* AxiomReport::witness(const std::string& axiom) const {
  for (const auto& w : witnesses) {
    if (w.axiom == axiom) return &w;
  }
  return nullptr;
}

namespace {

class AxiomScan {
 public:
  AxiomScan(const FiniteInstance& inst, double tol, AxiomReport& report)
      : inst_(inst), tol_(tol), report_(report) {}

  // Runs `body` which may record a failure; records the verdict row.
  template <typename Body>
  void axiom(const std::string& id, AxiomVerdict pass_verdict, Body&& body) {
    failed_ = false;
    current_ = id;
    body();
    report_.checks.push_back({id, failed_ ? AxiomVerdict::Fail : pass_verdict});
  }

  void skip(const std::string& id) { report_.checks.push_back({id, AxiomVerdict::Skipped}); }

  void fail(std::vector<std::size_t> pts, std::vector<double> ts, double lhs, double rhs) {
    if (failed_) return;
    failed_ = true;
    AxiomWitness w;
    w.axiom = current_;
    for (std::size_t p : pts) w.points.push_back(inst_.label(p));
    w.ts = std::move(ts);
    w.lhs = lhs;
    w.rhs = rhs;
    report_.witnesses.push_back(std::move(w));
  }

  bool failed() const { return failed_; }
  double tol() const { return tol_; }

 private:
  const FiniteInstance& inst_;
  double tol_;
  AxiomReport& report_;
  bool failed_ = false;
  std::string current_;
};

}  // namespace

AxiomReport check_ifm_axioms(const FiniteInstance& inst, double tol, bool check_xii) {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  const std::size_t n = inst.size();
  const auto& grid = inst.t_grid();

  AxiomReport report;
  AxiomScan scan(inst, tol, report);

  // (i) mu + nu <= 1
  scan.axiom("i", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y)
        for (double t : grid) {
          const double s = inst.mu(x, y, t) + inst.nu(x, y, t);
          if (s > 1.0 + tol) return scan.fail({x, y}, {t}, s, 1.0);
        }
  });

  // (ii) mu > 0
  scan.axiom("ii", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y)
        for (double t : grid) {
          const double m = inst.mu(x, y, t);
          if (!(m > 0.0)) return scan.fail({x, y}, {t}, m, 0.0);
        }
  });

  // (iii) mu = 1 iff x = y
  scan.axiom("iii", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y)
        for (double t : grid) {
          const double m = inst.mu(x, y, t);
          if (x == y && std::fabs(m - 1.0) > tol) return scan.fail({x, y}, {t}, m, 1.0);
          if (x != y && m >= 1.0) return scan.fail({x, y}, {t}, m, 1.0);
        }
  });

  // (iv) mu symmetric
  scan.axiom("iv", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (double t : grid) {
          const double a = inst.mu(x, y, t);
          const double b = inst.mu(y, x, t);
          if (std::fabs(a - b) > tol) return scan.fail({x, y}, {t}, a, b);
        }
  });

  // (v) mu(x,y,s) * mu(y,z,t) <= mu(x,z,s+t)
  scan.axiom("v", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          for (double s : grid)
            for (double t : grid) {
              const double lhs = inst.mu(x, z, s + t);
              const double rhs = inst.tnorm().apply(inst.mu(x, y, s), inst.mu(y, z, t));
              if (lhs < rhs - tol) return scan.fail({x, y, z}, {s, t}, lhs, rhs);
            }
  });

  // (vi) mu(x,y,.) into (0,1], non-decreasing across the sampled grid
  scan.axiom("vi", AxiomVerdict::SampledPass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y) {
        for (double t : grid) {
          const double m = inst.mu(x, y, t);
          if (m > 1.0 + tol) return scan.fail({x, y}, {t}, m, 1.0);
        }
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
          const double lo = inst.mu(x, y, grid[k]);
          const double hi = inst.mu(x, y, grid[k + 1]);
          if (hi < lo - tol) return scan.fail({x, y}, {grid[k], grid[k + 1]}, hi, lo);
        }
      }
  });

  // (vii*) nu < 1; the stated "nu > 0" contradicts (viii), so the standard
  // codomain reading is checked instead.
  scan.axiom("vii*", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y)
        for (double t : grid) {
          const double v = inst.nu(x, y, t);
          if (!(v < 1.0)) return scan.fail({x, y}, {t}, v, 1.0);
        }
  });

  // (viii) nu = 0 iff x = y
  scan.axiom("viii", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y)
        for (double t : grid) {
          const double v = inst.nu(x, y, t);
          if (x == y && std::fabs(v) > tol) return scan.fail({x, y}, {t}, v, 0.0);
          if (x != y && v <= 0.0) return scan.fail({x, y}, {t}, v, 0.0);
        }
  });

  // (ix) nu symmetric
  scan.axiom("ix", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (double t : grid) {
          const double a = inst.nu(x, y, t);
          const double b = inst.nu(y, x, t);
          if (std::fabs(a - b) > tol) return scan.fail({x, y}, {t}, a, b);
        }
  });

  // (x) nu(x,y,s) <> nu(y,z,t) >= nu(x,z,s+t); the printed mu in the middle
  // term is treated as a typo for nu.
  scan.axiom("x", AxiomVerdict::Pass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          for (double s : grid)
            for (double t : grid) {
              const double lhs = inst.tconorm().apply(inst.nu(x, y, s), inst.nu(y, z, t));
              const double rhs = inst.nu(x, z, s + t);
              if (lhs < rhs - tol) return scan.fail({x, y, z}, {s, t}, lhs, rhs);
            }
  });

  // (xi) nu(x,y,.) into [0,1), non-increasing across the sampled grid
  scan.axiom("xi", AxiomVerdict::SampledPass, [&] {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y) {
        for (double t : grid) {
          const double v = inst.nu(x, y, t);
          if (v < -tol) return scan.fail({x, y}, {t}, v, 0.0);
        }
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
          const double lo = inst.nu(x, y, grid[k]);
          const double hi = inst.nu(x, y, grid[k + 1]);
          if (hi > lo + tol) return scan.fail({x, y}, {grid[k], grid[k + 1]}, hi, lo);
        }
      }
  });

  // (xii) idempotency of the operation pair, delegated to the operation flags.
  if (check_xii) {
    scan.axiom("xii", AxiomVerdict::Pass, [&] {
      if (inst.tnorm().idempotent() && inst.tconorm().idempotent()) return;
      // Witness a concrete non-idempotent value.
      for (int k = 1; k < 10; ++k) {
        const double a = k / 10.0;
        const double tn = inst.tnorm().apply(a, a);
        const double tc = inst.tconorm().apply(a, a);
        if (tn != a) return scan.fail({}, {}, tn, a);
        if (tc != a) return scan.fail({}, {}, tc, a);
      }
      return scan.fail({}, {}, 0.0, 0.0);
    });
  } else {
    scan.skip("xii");
  }

  // Keep the rows in roman-numeral order i..xii.
  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const AxiomCheckRow& a, const AxiomCheckRow& b) {
                     static const std::vector<std::string> order = {
                         "i", "ii", "iii", "iv", "v", "vi", "vii*", "viii", "ix", "x", "xi", "xii"};
                     const auto pos = [&](const std::string& id) {
                       return std::find(order.begin(), order.end(), id) - order.begin();
                     };
                     return pos(a.axiom) < pos(b.axiom);
                   });
  return report;
}

FiniteInstance induced_from_metric(std::vector<std::string> labels, const SquareMatrix& dist,
                                   const MetricScheme& scheme, TNormSpec tnorm,
                                   TConormSpec tconorm, std::vector<double> t_grid) {
  const std::size_t n = labels.size();
  if (dist.size() != n) throw ConstructionError("dist size does not match the label count");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist.at(i, i) != 0.0) {
      throw ConstructionError("metric axiom violated: d(x,x) = 0 fails at " + labels[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!(dist.at(i, j) >= 0.0)) {
        throw ConstructionError("metric axiom violated: nonnegativity fails at (" + labels[i] +
                                "," + labels[j] + ")");
      }
      if (dist.at(i, j) != dist.at(j, i)) {
        throw ConstructionError("metric axiom violated: symmetry fails at (" + labels[i] + "," +
                                labels[j] + ")");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (dist.at(i, k) > dist.at(i, j) + dist.at(j, k) + 1e-12) {
          throw ConstructionError("metric axiom violated: triangle inequality fails at (" +
                                  labels[i] + "," + labels[j] + "," + labels[k] + ")");
        }
      }

  PairProfile profile = scheme.kind == MetricScheme::Kind::Standard
                            ? PairProfile::standard(dist)
                            : PairProfile::exponential(scheme.base, dist);
  return FiniteInstance(std::move(labels), std::move(profile), std::move(tnorm),
                        std::move(tconorm), std::move(t_grid));
}

std::vector<std::string> ball_members(const FiniteInstance& instance, const Ball& ball) {
  if (!(ball.r > 0.0 && ball.r < 1.0)) throw DomainError("ball radius must lie in (0,1)");
  if (!(ball.t > 0.0)) throw DomainError("ball parameter t must be positive");
  const std::size_t c = instance.index_of(ball.center);
  std::vector<std::string> members;
  for (std::size_t y = 0; y < instance.size(); ++y) {
    if (instance.mu(c, y, ball.t) > 1.0 - ball.r && instance.nu(c, y, ball.t) < ball.r) {
      members.push_back(instance.label(y));
    }
  }
  return members;
}

ClosedSubsetVerdict is_closed_subset(const FiniteInstance& instance,
                                     std::span<const std::string> subset) {
  for (const auto& label : subset) instance.index_of(label);
  // Off the diagonal mu < 1, so a convergent sequence in a finite instance is
  // eventually constant and its limit stays in the subset.
  return {true, "finite instance: convergence implies eventual constancy"};
}

TriangleCheck grand_triangle_check(const FiniteInstance& instance,
                                   std::span<const std::string> path, double t, double tol) {
  if (path.size() < 2) throw DomainError("path needs at least two points");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  std::vector<std::size_t> idx;
  idx.reserve(path.size());
  for (const auto& label : path) idx.push_back(instance.index_of(label));

  const std::size_t links = idx.size() - 1;
  const double tn = t / static_cast<double>(links);
  std::vector<double> mus, nus;
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    mus.push_back(instance.mu(idx[i], idx[i + 1], tn));
    nus.push_back(instance.nu(idx[i], idx[i + 1], tn));
  }

  TriangleCheck out;
  out.mu_lhs = instance.mu(idx.front(), idx.back(), t);
  out.mu_rhs = instance.tnorm().fold(mus);
  out.nu_lhs = instance.nu(idx.front(), idx.back(), t);
  out.nu_rhs = instance.tconorm().fold(nus);
  out.ok = out.mu_lhs >= out.mu_rhs - tol && out.nu_lhs <= out.nu_rhs + tol;
  return out;
}

}  // namespace ifp
