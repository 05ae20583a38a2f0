#include "ifp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ifp/numfmt.hpp"

namespace ifp {

namespace {

std::vector<std::size_t> to_indices(const FiniteInstance& inst,
                                    std::span<const std::string> labels) {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& label : labels) idx.push_back(inst.index_of(label));
  return idx;
}

// First index from which the label sequence is constant.
std::size_t stabilization_index(std::span<const std::size_t> seq) {
  std::size_t s = seq.size() - 1;
  while (s > 0 && seq[s - 1] == seq[s]) --s;
  return s;
}

}  // namespace

SequenceTrace trace_to_target(const FiniteInstance& inst, std::span<const std::string> sequence,
                              const std::string& target) {
  const auto idx = to_indices(inst, sequence);
  const std::size_t tgt = inst.index_of(target);
  SequenceTrace trace;
  for (std::size_t n = 0; n < idx.size(); ++n) {
    for (double t : inst.t_grid()) {
      trace.rows.push_back({n, t, inst.mu(idx[n], tgt, t), inst.nu(idx[n], tgt, t)});
    }
  }
  return trace;
}

SequenceTrace trace_consecutive(const FiniteInstance& inst, std::span<const std::string> sequence,
                                std::size_t p) {
  if (p == 0) throw DomainError("offset p must be positive");
  const auto idx = to_indices(inst, sequence);
  SequenceTrace trace;
  for (std::size_t n = 0; n + p < idx.size(); ++n) {
    for (double t : inst.t_grid()) {
      trace.rows.push_back({n, t, inst.mu(idx[n], idx[n + p], t), inst.nu(idx[n], idx[n + p], t)});
    }
  }
  return trace;
}

std::string trace_to_csv(const SequenceTrace& trace) {
  std::ostringstream out;
  out << "n,t,mu,nu\n";
  for (const auto& row : trace.rows) {
    out << row.n << ',' << format_double(row.t) << ',' << format_double(row.mu) << ','
        << format_double(row.nu) << '\n';
  }
  return out.str();
}

CauchyVerdict cauchy_check(const FiniteInstance& inst, std::span<const std::string> sequence,
                           double tol, std::size_t p_max) {
  if (sequence.size() < 2) throw DomainError("sequence needs at least two entries");
  if (p_max < 1) throw DomainError("p_max must be at least 1");
  const auto idx = to_indices(inst, sequence);
  const std::size_t last = idx.size() - 1;

  CauchyVerdict verdict;
  verdict.stabilization_index = stabilization_index(idx);

  const auto scan = [&](std::size_t from) -> std::optional<CauchyFailure> {
    for (std::size_t n = from; n < last; ++n) {
      for (std::size_t p = 1; p <= p_max && n + p <= last; ++p) {
        for (double t : inst.t_grid()) {
          const double m = inst.mu(idx[n], idx[n + p], t);
          const double v = inst.nu(idx[n], idx[n + p], t);
          if (1.0 - m > tol || v > tol) return CauchyFailure{n, p, t, m, v};
        }
      }
    }
    return std::nullopt;
  };

  // A length-one tail certifies nothing; demand at least two stabilized
  // entries plus clean residuals from the stabilization point on.
  if (verdict.stabilization_index + 1 <= last) {
    const auto failure = scan(verdict.stabilization_index);
    verdict.cauchy_like = !failure.has_value();
    verdict.witness = failure;
  } else {
    verdict.cauchy_like = false;
  }
  if (!verdict.cauchy_like && !verdict.witness) verdict.witness = scan(0);
  return verdict;
}

ConvergenceVerdict convergence_check(const FiniteInstance& inst,
                                     std::span<const std::string> sequence,
                                     const std::string& target, double tol) {
  if (sequence.empty()) throw DomainError("sequence must be nonempty");
  const auto idx = to_indices(inst, sequence);
  const std::size_t tgt = inst.index_of(target);

  const auto near_target = [&](std::size_t n) -> std::optional<ConvergenceFailure> {
    for (double t : inst.t_grid()) {
      const double m = inst.mu(idx[n], tgt, t);
      const double v = inst.nu(idx[n], tgt, t);
      if (1.0 - m > tol || v > tol) return ConvergenceFailure{n, t, m, v};
    }
    return std::nullopt;
  };

  ConvergenceVerdict verdict;
  std::size_t tail = idx.size();
  std::optional<ConvergenceFailure> last_failure;
  for (std::size_t n = idx.size(); n-- > 0;) {
    if (auto failure = near_target(n)) {
      last_failure = failure;
      break;
    }
    tail = n;
  }
  verdict.tail_index = tail;
  verdict.converges = tail + 2 <= idx.size();
  if (!verdict.converges) verdict.witness = last_failure;
  return verdict;
}

TransportVerdict limit_transport_check(const FiniteInstance& inst,
                                       std::span<const std::string> xs,
                                       std::span<const std::string> ys, const std::string& x,
                                       const std::string& y, double tol) {
  if (xs.size() != ys.size()) throw PreconditionError("sequences must have equal length");
  const auto cx = convergence_check(inst, xs, x, tol);
  if (!cx.converges) throw PreconditionError("xs does not converge to " + x);
  const auto cy = convergence_check(inst, ys, y, tol);
  if (!cy.converges) throw PreconditionError("ys does not converge to " + y);

  const auto xi = to_indices(inst, xs);
  const auto yi = to_indices(inst, ys);
  const std::size_t tx = inst.index_of(x);
  const std::size_t ty = inst.index_of(y);

  TransportVerdict verdict;
  verdict.decisive = inst.profile().kind() != PairProfile::Kind::Blackbox;
  verdict.tail_index = std::max(cx.tail_index, cy.tail_index);
  for (std::size_t n = verdict.tail_index; n < xi.size(); ++n) {
    for (double t : inst.t_grid()) {
      verdict.max_mu_deviation = std::max(
          verdict.max_mu_deviation, std::fabs(inst.mu(xi[n], yi[n], t) - inst.mu(tx, ty, t)));
      verdict.max_nu_deviation = std::max(
          verdict.max_nu_deviation, std::fabs(inst.nu(xi[n], yi[n], t) - inst.nu(tx, ty, t)));
    }
  }
  verdict.ok = verdict.max_mu_deviation <= tol && verdict.max_nu_deviation <= tol;
  return verdict;
}

ConvergenceVerdict sequential_continuity_check(const FiniteInstance& inst, const SelfMap& map,
                                               std::span<const std::string> xs,
                                               const std::string& x, double tol) {
  const auto cx = convergence_check(inst, xs, x, tol);
  if (!cx.converges) throw PreconditionError("xs does not converge to " + x);

  const auto grid = standard_epsilon_grid();
  const auto table = uniform_continuity_modulus(inst, map, grid);
  if (!table.complete()) {
    for (const auto& row : table.rows) {
      if (!row.r) {
        throw PreconditionError("map is not t-uniformly continuous at eps = " +
                                format_double(row.epsilon));
      }
    }
  }

  std::vector<std::string> images;
  images.reserve(xs.size());
  for (const auto& label : xs) images.push_back(map.apply_label(inst, label));
  return convergence_check(inst, images, map.apply_label(inst, x), tol);
}

bool ModulusTable::complete() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ModulusRow& row) { return row.r.has_value(); });
}

ModulusTable uniform_continuity_modulus(const FiniteInstance& inst, const SelfMap& map,
                                        std::span<const double> epsilons) {
  if (map.size() != inst.size()) throw DomainError("map size does not match the instance");
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilons must lie in (0,1)");
  }

  const auto qualifies = [&](double eps, double r) {
    for (std::size_t x = 0; x < inst.size(); ++x) {
      for (std::size_t y = x; y < inst.size(); ++y) {
        for (double t : inst.t_grid()) {
          if (inst.mu(x, y, t) >= 1.0 - r && inst.nu(x, y, t) <= r) {
            const std::size_t tx = map.apply(x), ty = map.apply(y);
            if (!(inst.mu(tx, ty, t) >= 1.0 - eps && inst.nu(tx, ty, t) <= eps)) return false;
          }
        }
      }
    }
    return true;
  };

  ModulusTable table;
  for (double eps : epsilons) {
    ModulusRow row{eps, std::nullopt};
    for (int cent = 49; cent >= 1; --cent) {
      const double r = cent / 100.0;
      if (qualifies(eps, r)) {
        row.r = r;
        break;
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

std::vector<double> standard_epsilon_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(k / 20.0);
  return grid;
}

}  // namespace ifp
