#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ifp/solvers.hpp"
#include "support/test_instances.hpp"

using namespace ifp;
namespace tst = ifp::testing;

namespace {

SolverConfig config_from(const std::string& x0) {
  SolverConfig config;
  config.x0 = x0;
  return config;
}

SelfMap u4_cascade(const FiniteInstance& u4) {
  return SelfMap::from_labels(u4, {{"a", "a"}, {"b", "a"}, {"c", "b"}, {"d", "b"}}, "cascade");
}

}  // namespace

TEST_CASE("picard iteration on certified maps") {
  const auto u3 = tst::u3();
  const auto const_a = SelfMap::constant(u3, "a");

  for (const std::string start : {"a", "b", "c"}) {
    const auto report = picard_solve(u3, const_a, config_from(start));
    CHECK(report.converged);
    CHECK(report.fixed_point == "a");
    CHECK(report.iterations_used <= 2);
    CHECK(report.certificate->k == 0.5);
    CHECK(report.geometric_bound.checked);
    CHECK(report.geometric_bound.ok);
    // Oracle agreement: the solve lands on the unique fixed point.
    CHECK(fixed_points(u3, const_a) == std::vector<std::string>{*report.fixed_point});
  }

  const auto one = tst::one_point();
  const auto trivial = picard_solve(one, SelfMap::identity(one), config_from("p"));
  CHECK(trivial.converged);
  CHECK(trivial.iterations_used == 0);
  CHECK(trivial.fixed_point == "p");
  CHECK(trivial.residuals.empty());
}

TEST_CASE("picard refuses uncertifiable maps") {
  const auto u4 = tst::u4();
  try {
    picard_solve(u4, u4_cascade(u4), config_from("d"));
    FAIL("expected a hypothesis error");
  } catch (const SolveHypothesisError& e) {
    CHECK(std::string(e.what()).find("not TS-IF contractive") != std::string::npos);
    REQUIRE_FALSE(e.report.premise_checks.empty());
    CHECK_FALSE(e.report.premise_checks.back().passed);
  }

  // A supplied certificate is re-validated, not trusted.
  ContractionCertificate fake;
  fake.kind = ContractionCertificate::Kind::TsIf;
  fake.k = 0.5;
  CHECK_THROWS_AS(picard_solve(u4, u4_cascade(u4), config_from("d"), fake),
                  SolveHypothesisError);
}

TEST_CASE("picard rejects axiom-failing instances") {
  const auto broken = tst::u3_mu_zero();
  const auto map = SelfMap::constant(broken, "a");
  CHECK_THROWS_AS(picard_solve(broken, map, config_from("c")), SolveHypothesisError);
}

TEST_CASE("geometric residual bound along a multi-step run") {
  const auto e4 = tst::e4_line();
  const auto shift = tst::e4_shift(e4);
  const auto report = picard_solve(e4, shift, config_from("7"));
  CHECK(report.converged);
  CHECK(report.fixed_point == "0");
  CHECK(report.iterations_used == 3);  // 7 -> 3 -> 1 -> 0
  CHECK(report.geometric_bound.checked);
  CHECK(report.geometric_bound.ok);

  // Oracle: re-derive the bound from the raw residual rows.
  const double k = report.certificate->k;
  for (const auto& row : report.residuals) {
    double mu0 = 0.0, nu0 = 0.0;
    for (const auto& first : report.residuals) {
      if (first.n == 0 && first.t == row.t) {
        mu0 = first.mu;
        nu0 = first.nu;
      }
    }
    const double kn = std::pow(k, static_cast<double>(row.n));
    CHECK(row.mu >= std::min(1.0, mu0 / kn) - 1e-12);
    CHECK(row.nu <= kn * nu0 + 1e-12);
  }
}

TEST_CASE("blackbox profiles stop on residual tolerance") {
  const auto bb = tst::blackbox_u3();
  const auto const_a = SelfMap::constant(bb, "a");

  SolverConfig tight = config_from("c");
  const auto exact = picard_solve(bb, const_a, tight);
  CHECK(exact.converged);
  CHECK(exact.fixed_point == "a");
  CHECK(exact.certificate->witness_mode == ContractionCertificate::WitnessMode::Grid);

  SolverConfig loose = config_from("c");
  loose.tol = 0.6;  // 1 - mu = 0.5 <= 0.6 already at the first step
  const auto early = picard_solve(bb, const_a, loose);
  CHECK(early.converged);
  CHECK(early.iterations_used == 1);
}

TEST_CASE("cycle detection on uncertified iteration") {
  const auto u3 = tst::u3();
  const auto swap = SelfMap::from_labels(u3, {{"a", "b"}, {"b", "a"}, {"c", "a"}}, "swap");
  const auto trace = iterate_trace(u3, swap, "a", config_from("a"));
  CHECK_FALSE(trace.converged);
  REQUIRE(trace.cycle.has_value());
  CHECK(trace.cycle->size() == 2);

  const auto settled = iterate_trace(u3, SelfMap::constant(u3, "b"), "c", config_from("c"));
  CHECK(settled.converged);
  CHECK_FALSE(settled.cycle.has_value());
}

TEST_CASE("ball solve honours the closed-ball premises") {
  const auto u3 = tst::u3();
  const auto const_a = SelfMap::constant(u3, "a");

  const Ball wide{"a", 0.6, 1.0, true};
  const auto report = ball_solve(u3, const_a, wide, 0.5, config_from("a"));
  CHECK(report.converged);
  CHECK(report.fixed_point == "a");
  REQUIRE_FALSE(report.containment.empty());
  for (const auto& row : report.containment) CHECK(row.inside);
  // Post-hoc containment from raw evaluations.
  for (const auto& label : report.iterates) {
    CHECK(u3.mu("a", label, 1.0) > 1.0 - 0.6);
    CHECK(u3.nu("a", label, 1.0) < 0.6);
  }

  const Ball narrow{"a", 0.3, 1.0, true};
  try {
    ball_solve(u3, const_a, narrow, 0.5, config_from("a"));
    FAIL("expected a hypothesis error");
  } catch (const SolveHypothesisError& e) {
    CHECK(std::string(e.what()).find("0.5 ≯ 0.7") != std::string::npos);
  }

  // One-point instance: any ball whose radius clears the premise r > 1-k.
  const auto one = tst::one_point();
  const Ball trivial{"p", 0.6, 1.0, true};
  const auto tiny = ball_solve(one, SelfMap::identity(one), trivial, 0.5, config_from("p"));
  CHECK(tiny.converged);
  CHECK(tiny.containment.size() == 1);

  const Ball open_ball{"a", 0.6, 1.0, false};
  CHECK_THROWS_AS(ball_solve(u3, const_a, open_ball, 0.5, config_from("a")), DomainError);
}

TEST_CASE("ball solve requires an idempotent pair by default") {
  const auto e3 = tst::e3();  // product / probabilistic sum
  const auto const_a = SelfMap::constant(e3, "a");
  const Ball ball{"a", 0.6, 1.0, true};
  CHECK_THROWS_AS(ball_solve(e3, const_a, ball, 0.5, config_from("a")), SolveHypothesisError);

  SolverConfig relaxed = config_from("a");
  relaxed.strict_xii = false;
  const auto report = ball_solve(e3, const_a, ball, 0.5, relaxed);
  CHECK(report.converged);
}

TEST_CASE("power solve reduces to a contractive power") {
  const auto u4 = tst::u4();
  const auto cascade = u4_cascade(u4);

  // T itself is not certifiable...
  CHECK_FALSE(min_contraction_constant(u4, cascade).contractive);

  // ...but T^2 is, and the reduction still pins the fixed point of T.
  SolverConfig config = config_from("d");
  config.m = 2;
  const auto report = power_solve(u4, cascade, config);
  CHECK(report.converged);
  CHECK(report.fixed_point == "a");
  CHECK(report.certificate->k == 0.5);
  CHECK(fixed_points(u4, cascade) == std::vector<std::string>{"a"});
  const auto& fixedness = report.premise_checks.back();
  CHECK(fixedness.name == "t_fixedness");
  CHECK(fixedness.passed);

  // An already-contractive T agrees with plain picard via uniqueness.
  const auto u3 = tst::u3();
  const auto const_a = SelfMap::constant(u3, "a");
  SolverConfig m2 = config_from("c");
  m2.m = 2;
  const auto power_report = power_solve(u3, const_a, m2);
  const auto picard_report = picard_solve(u3, const_a, config_from("c"));
  CHECK(power_report.fixed_point == picard_report.fixed_point);

  const auto one = tst::one_point();
  SolverConfig one_cfg = config_from("p");
  one_cfg.m = 3;
  CHECK(power_solve(one, SelfMap::identity(one), one_cfg).fixed_point == "p");

  SolverConfig bad = config_from("d");
  bad.m = 1;
  CHECK_THROWS_AS(power_solve(u4, cascade, bad), DomainError);

  // The identity has no contractive power on u4.
  SolverConfig id_cfg = config_from("d");
  id_cfg.m = 2;
  CHECK_THROWS_AS(power_solve(u4, SelfMap::identity(u4), id_cfg), SolveHypothesisError);
}

TEST_CASE("power solve requires t-uniform continuity of T itself") {
  auto mu = tst::constant_matrix(3, 1.0, 0.6);
  auto nu = tst::constant_matrix(3, 0.0, 0.4);
  mu.at(0, 1) = mu.at(1, 0) = 0.99;
  nu.at(0, 1) = nu.at(1, 0) = 0.01;
  const FiniteInstance inst({"a", "b", "c"}, PairProfile::constant(std::move(mu), std::move(nu)),
                            TNormSpec::minimum(), TConormSpec::maximum(), {0.25, 1.0, 4.0});
  const auto spread = SelfMap::from_labels(inst, {{"a", "a"}, {"b", "c"}, {"c", "c"}}, "spread");
  SolverConfig config = config_from("b");
  config.m = 2;
  try {
    power_solve(inst, spread, config);
    FAIL("expected a hypothesis error");
  } catch (const SolveHypothesisError& e) {
    CHECK(std::string(e.what()).find("t-uniformly continuous") != std::string::npos);
  }
}

TEST_CASE("chain construction by breadth-first search") {
  const auto s5 = tst::s5();
  const auto chain = build_chain(s5, "0", "2", 0.5, 1.0);
  CHECK(chain.points == std::vector<std::string>{"0", "0.5", "1", "1.5", "2"});
  REQUIRE(chain.links.size() == 4);
  for (const auto& link : chain.links) {
    CHECK(link.mu == doctest::Approx(1.0 / 1.5).epsilon(1e-12));
    CHECK(link.mu > 0.5);
    CHECK(link.nu < 0.5);
    // Link-by-link re-validation from raw evaluations.
    CHECK(s5.mu(link.from, link.to, 1.0) == link.mu);
  }

  const auto self_chain = build_chain(s5, "1", "1", 0.5, 1.0);
  CHECK(self_chain.points == std::vector<std::string>{"1"});
  CHECK(self_chain.links.empty());

  const auto split = tst::u3_split();
  try {
    build_chain(split, "a", "c", 0.4, 1.0);
    FAIL("expected not-chainable");
  } catch (const NotChainableError& e) {
    REQUIRE(e.components.size() == 2);
    CHECK(e.components[0] == std::vector<std::string>{"a", "b"});
    CHECK(e.components[1] == std::vector<std::string>{"c"});
  }

  CHECK_THROWS_AS(build_chain(s5, "0", "2", 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_chain(s5, "0", "2", 0.5, 0.0), DomainError);
}

TEST_CASE("breadth-first chains are minimal") {
  // Oracle: unweighted all-pairs shortest hop counts (Floyd-Warshall).
  for (const auto& inst : {tst::s5(), tst::u3_split(), tst::u3(), tst::e4_line()}) {
    for (double eta : {0.2, 0.4, 0.5, 0.6}) {
      const double t = 1.0;
      const std::size_t n = inst.size();
      const std::size_t inf = 1000000;
      std::vector<std::vector<std::size_t>> hops(n, std::vector<std::size_t>(n, inf));
      for (std::size_t i = 0; i < n; ++i) hops[i][i] = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j && inst.mu(i, j, t) > eta && inst.nu(i, j, t) < 1.0 - eta) hops[i][j] = 1;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            hops[i][j] = std::min(hops[i][j], hops[i][k] + hops[k][j]);

      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (hops[i][j] == inf) {
            CHECK_THROWS_AS(build_chain(inst, inst.label(i), inst.label(j), eta, t),
                            NotChainableError);
          } else {
            const auto chain = build_chain(inst, inst.label(i), inst.label(j), eta, t);
            CHECK(chain.links.size() == hops[i][j]);
          }
        }
      }
    }
  }
}

TEST_CASE("all-grid chain mode quantifies links over every t") {
  const auto s5 = tst::s5();
  // At t = 0.25 the adjacent links drop to mu = 1/3, so the all-grid graph
  // over {0.25, 1, 4} is edgeless while the single-t graph at 1 is a path.
  CHECK(is_chainable(s5, 0.5, 1.0).chainable);
  const auto all_grid = is_chainable(s5, 0.5, s5.t_grid());
  CHECK_FALSE(all_grid.chainable);
  CHECK(all_grid.components.size() == 5);
  CHECK_THROWS_AS(build_chain(s5, "0", "2", 0.5, s5.t_grid()), NotChainableError);

  // t-independent profiles agree between the two modes.
  const auto u3 = tst::u3();
  const auto single = build_chain(u3, "a", "c", 0.4, 1.0);
  const auto spanning = build_chain(u3, "a", "c", 0.4, u3.t_grid());
  CHECK(single.points == spanning.points);
  CHECK(is_chainable(u3, 0.4, u3.t_grid()).chainable);
  // The reported link values come from the smallest t, where bounds bind.
  CHECK(spanning.t == 0.25);

  CHECK_THROWS_AS(is_chainable(u3, 0.4, std::vector<double>{}), DomainError);
}

TEST_CASE("chainability decomposition") {
  const auto s5 = tst::s5();
  const auto yes = is_chainable(s5, 0.5, 1.0);
  CHECK(yes.chainable);
  CHECK(yes.components.size() == 1);

  const auto no = is_chainable(s5, 0.7, 1.0);
  CHECK_FALSE(no.chainable);
  CHECK(no.components.size() == 5);  // all links have mu ~ 0.667 < 0.7

  CHECK(is_chainable(tst::one_point(), 0.9, 1.0).chainable);
}

TEST_CASE("chain solve under local contractivity") {
  const auto one = tst::one_point();
  const auto trivial =
      chain_solve(one, SelfMap::identity(one), 0.5, 0.7, config_from("p"), 1.0);
  CHECK(trivial.converged);
  CHECK(trivial.fixed_point == "p");

  const auto s5 = tst::s5();
  for (const std::string target : {"0", "1", "2"}) {
    const auto map = SelfMap::constant(s5, target);
    for (const std::string start : {"0", "0.5", "1", "1.5", "2"}) {
      const auto report = chain_solve(s5, map, 0.5, 0.7, config_from(start), 1.0);
      CHECK(report.converged);
      CHECK(report.fixed_point == target);
      const auto fps = fixed_points(s5, map);
      CHECK(std::find(fps.begin(), fps.end(), *report.fixed_point) != fps.end());
      for (const auto& row : report.step_invariant) {
        CHECK(row.ok);
        CHECK(row.m >= 1);
        CHECK(row.mu > 0.5);
        CHECK(row.nu < 0.5);
      }
    }
  }

  const auto u3 = tst::u3();
  CHECK_THROWS_AS(
      chain_solve(u3, SelfMap::identity(u3), 0.4, 0.9, config_from("a"), 1.0),
      SolveHypothesisError);

  // eps = 0.7 disconnects s5, so the chainability premise fails.
  CHECK_THROWS_AS(chain_solve(s5, SelfMap::constant(s5, "0"), 0.7, 0.9,
                              config_from("2"), 1.0),
                  SolveHypothesisError);
}

TEST_CASE("solve reports keep residual traces consistent") {
  const auto e4 = tst::e4_line();
  const auto report = picard_solve(e4, tst::e4_shift(e4), config_from("7"));
  CHECK(report.residuals.size() == report.iterations_used * e4.t_grid().size());
  for (const auto& row : report.residuals) {
    const auto& from = report.iterates[row.n];
    const auto& to = report.iterates[row.n + 1];
    CHECK(row.mu == e4.mu(from, to, row.t));
    CHECK(row.nu == e4.nu(from, to, row.t));
  }
}
