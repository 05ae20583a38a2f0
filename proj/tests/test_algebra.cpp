#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ifp/algebra.hpp"

using namespace ifp;

namespace {

// min table on the mesh {0, 0.5, 1}.
MeshTable min_table_3() {
  return MeshTable(0.5, {{0, 0, 0}, {0, 0.5, 0.5}, {0, 0.5, 1}});
}

// Projection onto the first argument; commutativity must fail.
MeshTable projection_table(double step) {
  const std::size_t side = static_cast<std::size_t>(std::lround(1.0 / step)) + 1;
  std::vector<std::vector<double>> rows(side, std::vector<double>(side));
  for (std::size_t i = 0; i < side; ++i) {
    const double a = i + 1 == side ? 1.0 : i * step;
    for (std::size_t j = 0; j < side; ++j) rows[i][j] = a;
  }
  return MeshTable(step, rows);
}

}  // namespace

TEST_CASE("t-norm application on built-in kinds") {
  CHECK(TNormSpec::minimum().apply(0.3, 1.0) == 0.3);
  CHECK(TNormSpec::product().apply(0.5, 0.5) == 0.25);
  CHECK(TNormSpec::lukasiewicz().apply(0.7, 0.2) == 0.0);
  CHECK(TNormSpec::lukasiewicz().apply(0.7, 0.5) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(TNormSpec::minimum().apply(-0.1, 0.5), DomainError);
  CHECK_THROWS_AS(TNormSpec::minimum().apply(0.1, 1.5), DomainError);
}

TEST_CASE("t-conorm application on built-in kinds") {
  CHECK(TConormSpec::maximum().apply(0.3, 0.0) == 0.3);
  CHECK(TConormSpec::probabilistic_sum().apply(0.5, 0.5) == 0.75);
  CHECK(TConormSpec::maximum().apply(0.4, 0.4) == 0.4);
  CHECK(TConormSpec::lukasiewicz().apply(0.6, 0.7) == 1.0);
  CHECK_THROWS_AS(TConormSpec::maximum().apply(2.0, 0.0), DomainError);
}

TEST_CASE("custom table construction errors") {
  CHECK_THROWS_AS(MeshTable(0.5, {{0, 0}, {0, 0.5, 1}}), ConstructionError);
  CHECK_THROWS_AS(MeshTable(0.5, {{0, 0, 0}, {0, 0.5, 0.5}, {0, 0.5, 1.5}}), ConstructionError);
  CHECK_THROWS_AS(MeshTable(0.3, {{0, 0, 0}, {0, 0.5, 0.5}, {0, 0.5, 1}}), ConstructionError);
}

TEST_CASE("custom table bilinear interpolation and idempotency flag") {
  const auto spec = TNormSpec::custom(min_table_3());
  CHECK(spec.idempotent());  // the table diagonal equals the mesh
  CHECK(spec.apply(0.5, 0.5) == 0.5);
  CHECK(spec.apply(0.25, 0.75) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(spec.apply(1.0, 1.0) == 1.0);
  CHECK_FALSE(TNormSpec::product().idempotent());
  CHECK_FALSE(TConormSpec::probabilistic_sum().idempotent());
}

TEST_CASE("folds over lists") {
  const double one_minus_r = 1.0 - 0.3;
  const std::vector<double> three_links{one_minus_r, one_minus_r, one_minus_r};
  CHECK(TNormSpec::minimum().fold(three_links) == one_minus_r);

  const std::vector<double> halves{0.5, 0.5, 0.5};
  CHECK(TNormSpec::product().fold(halves) == 0.125);
  const std::vector<double> singleton{0.42};
  CHECK(TNormSpec::minimum().fold(singleton) == 0.42);
  CHECK(TNormSpec::lukasiewicz().fold(singleton) == 0.42);

  const std::vector<double> rs{0.3, 0.3, 0.3};
  CHECK(TConormSpec::maximum().fold(rs) == 0.3);
  const std::vector<double> two_halves{0.5, 0.5};
  CHECK(TConormSpec::probabilistic_sum().fold(two_halves) == 0.75);
  const std::vector<double> tenth{0.1};
  CHECK(TConormSpec::probabilistic_sum().fold(tenth) == 0.1);

  CHECK_THROWS_AS(TNormSpec::minimum().fold(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(TConormSpec::maximum().fold(std::vector<double>{}), DomainError);
}

TEST_CASE("fold equals any re-association of pairwise applies") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, 8);

  // Random binary-tree evaluation of the same list.
  const auto tree_eval = [&](const auto& self, const auto& apply,
                             const std::vector<double>& vals, std::size_t lo,
                             std::size_t hi) -> double {
    if (hi - lo == 1) return vals[lo];
    std::uniform_int_distribution<std::size_t> cut(lo + 1, hi - 1);
    const std::size_t mid = cut(rng);
    return apply(self(self, apply, vals, lo, mid), self(self, apply, vals, mid, hi));
  };

  const TNormSpec kinds[] = {TNormSpec::minimum(), TNormSpec::product(),
                             TNormSpec::lukasiewicz()};
  for (const auto& spec : kinds) {
    const auto apply = [&spec](double a, double b) { return spec.apply(a, b); };
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> vals(len(rng));
      for (auto& v : vals) v = unit(rng);
      const double left = spec.fold(vals);
      const double tree = tree_eval(tree_eval, apply, vals, 0, vals.size());
      if (spec.kind() == TNormKind::Minimum) {
        CHECK(left == tree);
      } else {
        CHECK(left == doctest::Approx(tree).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("operation law scan on built-ins") {
  const auto min_report = check_operation_axioms(TNormSpec::minimum(), 0.1, 1e-12);
  CHECK(min_report.all_passed());
  CHECK(min_report.idempotent);

  const auto prod_report = check_operation_axioms(TNormSpec::product(), 0.1, 1e-12);
  CHECK(prod_report.all_passed());
  CHECK_FALSE(prod_report.idempotent);
  REQUIRE(prod_report.idempotent_witness.has_value());
  const double w = *prod_report.idempotent_witness;
  CHECK(TNormSpec::product().apply(w, w) != w);  // the witness re-validates

  const auto luk_report = check_operation_axioms(TNormSpec::lukasiewicz(), 0.05, 1e-12);
  CHECK(luk_report.all_passed());
  const auto max_report = check_operation_axioms(TConormSpec::maximum(), 0.1, 1e-12);
  CHECK(max_report.all_passed());
  CHECK(max_report.idempotent);
  const auto ps_report = check_operation_axioms(TConormSpec::probabilistic_sum(), 0.1, 1e-12);
  CHECK(ps_report.all_passed());
  CHECK_FALSE(ps_report.idempotent);

  CHECK_THROWS_AS(check_operation_axioms(TNormSpec::minimum(), 0.3, 1e-9), DomainError);
  CHECK_THROWS_AS(check_operation_axioms(TNormSpec::minimum(), 0.0, 1e-9), DomainError);
}

TEST_CASE("projection table fails commutativity with a validating witness") {
  const auto spec = TNormSpec::custom(projection_table(0.1));
  const auto report = check_operation_axioms(spec, 0.1, 1e-9);
  CHECK_FALSE(report.all_passed());
  const auto& comm = report.law("commutativity");
  REQUIRE_FALSE(comm.passed);
  REQUIRE(comm.witness.size() == 2);
  CHECK(spec.apply(comm.witness[0], comm.witness[1]) !=
        spec.apply(comm.witness[1], comm.witness[0]));
  // Projection keeps the identity row, associativity and monotonicity.
  CHECK(report.law("boundary").passed);
  CHECK(report.law("associativity").passed);
  CHECK(report.law("monotonicity").passed);
}

TEST_CASE("built-in laws hold exactly on random pairs") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const TNormSpec tnorms[] = {TNormSpec::minimum(), TNormSpec::product(),
                              TNormSpec::lukasiewicz()};
  const TConormSpec tconorms[] = {TConormSpec::maximum(), TConormSpec::probabilistic_sum(),
                                  TConormSpec::lukasiewicz()};

  for (int i = 0; i < 10000; ++i) {
    const double a = unit(rng), b = unit(rng);
    const double c = std::min(1.0, a + unit(rng) * (1.0 - a));
    const double d = std::min(1.0, b + unit(rng) * (1.0 - b));
    for (const auto& s : tnorms) {
      CHECK(s.apply(a, 1.0) == a);
      CHECK(s.apply(a, b) == s.apply(b, a));
      CHECK(s.apply(a, b) <= s.apply(c, d));
      CHECK(s.apply(a, b) >= 0.0);
      CHECK(s.apply(a, b) <= 1.0);
    }
    for (const auto& s : tconorms) {
      CHECK(s.apply(a, 0.0) == a);
      CHECK(s.apply(a, b) == s.apply(b, a));
      CHECK(s.apply(a, b) <= s.apply(c, d));
      CHECK(s.apply(a, b) >= 0.0);
      CHECK(s.apply(a, b) <= 1.0);
    }
    CHECK(TNormSpec::minimum().apply(a, a) == a);
    CHECK(TConormSpec::maximum().apply(a, a) == a);
  }
}

TEST_CASE("residual witness search") {
  const auto mm = find_residual_witness(TNormSpec::minimum(), TConormSpec::maximum(),
                                        0.8, 0.5, 0.01);
  CHECK(mm.r3 == doctest::Approx(0.51).epsilon(1e-12));
  CHECK(mm.r4 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(TNormSpec::minimum().apply(0.8, mm.r3) > 0.5);
  CHECK(TConormSpec::maximum().apply(mm.r4, 0.5) < 0.8);

  // Independent oracle: ascending scan with direct application.
  const auto pp = find_residual_witness(TNormSpec::product(), TConormSpec::probabilistic_sum(),
                                        0.9, 0.1, 0.01);
  double expected_r3 = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double v = k * 0.01;
    if (0.9 * v > 0.1) {
      expected_r3 = v;
      break;
    }
  }
  CHECK(pp.r3 == expected_r3);
  CHECK(0.9 * pp.r3 > 0.1);
  CHECK(pp.r4 + 0.1 - pp.r4 * 0.1 < 0.9);

  CHECK_THROWS_AS(find_residual_witness(TNormSpec::minimum(), TConormSpec::maximum(),
                                        0.5001, 0.5, 0.5),
                  WitnessNotFoundError);
  CHECK_THROWS_AS(find_residual_witness(TNormSpec::minimum(), TConormSpec::maximum(),
                                        0.5, 0.8, 0.01),
                  DomainError);  // r1 <= r2
  CHECK_THROWS_AS(find_residual_witness(TNormSpec::minimum(), TConormSpec::maximum(),
                                        1.0, 0.5, 0.01),
                  DomainError);
}

TEST_CASE("idempotent witness search") {
  const auto mm = find_idempotent_witness(TNormSpec::minimum(), TConormSpec::maximum(),
                                          0.6, 0.01);
  CHECK(mm.r6 == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(mm.r7 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(TNormSpec::minimum().apply(mm.r6, mm.r6) >= 0.6);
  CHECK(TConormSpec::maximum().apply(mm.r7, mm.r7) <= 0.6);

  const auto pp = find_idempotent_witness(TNormSpec::product(),
                                          TConormSpec::probabilistic_sum(), 0.25, 0.01);
  CHECK(pp.r6 == 0.5);
  CHECK(pp.r6 * pp.r6 >= 0.25);
  CHECK(pp.r7 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(pp.r7 + pp.r7 - pp.r7 * pp.r7 <= 0.25);

  CHECK_THROWS_AS(find_idempotent_witness(TNormSpec::minimum(), TConormSpec::maximum(),
                                          0.99, 0.5),
                  WitnessNotFoundError);
}

TEST_CASE("witness searches re-validate on random inputs") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct OpPair {
    TNormSpec tn;
    TConormSpec tc;
  };
  const OpPair pairs[] = {{TNormSpec::minimum(), TConormSpec::maximum()},
                          {TNormSpec::product(), TConormSpec::probabilistic_sum()},
                          {TNormSpec::lukasiewicz(), TConormSpec::lukasiewicz()}};

  for (const auto& [tn, tc] : pairs) {
    for (int i = 0; i < 25; ++i) {
      const double r2 = 0.05 + 0.85 * unit(rng);
      const double r1 = std::min(0.98, r2 + 0.05 + (0.98 - r2 - 0.05) * unit(rng));
      const auto w = find_residual_witness(tn, tc, r1, r2, 0.01);
      CHECK(tn.apply(r1, w.r3) > r2);
      CHECK(tc.apply(w.r4, r2) < r1);

      const double r5 = 0.05 + 0.9 * unit(rng);
      const auto iw = find_idempotent_witness(tn, tc, r5, 0.01);
      CHECK(tn.apply(iw.r6, iw.r6) >= r5);
      CHECK(tc.apply(iw.r7, iw.r7) <= r5);
    }
  }
}

TEST_CASE("minimum and maximum are the idempotent built-in pair") {
  CHECK(TNormSpec::minimum().idempotent());
  CHECK(TConormSpec::maximum().idempotent());
  CHECK_FALSE(TNormSpec::product().idempotent());
  CHECK_FALSE(TNormSpec::lukasiewicz().idempotent());
  CHECK_FALSE(TConormSpec::probabilistic_sum().idempotent());
  CHECK_FALSE(TConormSpec::lukasiewicz().idempotent());
}
