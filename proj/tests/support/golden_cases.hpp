#pragma once

// Single source of truth for the CLI golden-file matrix: every case runs a
// shipped fixture through one of the five commands and pins the exit code
// plus (when a report is produced) the exact JSON bytes.

#include <string>
#include <vector>

namespace ifp::testing {

struct GoldenCase {
  std::string name;
  std::vector<std::string> fixtures;
  std::string args;
  int exit_code = 0;
  bool expect_report = true;
};

inline const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = {
      {"check_axioms_u3", {"u3.json"}, "check-axioms u3.json", 0, true},
      {"check_axioms_u3_mu_zero", {"u3_mu_zero.json"}, "check-axioms u3_mu_zero.json", 1, true},
      {"check_axioms_e3", {"e3.json"}, "check-axioms e3.json", 0, true},
      {"check_axioms_e3_min", {"e3_min.json"}, "check-axioms e3_min.json", 1, true},
      {"check_axioms_s5", {"s5.json"}, "check-axioms s5.json", 0, true},
      {"check_axioms_malformed", {"malformed.json"}, "check-axioms malformed.json", 2, false},

      {"certify_u3_ts_if", {"u3.json"}, "certify u3.json --kind ts-if --k 0.5", 0, true},
      {"certify_u3_auto", {"u3.json"}, "certify u3.json --kind ts-if --auto-k", 0, true},
      {"certify_u3_identity_ts_if",
       {"u3_identity.json"},
       "certify u3_identity.json --kind ts-if --k 0.9",
       1,
       true},
      {"certify_u3_identity_local",
       {"u3_identity.json"},
       "certify u3_identity.json --kind local --eps 0.4 --lambda 0.9",
       1,
       true},
      {"certify_s5_local_t1",
       {"s5.json"},
       "certify s5.json --kind local --eps 0.5 --lambda 0.7 --t 1",
       0,
       true},

      {"solve_u3_picard", {"u3.json"}, "solve u3.json --mode picard --x0 c", 0, true},
      {"solve_e3_picard", {"e3.json"}, "solve e3.json --mode picard --x0 c", 0, true},
      {"solve_one_point", {"one_point.json"}, "solve one_point.json --mode picard --x0 p", 0,
       true},
      {"solve_u3_ball_r06",
       {"u3.json"},
       "solve u3.json --mode ball --center a --r 0.6 --t 1 --k 0.5",
       0,
       true},
      {"solve_u3_ball_r03",
       {"u3.json"},
       "solve u3.json --mode ball --center a --r 0.3 --t 1",
       1,
       true},
      {"solve_u4_power", {"u4.json"}, "solve u4.json --mode power --m 2 --x0 d", 0, true},
      {"solve_s5_chain",
       {"s5.json"},
       "solve s5.json --mode chain --eps 0.5 --lambda 0.7 --t 1 --x0 2",
       0,
       true},
      {"solve_u4_picard_refused", {"u4.json"}, "solve u4.json --mode picard --x0 d", 1, true},

      {"chain_s5_eta05", {"s5.json"}, "chain s5.json --from 0 --to 2 --eta 0.5 --t 1", 0, true},
      {"chain_s5_eta07", {"s5.json"}, "chain s5.json --from 0 --to 2 --eta 0.7 --t 1", 1, true},
      {"chain_s5_self", {"s5.json"}, "chain s5.json --from 1 --to 1 --eta 0.5 --t 1", 0, true},
      {"chain_missing_point",
       {"s5.json"},
       "chain s5.json --from 0 --to zz --eta 0.5 --t 1",
       2,
       false},

      {"enumerate_u3_k05", {"u3.json"}, "enumerate u3.json --k 0.5", 0, true},
      {"enumerate_u3_k04", {"u3.json"}, "enumerate u3.json --k 0.4", 0, true},
      {"enumerate_one_point", {"one_point.json"}, "enumerate one_point.json --k 0.5", 0, true},
  };
  return cases;
}

}  // namespace ifp::testing
