#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ifp/analysis.hpp"
#include "ifp/maps.hpp"
#include "ifp/solvers.hpp"
#include "ifp/space.hpp"

namespace ifp {

inline constexpr const char* kSchemaVersion = "1";

struct LoadedDocument {
  FiniteInstance instance;
  std::optional<SelfMap> map;
};

// Parses an instance document (JSON). Structural violations (shape, symmetry,
// exact diagonals, ranges) raise ParseError with a field-path diagnostic;
// axiom-level violations are left for check_ifm_axioms to report.
LoadedDocument load_document(const std::string& path,
                             const std::optional<std::vector<double>>& t_grid_override =
                                 std::nullopt);

LoadedDocument parse_document(const nlohmann::json& doc,
                              const std::optional<std::vector<double>>& t_grid_override =
                                  std::nullopt);

// Report renderers; every document carries schema_version and kind.
nlohmann::json axiom_report_json(const AxiomReport& report);
nlohmann::json certificate_json(const ContractionCertificate& cert);
nlohmann::json counterexample_json(const ContractionCounterexample& ce);
nlohmann::json certify_report_json(const CertifyOutcome& outcome, std::optional<double> k_star);
nlohmann::json solve_report_json(const SolveReport& report);
nlohmann::json chain_report_json(double eta, double t, const std::optional<Chain>& chain,
                                 const std::optional<std::vector<std::vector<std::string>>>&
                                     components);
nlohmann::json enumeration_report_json(const FiniteInstance& instance, double k,
                                       const std::vector<SelfMap>& maps);

// Iterate/residual trace, columns n,point,t,mu_residual,nu_residual.
std::string solve_trace_csv(const SolveReport& report);

// Writes via a temp file in the same directory followed by a rename.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace ifp
