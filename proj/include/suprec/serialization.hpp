#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <string_view>

#include "suprec/diagnostics.hpp"
#include "suprec/experiments.hpp"
#include "suprec/noise.hpp"
#include "suprec/tail_models.hpp"

namespace suprec {

// JSON forms use tagged objects: {"kind": "ar1", "rho": 0.9}. Every parser
// throws ConfigError on malformed input, unknown keys included.

nlohmann::json to_json(const TailFamily& family);
TailFamily family_from_json(const nlohmann::json& j);

/// Short command-line form: gaussian, laplace, gg:0.5, agg:1.5,
/// heavier:2[:c], lighter:1, pareto:2.
TailFamily parse_family(std::string_view text);

nlohmann::json to_json(const NoiseModel& model);
/// {"kind": "iid"} takes its marginal from `family`.
NoiseModel noise_from_json(const nlohmann::json& j,
                           const TailFamily& family = TailFamily::gaussian());

nlohmann::json to_json(const ProcedureSpec& spec);
ProcedureSpec procedure_from_json(const nlohmann::json& j);

const char* placement_name(SignalPlacement placement);
SignalPlacement parse_placement(std::string_view text);

/// Missing grids default to beta = 0.05, 0.10, ..., 0.95 and
/// r = 0.1, 0.3, ..., 5.9. The result is validated.
nlohmann::json to_json(const GridSpec& spec);
GridSpec grid_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ParetoSpec& spec);
ParetoSpec pareto_spec_from_json(const nlohmann::json& j);

/// Reads a whole file as JSON; ConfigError if unreadable or unparsable.
nlohmann::json read_json_file(const std::string& path);

/// FNV-1a 64 of the compact dump (keys are sorted, so equal specs hash
/// equally), as 16 hex digits.
std::string spec_hash(const nlohmann::json& j);

/// Values use 6 significant digits.
std::string format_number(double value);

inline constexpr std::string_view kGridCsvHeader =
    "beta,r,prob_exact,stderr,fwer,mean_fdp,mean_fnp,mean_hamming,reps";
void write_grid_csv(std::ostream& out, const GridResult& result);

/// Rows beta = i / n for i = 1..n with columns beta,g,h,f,nonudd. f is left
/// empty unless nu == 2 and beta > 1/2.
void write_boundary_csv(std::ostream& out, double nu, std::size_t grid_points);

/// Square numeric matrix, comma separated, one row per line.
Eigen::MatrixXd read_matrix_csv(std::istream& in);

}  // namespace suprec
