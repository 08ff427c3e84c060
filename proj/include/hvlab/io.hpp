#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hvlab/estimates.hpp"
#include "hvlab/harness.hpp"

namespace hvlab {

nlohmann::json grid_json(const PhaseSpaceGrid& grid);
PhaseSpaceGrid grid_from_json(const nlohmann::json& j);

/// `<stem>.bin`: row-major little-endian float64 (axis_order[0] slowest);
/// `<stem>.json`: sidecar {d, L, M, eps, axis_order, ...extra}.
void write_wigner(const std::string& stem, const WignerFunction& w, std::optional<double> t = std::nullopt,
                  std::optional<int> N = std::nullopt);
WignerFunction read_wigner(const std::string& stem, nlohmann::json* sidecar = nullptr);

/// Kernel as interleaved re/im float64, row-major; sidecar {N, grid, t}.
void write_density_matrix(const std::string& stem, const DensityMatrix& omega, std::optional<double> t = std::nullopt);
DensityMatrix read_density_matrix(const std::string& stem, nlohmann::json* sidecar = nullptr);

/// One-axis grid function (rho, U, E) with sidecar axis_order ["x"].
void write_grid_function(const std::string& stem, const PhaseSpaceGrid& grid, const Eigen::VectorXd& f);

nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const SlopeFit& f);
nlohmann::json to_json(const ConvergenceReport& r);

/// report.json, distances.csv, audits.csv in `dir` (created if needed).
void write_report(const std::string& dir, const ConvergenceReport& r);

/// Column names of distances.csv, in order.
const std::vector<std::string>& distance_columns();
const std::vector<std::string>& audit_columns();

}  // namespace hvlab
