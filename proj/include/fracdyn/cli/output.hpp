#pragma once

#include "fracdyn/integrators.hpp"
#include "fracdyn/lotka.hpp"
#include "fracdyn/stability.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace fracdyn::cli {

/// `t,x,y,z` header, one row per time point, 17 significant digits, LF.
void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj);
std::string trajectory_csv(const Trajectory<double>& traj);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// 17 significant digits (exact round trip), trailing zeros dropped, '.' separator.
std::string format_number(double value);

nlohmann::json to_json(const Equilibrium<double>& eq);
nlohmann::json to_json(const EquilibriumReport<double>& report);
nlohmann::json stability_report_json(const ModelParams<double>& params, double alpha,
                                     const std::vector<EquilibriumReport<double>>& reports);

}  // namespace fracdyn::cli
