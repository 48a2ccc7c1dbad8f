#pragma once

// Run configuration files: one JSON object, unknown keys rejected.
//
//   {
//     "operator": "caputo" | "cf",
//     "alpha": 0.98,
//     "params": {"a1": 3, "a2": 0.5, "a3": 4, "a4": 3, "a5": 4, "a6": 9, "a7": 4},
//     "initial": {"x": 0.5, "y": 0.9, "z": 0.1},
//     "horizon": 50,
//     "step": 0.01,
//     "cf_mode": "paper" | "corrected",      (optional, default "corrected")
//     "normalization": 1.0                   (optional, default 1)
//   }
//
// Only "params" is always required; each subcommand requires what it uses.

#include "fracdyn/integrators.hpp"
#include "fracdyn/lotka.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fracdyn::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<OperatorKind> op;
  std::optional<double> alpha;
  ModelParams<double> params;
  std::optional<State3<double>> initial;
  std::optional<double> horizon;
  std::optional<double> step;
  CfScheme cf_mode{CfScheme::Corrected};
  double normalization{1.0};

  /// Throws ConfigError unless every field needed by `simulate` is present
  /// and within range.
  void require_simulation() const;
  /// Throws ConfigError unless alpha is present and in (0, 1].
  void require_alpha() const;

  SolverConfig<double> solver() const;
};

/// `source` names the input in diagnostics ("<path>:<line>:<col>: ...").
RunConfig parse_run_config(std::string_view text, const std::string& source = "config");
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

OperatorKind parse_operator(std::string_view name);
CfScheme parse_cf_mode(std::string_view name);

}  // namespace fracdyn::cli
