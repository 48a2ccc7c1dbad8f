#pragma once

// Subcommands behind the `fracdyn` executable. Each returns the process exit
// status: 0 success, 1 usage/config error, 2 numerical divergence.

#include "fracdyn/integrators.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace fracdyn::cli {

inline constexpr const char* kVersion = "0.3.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitDivergence = 2 };

struct Overrides {
  std::optional<double> alpha;
  std::optional<CfScheme> mode;
};

int cmd_simulate(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                 const Overrides& overrides, std::ostream& out, std::ostream& err);
int cmd_equilibria(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_stability(const std::filesystem::path& config,
                  const std::optional<std::filesystem::path>& out_dir, const Overrides& overrides,
                  std::ostream& out, std::ostream& err);
int cmd_classify(double re, double im, double alpha, std::ostream& out, std::ostream& err);
int cmd_reproduce_table2(std::ostream& out, std::ostream& err);

}  // namespace fracdyn::cli
