#include "fracdyn/cli/commands.hpp"
#include "fracdyn/cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace fracdyn::cli;

  CLI::App app{"Fractional-order three-species Lotka-Volterra: simulation and stability"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::optional<double> alpha;
  std::string mode;

  auto add_alpha = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "Fractional order, overrides the config");
  };
  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "CF discretisation")->check(CLI::IsMember({"paper", "corrected"}));
  };

  auto* simulate = app.add_subcommand("simulate", "Integrate a trajectory and write trajectory.csv");
  simulate->add_option("--config", config, "Run configuration (JSON)")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();
  add_alpha(simulate);
  add_mode(simulate);

  auto* equilibria = app.add_subcommand("equilibria", "Print the five equilibria");
  equilibria->add_option("--config", config, "Run configuration (JSON)")->required();

  auto* stability = app.add_subcommand("stability", "Spectra, verdicts and region classes");
  stability->add_option("--config", config, "Run configuration (JSON)")->required();
  stability->add_option("--out", out_dir, "Also write stability_report.json here");
  add_alpha(stability);

  double re = 0, im = 0;
  std::optional<double> alpha_pos;
  auto* classify = app.add_subcommand("classify", "Region class of one eigenvalue");
  classify->add_option("re", re, "Real part")->required();
  classify->add_option("im", im, "Imaginary part")->required();
  classify->add_option("alpha_value", alpha_pos, "Fractional order (or --alpha)");
  add_alpha(classify);

  auto* table2 = app.add_subcommand("reproduce-table2", "Check the worked examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Overrides overrides;
  overrides.alpha = alpha;
  if (!mode.empty()) overrides.mode = parse_cf_mode(mode);

  if (*simulate) return cmd_simulate(config, out_dir, overrides, std::cout, std::cerr);
  if (*equilibria) return cmd_equilibria(config, std::cout, std::cerr);
  if (*stability) {
    std::optional<std::filesystem::path> dir;
    if (!out_dir.empty()) dir = out_dir;
    return cmd_stability(config, dir, overrides, std::cout, std::cerr);
  }
  if (*classify) {
    const auto a = alpha_pos ? alpha_pos : alpha;
    if (!a) {
      std::cerr << "error: classify needs alpha (positional or --alpha)\n";
      return kExitUsage;
    }
    return cmd_classify(re, im, *a, std::cout, std::cerr);
  }
  if (*table2) return cmd_reproduce_table2(std::cout, std::cerr);
  return kExitUsage;
}
