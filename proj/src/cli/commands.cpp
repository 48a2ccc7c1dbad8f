#include "fracdyn/cli/commands.hpp"

#include "fracdyn/cli/config.hpp"
#include "fracdyn/cli/output.hpp"
#include "fracdyn/cli/table2.hpp"
#include "fracdyn/lotka.hpp"
#include "fracdyn/stability.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

namespace fracdyn::cli {

namespace {

using nlohmann::json;

RunConfig load_with_overrides(const std::filesystem::path& path, const Overrides& o) {
  RunConfig cfg = load_run_config(path);
  if (o.alpha) {
    if (!(*o.alpha > 0 && *o.alpha <= 1)) throw ConfigError("--alpha must lie in (0, 1]");
    cfg.alpha = o.alpha;
  }
  if (o.mode) cfg.cf_mode = *o.mode;
  return cfg;
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 const Overrides& overrides, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  SolverConfig<double> solver;
  try {
    cfg = load_with_overrides(config_path, overrides);
    solver = cfg.solver();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << out_dir << ": " << ec.message() << '\n';
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  const auto field = lotka_field(cfg.params);
  const Vector<double> x0 = *cfg.initial;
  const FractionalOrder<double> order(*cfg.alpha);

  Trajectory<double> traj;
  std::optional<std::size_t> divergence_step;
  std::string divergence_message;
  try {
    traj = *cfg.op == OperatorKind::Caputo ? integrate_caputo(field, x0, order, solver)
                                           : integrate_cf(field, x0, order, solver);
  } catch (const DivergenceError<double>& e) {
    traj = e.partial();
    divergence_step = e.step();
    divergence_message = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest;
  manifest["artifact"] = "fracdyn";
  manifest["version"] = kVersion;
  manifest["command"] = "simulate";
  manifest["config"] = to_json(cfg);
  manifest["outputs"] = json::array({"trajectory.csv"});
  manifest["steps_requested"] = solver.steps();
  manifest["rows_written"] = traj.size();
  manifest["wall_clock_seconds"] = seconds;
  manifest["diverged"] = divergence_step.has_value();
  manifest["divergence_step"] = divergence_step ? json(*divergence_step) : json(nullptr);
  manifest["divergence_message"] =
      divergence_step ? json(divergence_message) : json(nullptr);

  try {
    write_file_atomic(out_dir / "trajectory.csv", trajectory_csv(traj));
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (divergence_step) {
    err << "diverged: " << divergence_message << '\n';
    return kExitDivergence;
  }
  const auto end = traj.terminal();
  out << "wrote " << traj.size() << " rows to " << (out_dir / "trajectory.csv").string()
      << "; terminal state (" << format_number(end(0)) << ", " << format_number(end(1)) << ", "
      << format_number(end(2)) << ")\n";
  return kExitOk;
}

int cmd_equilibria(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  json list = json::array();
  for (const auto& eq : equilibria(cfg.params)) list.push_back(to_json(eq));
  out << json{{"params", cfg.params.to_array()}, {"equilibria", list}}.dump(2) << '\n';
  return kExitOk;
}

int cmd_stability(const std::filesystem::path& config_path,
                  const std::optional<std::filesystem::path>& out_dir, const Overrides& overrides,
                  std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_with_overrides(config_path, overrides);
    cfg.require_alpha();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const auto reports = equilibrium_report(cfg.params, FractionalOrder<double>(*cfg.alpha));
  const std::string text = stability_report_json(cfg.params, *cfg.alpha, reports).dump(2) + "\n";
  out << text;
  if (out_dir) {
    try {
      std::filesystem::create_directories(*out_dir);
      write_file_atomic(*out_dir / "stability_report.json", text);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }
  return kExitOk;
}

int cmd_classify(double re, double im, double alpha, std::ostream& out, std::ostream& err) {
  if (!(alpha > 0 && alpha < 1) || !std::isfinite(re) || !std::isfinite(im)) {
    err << "error: alpha must lie in (0, 1) and lambda must be finite\n";
    return kExitUsage;
  }
  const FractionalOrder<double> order(alpha);
  const std::complex<double> lambda(re, im);
  const auto conditions = cf_conditions(lambda, order);
  const json report = {{"lambda", {re, im}},
                       {"alpha", alpha},
                       {"region", to_string(classify_region(lambda, order))},
                       {"caputo_stable", caputo_stable_eigenvalue(lambda, order)},
                       {"cf_disk_stable", cf_stable_disk(lambda, order)},
                       {"cf_theorem_stable", !conditions.empty()},
                       {"cf_theorem_conditions", conditions}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_reproduce_table2(std::ostream& out, std::ostream&) {
  const auto summary = reproduce_table2();
  print_summary(out, summary);
  return summary.ok() ? kExitOk : kExitUsage;
}

}  // namespace fracdyn::cli
