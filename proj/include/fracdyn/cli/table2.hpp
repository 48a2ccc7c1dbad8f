#pragma once

// Reproduction harness for the summary table of the three worked examples:
// equilibrium points, spectra, Caputo / CF verdicts, and the long-time
// behaviour of the simulated trajectories.

#include "fracdyn/examples.hpp"
#include "fracdyn/integrators.hpp"
#include "fracdyn/lotka.hpp"

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracdyn::cli {

inline constexpr double kTableValueTolerance = 1e-2;   // printed with 2-3 decimals
inline constexpr double kTrajectoryTolerance = 5e-2;   // max-norm at the horizon

enum class CellStatus { Pass, Fail, KnownDiscrepancy };
const char* to_string(CellStatus status);

struct CellResult {
  std::string section;  // "equilibrium", "spectrum", "verdict", "trajectory"
  std::string id;
  CellStatus status{CellStatus::Fail};
  std::string expected;
  std::string observed;
};

struct ReproductionSummary {
  std::vector<CellResult> cells;
  double seconds{};

  std::size_t count(const std::string& section, CellStatus status) const;
  std::size_t count(const std::string& section) const;
  bool ok() const;  // every cell PASS or KNOWN-DISCREPANCY
};

/// Printed values for one example.
struct PrintedRow {
  EquilibriumKind kind;
  State3<double> point;
  bool admissible;
  std::array<std::complex<double>, 3> spectrum;
};

struct PrintedColumn {
  OperatorKind op;
  double alpha;
  std::array<bool, 5> stable;  // E0..E4
};

struct PrintedExample {
  ExampleScenario scenario;
  std::array<PrintedRow, 5> rows;
  std::vector<PrintedColumn> columns;
};

std::vector<PrintedExample> printed_table();

/// Cells whose printed verdict disagrees with the stability criteria.
bool is_known_discrepancy(const std::string& example, EquilibriumKind kind, OperatorKind op,
                          double alpha);

/// max |a_i - b_pi(i)| minimised over the 6 pairings.
double multiset_distance(const std::array<std::complex<double>, 3>& a,
                         const std::array<std::complex<double>, 3>& b);

struct TrajectoryScenario {
  std::string id;
  ModelParams<double> params;
  OperatorKind op;
  double alpha;
  State3<double> initial;
  double horizon;
  double step;
  State3<double> target;
};

struct TrajectoryOutcome {
  State3<double> terminal = State3<double>::Zero();
  double distance{};
  double seconds{};
  bool diverged{};
};

std::vector<TrajectoryScenario> trajectory_scenarios();
TrajectoryOutcome run_trajectory_scenario(const TrajectoryScenario& scenario,
                                          CfScheme mode = CfScheme::Corrected);

ReproductionSummary reproduce_table2(bool with_trajectories = true);
void print_summary(std::ostream& out, const ReproductionSummary& summary);

}  // namespace fracdyn::cli
