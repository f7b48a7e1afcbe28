#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bakry/scenario.hpp"

namespace bakry {

struct RunOptions {
  /// Overrides the scenario's refinement levels.
  std::optional<int> levels;
  /// Adds runtime_ms to every check; reports stop being byte-stable.
  bool timing = false;
};

/// Runs every requested check and builds the JSON report. Errors raised while
/// evaluating a check become a check entry carrying an `error` message.
nlohmann::ordered_json run_report(const Scenario& sc, const RunOptions& opts = {});

/// 2 when any check verdict is "violated", else 0.
int exit_code(const nlohmann::ordered_json& report);

/// Boundary condition used by `converge` and `spectrum`: the first one named
/// by a theorem check, else Dirichlet with a boundary and Neumann without.
BoundaryCondition default_bc(const Scenario& sc);

struct ConvergenceRow {
  int level = 0;
  int dofs = 0;
  double lambda1 = 0.0;
  /// NaN on the first two levels.
  double order_estimate = 0.0;
  /// Richardson value from levels 0..level; NaN on level 0.
  double extrapolate = 0.0;
};

/// Needs at least 3 levels. Throws InvalidParameter otherwise.
std::vector<ConvergenceRow> convergence_table(const Scenario& sc, BoundaryCondition bc, int levels);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

struct SpectrumRow {
  int index = 0;
  double lambda = 0.0;
  int fourier_mode = 0;
  /// 2 for Fourier modes k >= 1 (cos and sin), else 1.
  int multiplicity = 1;
  double residual = 0.0;
};

/// The k smallest eigenvalues on refinement `level`, counted with multiplicity.
std::vector<SpectrumRow> spectrum(const Scenario& sc, BoundaryCondition bc, int k, int level);
std::string spectrum_csv(const std::vector<SpectrumRow>& rows);

/// Prints a double so that it parses back to the same value.
std::string format_double(double v);

}  // namespace bakry
