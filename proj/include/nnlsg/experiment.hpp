#ifndef NNLSG_EXPERIMENT_HPP
#define NNLSG_EXPERIMENT_HPP

#include "nnlsg/observables.hpp"
#include "nnlsg/scenario.hpp"

#include <string>
#include <vector>

namespace nnlsg {

// Experiment drivers. All outputs are plain CSV / key = value text written
// with 17 significant digits so repeated runs are byte-identical and values
// round-trip exactly.

struct RunOverrides {
  int resolution = 0;  // override M when > 0
};

struct RunSummary {
  std::string name;
  std::string status = "ok";  // "ok" or "unstable"
  std::string message;
  double norm_err = 0.0;
  Complex norm_mean{0.0};
  std::optional<double> reflection_T;
  double res_integrable = 0.0;
  double res_transparent = 0.0;
  bool integrable = false;
  bool transparent = false;
  std::vector<ObservableRecord> records;
};

/// Runs one scenario and writes timeseries.csv, summary.txt and one
/// snapshot_t<...>.csv per requested snapshot time into out_dir.
RunSummary run_scenario(const Scenario &scenario, const std::string &out_dir,
                        const RunOverrides &overrides = {});

/// In-memory variant used by sweeps and tests; writes nothing.
RunSummary run_scenario_in_memory(const Scenario &scenario, const RunOverrides &overrides = {});

struct SweepCell {
  double beta_m1 = 0.0, beta_p1 = 0.0;
  double norm_err = 0.0;
  double reflection = 0.0;
  double res_integrable = 0.0;
  double res_transparent = 0.0;
  std::string status = "ok";
};

struct SweepResult {
  std::vector<SweepCell> cells;  // row-major over (beta_m1, beta_p1)
  int rows = 0, cols = 0;
};

/// Runs the (beta_{-1}, beta_{+1}) grid of the scenario; cells execute
/// concurrently on the requested number of threads, failures are recorded
/// in-cell and the sweep continues. Writes sweep.csv when out_dir is
/// non-empty.
SweepResult run_sweep(const Scenario &scenario, const std::string &out_dir, int threads = 1);

/// Writes one state as CSV rows bond,x,re,im,abs (bond ids -1,1,-2,2; x is
/// the signed bond coordinate).
void emit_snapshot(const StarGraph &graph, const Field &field, const std::string &path);

/// Reads a snapshot written by emit_snapshot back into a field.
Field read_snapshot(const StarGraph &graph, const std::string &path);

/// Full-precision decimal formatting used by every writer.
std::string format_real(double v);

} // namespace nnlsg

#endif
