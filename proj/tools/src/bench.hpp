#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csketch/data.hpp"
#include "csketch/selection.hpp"
#include "output.hpp"

namespace csketch::cli {

enum class Experiment { sim2, sim3, sim4, real };

Experiment parse_experiment(const std::string& text);
std::string to_string(Experiment e);

/// Axes of the bench grid. Empty axes are filled from the experiment's
/// defaults (desk scale, or the complete grid with `full`).
struct BenchGrid {
  std::vector<int> J;
  std::vector<int> n;
  std::vector<int> N;
  std::vector<double> tau;
  /// Cells with J n N above this are skipped; 0 disables the cap.
  Index max_dimension = -1;
};

struct BenchConfig {
  Experiment experiment = Experiment::sim2;
  int trials = 5;
  std::uint64_t seed = 20240917;
  bool full = false;
  Index train_size = 2000;
  Index test_size = 1000;
  std::vector<double> noise;              ///< empty: {0, 0.01, 0.1, 0.3, 0.5}
  std::vector<SyntheticTarget> targets;   ///< empty: {f1, f2}
  BenchGrid grid;
  int m = 20;
  double train_fraction = 0.8;
  FitOptions fit;
  // `real` only
  std::string train_csv;
  std::string test_csv;
  std::string target_column = "y";
  bool log_transform = false;
};

/// One (trial, cell) measurement. For the validation-selected experiments
/// the cell is the one chosen in that trial.
struct TrialRecord {
  std::string target;
  double delta = 0.0;
  std::string method;
  int trial = 0;
  Candidate cell;
  double test_rmse = 0.0;
  double validation_rmse = 0.0;
  double fit_seconds = 0.0;
};

struct CellStat {
  std::string target;
  double delta = 0.0;
  std::string method;
  Candidate cell;
  double mean = 0.0;
  double std = 0.0;
  int trials = 0;
};

/// Best cell of a group. `J` is nonzero when the group is a single J value.
struct Optimum {
  std::string target;
  double delta = 0.0;
  std::string method;
  int J = 0;
  Candidate cell;
  double mean = 0.0;
  double std = 0.0;
  int trials = 0;
  double mean_fit_seconds = 0.0;
};

struct BenchResult {
  Experiment experiment = Experiment::sim2;
  BenchConfig config;  ///< with defaults filled in
  std::vector<TrialRecord> records;
  std::vector<CellStat> cells;
  std::vector<Optimum> optima;
  std::vector<std::string> files;
  int skipped_cells = 0;
};

/// Fills empty fields of `config` with the experiment defaults.
BenchConfig with_defaults(BenchConfig config);

/// Runs the experiment, writing CSV tables, SVG charts and report.json
/// under `<out>/<experiment>/`. Raw rows are flushed trial by trial, so a
/// failure leaves the finished trials on disk.
BenchResult run_bench(const BenchConfig& config, const OutputDir& out, std::ostream& log);

}  // namespace csketch::cli
