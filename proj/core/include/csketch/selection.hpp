#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "csketch/solver.hpp"

namespace csketch {

struct Candidate {
  int J = 1;
  int n = 1;
  int N = 1;
  double tau = 0.1;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Tie-break order: smaller n, then J, then tau, then N.
bool lower_capacity(const Candidate& a, const Candidate& b);

/// Disjoint index sets covering [0, size).
struct Split {
  std::vector<Index> train;
  std::vector<Index> validation;
};

/// Shuffles [0, size) and puts the first round(train_fraction * size)
/// indices in the training part. Both parts are non-empty or this throws.
Split make_split(Index size, double train_fraction, std::uint64_t seed);

struct ValidationRow {
  Candidate candidate;
  int split_id = 0;
  double rmse = 0.0;
  double mse = 0.0;
  double fit_seconds = 0.0;
};

struct CellSummary {
  Candidate candidate;
  double mean_mse = 0.0;
  double mean_rmse = 0.0;
  int repeats = 0;
};

struct SelectionResult {
  Candidate chosen;
  double chosen_mse = 0.0;
  std::vector<ValidationRow> table;
  std::vector<CellSummary> cells;
  std::vector<Split> splits;
  FittedModel model;
};

struct SelectionOptions {
  double train_fraction = 0.8;
  int repeats = 1;
  FitOptions fit;
  std::optional<int> m;
  Interval operand_range{};
  SketchMode mode = SketchMode::equal_area;
  std::uint64_t seed = 0;
  /// Refit the reported model on all of D instead of the training part of split 0.
  bool refit_full = false;
};

struct SearchGrid {
  std::vector<int> J{1};
  std::vector<int> n{1};
  std::vector<int> N{1};
  std::vector<double> tau{0.1};
  /// Ignore `N` and use N = n^(d-1).
  bool tie_N_to_n = false;
  Index max_dimension = 0;  ///< skip cells with J n N above this; 0 keeps every cell
};

/// {1, ..., ceil(size^(1 / (2d - 1)))}
std::vector<int> holdout_candidates(Index size, int d);

/// Hold-out choice of n over holdout_candidates(|D|, d) with N = n^(d-1).
SelectionResult holdout_select(const Dataset& data, int J, double tau, const SelectionOptions& options);

/// Exhaustive search over the Cartesian grid; each cell is scored by the
/// validation MSE averaged over `options.repeats` independent splits.
SelectionResult grid_search(const Dataset& data, const SearchGrid& grid, const SelectionOptions& options);

/// Columns: J, n, N, tau, split, validation_rmse, fit_seconds.
void write_validation_table(std::ostream& out, const SelectionResult& result, bool with_timing = true);

}  // namespace csketch
