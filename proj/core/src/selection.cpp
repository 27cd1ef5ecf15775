#include "csketch/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "csketch/csv.hpp"
#include "csketch/errors.hpp"
#include "csketch/rng.hpp"

namespace csketch {

namespace {

constexpr std::uint64_t kSplitStream = 100;
constexpr std::uint64_t kSketchStream = 1000;

int int_pow(int base, int exp) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > std::numeric_limits<int>::max()) throw std::overflow_error("n^(d-1) overflows");
  }
  return static_cast<int>(v);
}

std::vector<Candidate> expand(const SearchGrid& grid, int d) {
  if (grid.J.empty() || grid.n.empty() || grid.tau.empty() || (!grid.tie_N_to_n && grid.N.empty())) {
    throw std::invalid_argument("search grid has an empty axis");
  }
  std::vector<Candidate> cells;
  for (int J : grid.J) {
    for (int n : grid.n) {
      const std::vector<int> Ns = grid.tie_N_to_n ? std::vector<int>{int_pow(n, d - 1)} : grid.N;
      for (int N : Ns) {
        if (grid.max_dimension > 0 && static_cast<Index>(J) * n * N > grid.max_dimension) continue;
        for (double tau : grid.tau) cells.push_back({J, n, N, tau});
      }
    }
  }
  if (cells.empty()) throw std::invalid_argument("every grid cell exceeds the dimension cap");
  return cells;
}

Matrix take_rows(const Matrix& m, const std::vector<Index>& rows) { return m(rows, Eigen::all); }

Vector take(const Vector& v, const std::vector<Index>& rows) { return v(rows); }

}  // namespace

bool lower_capacity(const Candidate& a, const Candidate& b) {
  return std::tie(a.n, a.J, a.tau, a.N) < std::tie(b.n, b.J, b.tau, b.N);
}

Split make_split(Index size, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw std::invalid_argument("split fraction must lie in (0, 1)");
  std::vector<Index> order(static_cast<std::size_t>(size));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(size)));
  if (n_train == 0 || n_train >= order.size()) throw DataError("split leaves one side empty");
  Split split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return split;
}

std::vector<int> holdout_candidates(Index size, int d) {
  if (size < 1 || d < 1) throw std::invalid_argument("holdout_candidates needs size >= 1 and d >= 1");
  // smallest k with k^(2d-1) >= size, in exact integer arithmetic
  const int e = 2 * d - 1;
  int k = 1;
  auto reaches = [&](int base) {
    long double v = 1;
    for (int i = 0; i < e; ++i) v *= base;
    return v >= static_cast<long double>(size);
  };
  while (!reaches(k)) ++k;
  std::vector<int> out(static_cast<std::size_t>(k));
  std::iota(out.begin(), out.end(), 1);
  return out;
}

SelectionResult holdout_select(const Dataset& data, int J, double tau, const SelectionOptions& options) {
  if (data.size() < 10) throw DataError("hold-out selection needs at least 10 samples");
  SearchGrid grid;
  grid.J = {J};
  grid.tau = {tau};
  grid.n = holdout_candidates(data.size(), data.dim());
  grid.tie_N_to_n = true;
  SelectionOptions single = options;
  single.repeats = 1;
  return grid_search(data, grid, single);
}

SelectionResult grid_search(const Dataset& data, const SearchGrid& grid, const SelectionOptions& options) {
  if (options.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (data.size() < 2) throw DataError("grid search needs at least two samples");
  using Clock = std::chrono::steady_clock;

  SelectionResult result;
  for (int r = 0; r < options.repeats; ++r) {
    result.splits.push_back(make_split(data.size(), options.train_fraction, derive_seed(options.seed, kSplitStream + r)));
  }
  std::vector<Dataset> train_sets;
  for (const Split& s : result.splits) train_sets.push_back(subset(data, s.train));

  const std::vector<Candidate> cells = expand(grid, data.dim());
  std::vector<SketchSpec> specs;
  specs.reserve(cells.size());
  bool have_best = false;
  std::size_t best = 0;

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Candidate& cand = cells[c];
    SketchConfig cfg;
    cfg.dim = data.dim();
    cfg.J = cand.J;
    cfg.n = cand.n;
    cfg.N = cand.N;
    cfg.tau = cand.tau;
    cfg.m = options.m;
    cfg.mode = options.mode;
    cfg.operand_range = options.operand_range;
    cfg.seed = derive_seed(options.seed, kSketchStream + c);
    specs.push_back(make_spec(cfg));
    const auto assembled = Clock::now();
    const Matrix phi = design_matrix(data.X, specs.back());
    const double basis_seconds = std::chrono::duration<double>(Clock::now() - assembled).count();

    CellSummary summary{cand, 0.0, 0.0, options.repeats};
    for (int r = 0; r < options.repeats; ++r) {
      const Split& split = result.splits[static_cast<std::size_t>(r)];
      ValidationRow row;
      row.candidate = cand;
      row.split_id = r;
      const auto start = Clock::now();
      try {
        const FittedModel model = fit_model(train_sets[static_cast<std::size_t>(r)], specs.back(),
                                            take_rows(phi, split.train), options.fit);
        row.fit_seconds = std::chrono::duration<double>(Clock::now() - start).count() + basis_seconds;
        const Vector pred = predict_from_design(model, take_rows(phi, split.validation));
        const Vector truth = take(data.y, split.validation);
        row.mse = (pred - truth).squaredNorm() / static_cast<double>(truth.size());
        row.rmse = std::sqrt(row.mse);
      } catch (const NumericalError&) {
        row.mse = row.rmse = std::numeric_limits<double>::infinity();
      }
      summary.mean_mse += row.mse / options.repeats;
      summary.mean_rmse += row.rmse / options.repeats;
      result.table.push_back(row);
    }
    result.cells.push_back(summary);

    const double mse = summary.mean_mse;
    if (std::isfinite(mse)) {
      const CellSummary& incumbent = result.cells[best];
      if (!have_best || mse < incumbent.mean_mse ||
          (mse == incumbent.mean_mse && lower_capacity(cand, incumbent.candidate))) {
        best = c;
        have_best = true;
      }
    }
  }
  if (!have_best) throw NumericalError("every grid cell failed to fit");

  result.chosen = cells[best];
  result.chosen_mse = result.cells[best].mean_mse;
  const Dataset refit = options.refit_full ? data : train_sets.front();
  result.model = fit_model(refit, specs[best], options.fit);
  return result;
}

void write_validation_table(std::ostream& out, const SelectionResult& result, bool with_timing) {
  out << "J,n,N,tau,split,validation_rmse" << (with_timing ? ",fit_seconds" : "") << '\n';
  for (const ValidationRow& row : result.table) {
    out << row.candidate.J << ',' << row.candidate.n << ',' << row.candidate.N << ',' << format_double(row.candidate.tau)
        << ',' << row.split_id << ',' << format_double(row.rmse);
    if (with_timing) out << ',' << format_double(row.fit_seconds);
    out << '\n';
  }
}

}  // namespace csketch
