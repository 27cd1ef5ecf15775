// Acceptance checks. Prints one PASS/FAIL line per criterion; pass criterion
// numbers as arguments to run a subset. Exit status is nonzero if any fail.

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "csketch/basis.hpp"
#include "csketch/components.hpp"
#include "csketch/data.hpp"
#include "csketch/rng.hpp"
#include "csketch/selection.hpp"
#include "csketch/solver.hpp"
#include "csketch/sphere.hpp"
#include "output.hpp"

namespace {

using namespace csketch;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- components

Outcome component_exactness() {
  Rng rng(derive_seed(kSeed, 1));
  double worst = 0.0;
  int specs = 0;
  for (double tau : {0.5, 0.1, 0.01, 0.001}) {
    for (int rep = 0; rep < 50; ++rep) {
      double a = rng.uniform_open(-0.5, 0.5), b = rng.uniform_open(-0.5, 0.5);
      if (a > b) std::swap(a, b);
      if (b - a < 1e-6) continue;
      const TrapezoidSpec s(a, b, tau);
      ++specs;
      std::set<int> branches;
      for (int i = 0; i <= 2000; ++i) {
        const double t = a - 2 * tau + (b - a + 4 * tau) * i / 2000.0;
        double ref;
        if (t >= a && t <= b) {
          ref = 1.0, branches.insert(1);
        } else if (t <= a - tau || t >= b + tau) {
          ref = 0.0, branches.insert(0);
        } else if (t < a) {
          ref = (t - a + tau) / tau, branches.insert(2);
        } else {
          ref = (b + tau - t) / tau, branches.insert(3);
        }
        worst = std::max(worst, std::abs(trapezoid(t, s) - ref));
      }
      if (branches.size() != 4) return {false, "a spec missed a branch"};
    }
  }
  int dyadic_misses = 0;
  for (int m = 1; m <= 10; ++m) {
    for (int i = 0; i <= (1 << m); ++i) {
      const double t = std::ldexp(i, -m);
      dyadic_misses += square_unit(t, m) != t * t;
    }
  }
  return {worst <= 1e-12 && dyadic_misses == 0,
          "trapezoid max error " + fmt("%.3g", worst) + " over " + std::to_string(specs) +
              " specs (tol 1e-12); dyadic misses " + std::to_string(dyadic_misses)};
}

Outcome square_error_law() {
  double prev = 1.0, worst_gap = 0.0;
  bool decreasing = true;
  for (int m = 1; m <= 10; ++m) {
    double sup = 0.0;
    for (int i = 0; i <= 100000; ++i) {
      const double t = i / 100000.0;
      sup = std::max(sup, std::abs(square_unit(t, m) - t * t));
    }
    worst_gap = std::max(worst_gap, std::abs(sup - std::ldexp(1.0, -2 * m - 2)));
    decreasing = decreasing && sup < prev;
    prev = sup;
  }
  return {worst_gap <= 1e-5 && decreasing,
          "max |sup - 2^(-2m-2)| = " + fmt("%.3g", worst_gap) + " (tol 1e-5), strictly decreasing: " +
              (decreasing ? "yes" : "no")};
}

Outcome product_decay() {
  double worst_ratio = 1e300;
  for (int J : {2, 3, 5}) {
    Rng rng(derive_seed(kSeed, 10 + J));
    std::vector<double> tuples(10000 * J);
    for (double& v : tuples) v = rng.uniform_open(-1.0, 1.0);
    double prev = 0.0;
    for (int m = 1; m <= 10; ++m) {
      const ComponentParams params(m);
      double sup = 0.0;
      for (int s = 0; s < 10000; ++s) {
        const std::span<const double> ts(tuples.data() + s * J, J);
        double exact = 1.0;
        for (double v : ts) exact *= v;
        sup = std::max(sup, std::abs(prodJ(ts, params) - exact));
      }
      if (m > 1) worst_ratio = std::min(worst_ratio, prev / sup);
      prev = sup;
    }
  }
  return {worst_ratio >= 1.9, "smallest error ratio per unit m = " + fmt("%.3f", worst_ratio) + " (need >= 1.9)"};
}

// ---------------------------------------------------------------- sphere

Outcome equal_area_partition() {
  double worst_area = 0.0;
  int min_wins = 20;
  for (int N : {5, 33, 100}) {
    const auto areas = region_areas(zonal_partition(3, N));
    if (static_cast<int>(areas.size()) != N) return {false, "region count mismatch"};
    for (double a : areas) worst_area = std::max(worst_area, std::abs(a - 4 * std::numbers::pi / N));
    const EnergyConfig cfg(3.0);
    const double eq = riesz_energy(eq_points(3, N), cfg);
    int wins = 0;
    for (std::uint64_t s = 1; s <= 20; ++s) wins += eq < riesz_energy(random_points(3, N, derive_seed(kSeed, s)), cfg);
    min_wins = std::min(min_wins, wins);
  }
  return {worst_area <= 1e-9 && min_wins >= 19, "max area error " + fmt("%.3g", worst_area) +
                                                    " (tol 1e-9); fewest EQ energy wins " + std::to_string(min_wins) +
                                                    "/20 (need 19)"};
}

// ---------------------------------------------------------------- solver

Outcome solver_oracle() {
  Rng rng(derive_seed(kSeed, 5));
  auto gauss = [&](Index r, Index c) {
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
    return m;
  };
  double worst = 0.0;
  int deficient = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix A = gauss(5, 7);
    if (trial % 4 == 1) A = gauss(5, 3) * gauss(3, 7);
    if (trial % 4 == 2) A.col(6) = A.col(0);
    if (trial % 4 == 3) A.row(4) = 0.5 * A.row(1) - A.row(3);
    const Vector y = gauss(5, 1);
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    Vector ref = Vector::Zero(7);
    int rank = 0;
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) <= 1e-10 * s(0)) continue;
      ++rank;
      ref += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(y) / s(i));
    }
    deficient += rank < 5;
    worst = std::max(worst, (fit(A, y).coefficients - ref).norm());
  }
  return {worst <= 1e-9,
          "max |a - pinv(A) y| = " + fmt("%.3g", worst) + " over 100 systems (" + std::to_string(deficient) +
              " rank-deficient), tol 1e-9"};
}

// ---------------------------------------------------------------- regression

SelectionOptions selection_options(std::uint64_t seed, int repeats) {
  SelectionOptions o;
  o.m = 20;
  o.seed = seed;
  o.repeats = repeats;
  o.refit_full = true;
  return o;
}

struct PerJ {
  int J = 0;
  Candidate chosen;
  double validation_rmse = 0.0;
  double test_rmse = 0.0;
};

// Grid search run one J at a time so each J's own winner can be scored too.
std::vector<PerJ> search_by_J(const Dataset& train, const Dataset& test, SearchGrid grid, const SelectionOptions& opt,
                              std::ostream& log) {
  std::vector<PerJ> out;
  const std::vector<int> Js = grid.J;
  for (int J : Js) {
    grid.J = {J};
    const auto start = Clock::now();
    const SelectionResult r = grid_search(train, grid, opt);
    PerJ p{J, r.chosen, std::sqrt(r.chosen_mse), rmse(predict(r.model, test.X), test.y)};
    log << "  J=" << J << ": " << r.cells.size() << " cells, chose n=" << p.chosen.n << " N=" << p.chosen.N
        << " tau=" << p.chosen.tau << ", validation " << fmt("%.4g", p.validation_rmse) << ", test "
        << fmt("%.4g", p.test_rmse) << " ("
        << fmt("%.0f", std::chrono::duration<double>(Clock::now() - start).count()) << " s)\n";
    out.push_back(p);
  }
  return out;
}

PerJ validation_winner(const std::vector<PerJ>& rows) {
  return *std::min_element(rows.begin(), rows.end(), [](const PerJ& a, const PerJ& b) {
    return a.validation_rmse < b.validation_rmse;
  });
}

SearchGrid desk_grid() {
  SearchGrid g;
  g.J = {1, 2, 3, 4};
  g.n = {2, 4, 6, 8, 10};
  g.N = {40, 80, 120, 200};
  g.tau = {0.1, 0.5};
  g.max_dimension = 2400;
  return g;
}

std::vector<PerJ> f1_clean_sweep(std::ostream& log) {
  static std::vector<PerJ> cached;
  if (cached.empty()) {
    const Dataset train = make_dataset(SyntheticTarget::f1, 2000, 0.0, derive_seed(kSeed, 60));
    const Dataset test = make_dataset(SyntheticTarget::f1, 1000, 0.0, derive_seed(kSeed, 61));
    cached = search_by_J(train, test, desk_grid(), selection_options(derive_seed(kSeed, 62), 1), log);
  }
  return cached;
}

Outcome f1_noiseless(std::ostream& log) {
  const PerJ w = validation_winner(f1_clean_sweep(log));
  return {w.test_rmse <= 3e-3, "selected J=" + std::to_string(w.J) + " n=" + std::to_string(w.chosen.n) +
                                   " N=" + std::to_string(w.chosen.N) + " tau=" + fmt("%g", w.chosen.tau) +
                                   ", test RMSE " + fmt("%.3e", w.test_rmse) + " (need <= 3e-3)"};
}

Outcome f1_noisy(std::ostream& log) {
  const Dataset train = make_dataset(SyntheticTarget::f1, 2000, 0.1, derive_seed(kSeed, 70));
  const Dataset test = make_dataset(SyntheticTarget::f1, 1000, 0.0, derive_seed(kSeed, 71));
  SearchGrid g;
  g.J = {1, 2, 3};
  g.n = {1, 2, 3, 4, 6};
  g.N = {10, 20, 40, 80, 120};
  g.tau = {0.1, 0.5};
  const PerJ w = validation_winner(search_by_J(train, test, g, selection_options(derive_seed(kSeed, 72), 5), log));
  return {w.test_rmse <= 2.5e-2, "selected J=" + std::to_string(w.J) + " n=" + std::to_string(w.chosen.n) +
                                     " N=" + std::to_string(w.chosen.N) + " tau=" + fmt("%g", w.chosen.tau) +
                                     ", test RMSE " + fmt("%.3e", w.test_rmse) + " (need <= 2.5e-2)"};
}

Outcome f2_noiseless(std::ostream& log) {
  const Dataset train = make_dataset(SyntheticTarget::f2, 2000, 0.0, derive_seed(kSeed, 80));
  const Dataset test = make_dataset(SyntheticTarget::f2, 1000, 0.0, derive_seed(kSeed, 81));
  const PerJ w = validation_winner(search_by_J(train, test, desk_grid(), selection_options(derive_seed(kSeed, 82), 1), log));
  return {w.test_rmse <= 5e-2, "selected J=" + std::to_string(w.J) + " n=" + std::to_string(w.chosen.n) +
                                   " N=" + std::to_string(w.chosen.N) + " tau=" + fmt("%g", w.chosen.tau) +
                                   ", test RMSE " + fmt("%.3e", w.test_rmse) + " (need <= 5e-2)"};
}

Outcome frequency_effect(std::ostream& log) {
  const std::vector<PerJ> rows = f1_clean_sweep(log);
  double j1 = 0.0, higher = 1e300;
  int best_J = 0;
  for (const PerJ& p : rows) {
    if (p.J == 1) {
      j1 = p.test_rmse;
    } else if (p.test_rmse < higher) {
      higher = p.test_rmse;
      best_J = p.J;
    }
  }
  const double drop = 1.0 - higher / j1;
  return {drop >= 0.25, "J=1 test RMSE " + fmt("%.3e", j1) + ", best J>=2 (J=" + std::to_string(best_J) + ") " +
                            fmt("%.3e", higher) + ", drop " + fmt("%.1f", 100 * drop) + "% (need >= 25%)"};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("csketch_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Outcome component_vs_random(std::ostream& log) {
  cli::BenchConfig cfg;
  cfg.experiment = cli::Experiment::sim2;
  cfg.trials = 5;
  cfg.seed = kSeed;
  cfg.noise = {0.0, 0.01, 0.1};
  cfg.targets = {SyntheticTarget::f1};
  cfg.grid.J = {1};
  cfg.grid.n = {2, 4, 6, 8, 10};
  cfg.grid.N = {20, 40, 80, 120};
  cfg.grid.tau = {0.1, 0.5};
  cfg.grid.max_dimension = 0;
  const fs::path dir = scratch_dir("sim2");
  const cli::BenchResult res = cli::run_bench(cfg, cli::OutputDir(dir), log);
  std::map<double, std::map<std::string, double>> best;
  for (const cli::Optimum& o : res.optima) best[o.delta][o.method] = o.mean;
  int wins = 0;
  std::string detail;
  for (const auto& [delta, m] : best) {
    const double c = m.at("component"), r = m.at("random");
    wins += c <= r;
    detail += " delta=" + fmt("%g", delta) + ": " + fmt("%.3e", c) + " vs " + fmt("%.3e", r) + ";";
  }
  fs::remove_all(dir);
  return {wins >= 2 && best.size() == 3,
          "component <= random at " + std::to_string(wins) + "/3 noise levels (need 2), mean over 5 trials:" + detail};
}

Outcome holdout_optimality(std::ostream& log) {
  const Dataset data = make_dataset(SyntheticTarget::f1, 2000, 0.0, derive_seed(kSeed, 110));
  const Dataset test = make_dataset(SyntheticTarget::f1, 1000, 0.0, derive_seed(kSeed, 111));
  SelectionOptions opt;
  opt.m = 20;
  opt.seed = derive_seed(kSeed, 112);
  const SelectionResult r = holdout_select(data, 2, 0.5, opt);
  const double chosen = rmse(predict(r.model, test.X), test.y);
  const Dataset first = subset(data, r.splits.front().train);
  double best = 1e300;
  int best_n = 0;
  for (int n : holdout_candidates(data.size(), data.dim())) {
    SketchConfig c;
    c.J = 2;
    c.n = n;
    c.N = n * n;
    c.tau = 0.5;
    c.m = 20;
    const double e = rmse(predict(fit_model(first, make_spec(c)), test.X), test.y);
    log << "  n=" << n << " N=" << c.N << ": test " << fmt("%.4g", e) << '\n';
    if (e < best) best = e, best_n = n;
  }
  return {chosen <= 1.5 * best, "hold-out chose n=" + std::to_string(r.chosen.n) + " with test RMSE " +
                                    fmt("%.3e", chosen) + "; exhaustive best n=" + std::to_string(best_n) + " " +
                                    fmt("%.3e", best) + ", ratio " + fmt("%.3f", chosen / best) + " (need <= 1.5)"};
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), dir).string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

Outcome determinism(std::ostream& log) {
  int files = 0, differing = 0;
  for (cli::Experiment exp : {cli::Experiment::sim2, cli::Experiment::sim3, cli::Experiment::sim4}) {
    cli::BenchConfig cfg;
    cfg.experiment = exp;
    cfg.trials = 2;
    cfg.seed = kSeed;
    cfg.train_size = 400;
    cfg.test_size = 200;
    cfg.noise = {0.0, 0.1};
    cfg.grid.J = {1, 2};
    cfg.grid.n = {2, 4};
    cfg.grid.N = {10, 20};
    cfg.grid.tau = {0.1, 0.5};
    std::map<std::string, std::string> runs[2];
    for (int i = 0; i < 2; ++i) {
      const fs::path dir = scratch_dir("det" + std::to_string(i));
      std::ostringstream quiet;
      cli::run_bench(cfg, cli::OutputDir(dir), quiet);
      runs[i] = csv_files(dir);
      fs::remove_all(dir);
    }
    for (const auto& [name, bytes] : runs[0]) {
      ++files;
      const auto it = runs[1].find(name);
      if (it == runs[1].end() || it->second != bytes) {
        ++differing;
        log << "  differs: " << name << '\n';
      }
    }
    differing += runs[0].size() != runs[1].size();
  }
  return {differing == 0 && files > 0,
          std::to_string(files) + " CSV files across sim2/sim3/sim4 reruns, " + std::to_string(differing) + " differ"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "component exactness", [](std::ostream&) { return component_exactness(); }},
      {2, "square error law", [](std::ostream&) { return square_error_law(); }},
      {3, "product error decay", [](std::ostream&) { return product_decay(); }},
      {4, "equal-area partition", [](std::ostream&) { return equal_area_partition(); }},
      {5, "solver oracle equivalence", [](std::ostream&) { return solver_oracle(); }},
      {6, "f1 noiseless regression", f1_noiseless},
      {7, "f1 noisy regression", f1_noisy},
      {8, "f2 noiseless regression", f2_noiseless},
      {9, "frequency-parameter effect", frequency_effect},
      {10, "component vs random sketching", component_vs_random},
      {11, "hold-out optimality", holdout_optimality},
      {12, "bench determinism", determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run(std::cerr);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << fmt("%.1f", secs) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
