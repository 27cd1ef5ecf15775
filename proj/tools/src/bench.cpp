#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "csketch/csv.hpp"
#include "csketch/rng.hpp"
#include "errors.hpp"
#include "json.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace csketch::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string target_name(SyntheticTarget t) { return t == SyntheticTarget::f1 ? "f1" : "f2"; }

std::string method_name(SketchMode mode) { return mode == SketchMode::equal_area ? "component" : "random"; }

std::vector<int> range_int(int lo, int hi, int step = 1) {
  std::vector<int> v;
  for (int i = lo; i <= hi; i += step) v.push_back(i);
  return v;
}

std::vector<Candidate> expand(const BenchGrid& g, int& skipped) {
  std::vector<Candidate> cells;
  skipped = 0;
  for (int J : g.J) {
    for (int n : g.n) {
      for (int N : g.N) {
        for (double tau : g.tau) {
          if (g.max_dimension > 0 && static_cast<Index>(J) * n * N > g.max_dimension) {
            ++skipped;
            continue;
          }
          cells.push_back({J, n, N, tau});
        }
      }
    }
  }
  if (cells.empty()) throw UsageError("bench grid is empty after applying the dimension cap");
  return cells;
}

SketchSpec cell_spec(const Candidate& c, int dim, SketchMode mode, int m, std::uint64_t seed) {
  SketchConfig cfg;
  cfg.dim = dim;
  cfg.J = c.J;
  cfg.n = c.n;
  cfg.N = c.N;
  cfg.tau = c.tau;
  cfg.m = m;
  cfg.mode = mode;
  cfg.seed = seed;
  return make_spec(cfg);
}

// trial seed tree: master -> target -> trial -> role
std::uint64_t trial_seed(std::uint64_t master, int target_id, int trial) {
  return derive_seed(derive_seed(master, static_cast<std::uint64_t>(target_id)), static_cast<std::uint64_t>(trial));
}
constexpr std::uint64_t kTrainRole = 0;
constexpr std::uint64_t kTestRole = 1;
constexpr std::uint64_t kSplitRole = 2;
constexpr std::uint64_t kSketchRole = 1000;

double truncated_rmse(const Matrix& phi, const Vector& coef, double M, const Vector& truth) {
  Vector pred = phi * coef;
  for (Index i = 0; i < pred.size(); ++i) pred(i) = M > 0.0 ? truncate(pred(i), M) : 0.0;
  return rmse(pred, truth);
}

double max_abs(const Vector& y) { return y.size() ? y.cwiseAbs().maxCoeff() : 0.0; }

/// Training sets for every noise level share their inputs; only y differs.
struct Problem {
  std::string target;
  int dim = 0;
  std::vector<double> deltas;
  std::vector<Dataset> train;  ///< one per delta
  Dataset test;
};

Problem synthetic_problem(SyntheticTarget target, const BenchConfig& cfg, std::uint64_t seed) {
  Problem p;
  p.target = target_name(target);
  p.dim = target_dim(target);
  p.deltas = cfg.noise;
  for (double delta : cfg.noise) {
    p.train.push_back(make_dataset(target, cfg.train_size, delta, derive_seed(seed, kTrainRole)));
  }
  p.test = make_dataset(target, cfg.test_size, 0.0, derive_seed(seed, kTestRole));
  return p;
}

Matrix stacked_targets(const std::vector<Dataset>& sets, const std::vector<Index>* rows) {
  const Index p = rows ? static_cast<Index>(rows->size()) : sets.front().size();
  Matrix Y(p, static_cast<Index>(sets.size()));
  for (std::size_t k = 0; k < sets.size(); ++k) {
    Y.col(static_cast<Index>(k)) = rows ? Vector(sets[k].y(*rows)) : sets[k].y;
  }
  return Y;
}

// Every cell fitted on the full training set and scored on the test set.
void sweep(const Problem& prob, const std::vector<Candidate>& cells, SketchMode mode, int trial, std::uint64_t seed,
           const BenchConfig& cfg, std::vector<TrialRecord>& out) {
  const Matrix Y = stacked_targets(prob.train, nullptr);
  std::vector<double> M(prob.deltas.size());
  for (std::size_t k = 0; k < M.size(); ++k) M[k] = max_abs(prob.train[k].y);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const SketchSpec spec = cell_spec(cells[c], prob.dim, mode, cfg.m, derive_seed(seed, kSketchRole + c));
    const auto start = Clock::now();
    const Matrix phi = design_matrix(prob.train.front().X, spec);
    MultiFitResult fitted;
    bool ok = true;
    try {
      fitted = fit_columns(phi, Y, cfg.fit);
    } catch (const NumericalError&) {
      ok = false;
    }
    const double fit_seconds = seconds_since(start);
    const Matrix phi_test = ok ? design_matrix(prob.test.X, spec) : Matrix();
    for (std::size_t k = 0; k < prob.deltas.size(); ++k) {
      TrialRecord r;
      r.target = prob.target;
      r.delta = prob.deltas[k];
      r.method = method_name(mode);
      r.trial = trial;
      r.cell = cells[c];
      r.test_rmse = ok ? truncated_rmse(phi_test, fitted.coefficients.col(static_cast<Index>(k)), M[k], prob.test.y)
                       : std::numeric_limits<double>::infinity();
      r.fit_seconds = fit_seconds;
      out.push_back(r);
    }
  }
}

// Hold-out choice per noise level over the grid, then a refit of the chosen
// cell on the whole training set, scored on the test set.
void select_and_score(const Problem& prob, const std::vector<Candidate>& cells, SketchMode mode, int trial,
                      std::uint64_t seed, const BenchConfig& cfg, std::vector<TrialRecord>& out) {
  const Split split = make_split(prob.train.front().size(), cfg.train_fraction, derive_seed(seed, kSplitRole));
  const Matrix Ytr = stacked_targets(prob.train, &split.train);
  const Matrix Yval = stacked_targets(prob.train, &split.validation);
  const std::size_t K = prob.deltas.size();
  std::vector<double> M(K);
  for (std::size_t k = 0; k < K; ++k) M[k] = max_abs(Ytr.col(static_cast<Index>(k)));

  std::vector<double> best_mse(K, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best(K, cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const SketchSpec spec = cell_spec(cells[c], prob.dim, mode, cfg.m, derive_seed(seed, kSketchRole + c));
    const Matrix phi = design_matrix(prob.train.front().X, spec);
    const Matrix phi_tr = phi(split.train, Eigen::all);
    const Matrix phi_val = phi(split.validation, Eigen::all);
    MultiFitResult fitted;
    try {
      fitted = fit_columns(phi_tr, Ytr, cfg.fit);
    } catch (const NumericalError&) {
      continue;
    }
    for (std::size_t k = 0; k < K; ++k) {
      const double r = truncated_rmse(phi_val, fitted.coefficients.col(static_cast<Index>(k)), M[k],
                                      Yval.col(static_cast<Index>(k)));
      const double mse = r * r;
      if (mse < best_mse[k] || (mse == best_mse[k] && best[k] < cells.size() && lower_capacity(cells[c], cells[best[k]]))) {
        best_mse[k] = mse;
        best[k] = c;
      }
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (best[k] == cells.size()) throw NumericalError("every grid cell failed to fit");
    const SketchSpec spec = cell_spec(cells[best[k]], prob.dim, mode, cfg.m, derive_seed(seed, kSketchRole + best[k]));
    const FittedModel model = fit_model(prob.train[k], spec, cfg.fit);
    TrialRecord r;
    r.target = prob.target;
    r.delta = prob.deltas[k];
    r.method = method_name(mode);
    r.trial = trial;
    r.cell = cells[best[k]];
    r.validation_rmse = std::sqrt(best_mse[k]);
    r.test_rmse = rmse(predict(model, prob.test.X), prob.test.y);
    r.fit_seconds = model.diagnostics.fit_seconds;
    out.push_back(r);
  }
}

CsvTable take_rows(const CsvTable& t, const std::vector<Index>& rows) {
  CsvTable out;
  out.header = t.header;
  out.values = t.values(rows, Eigen::all);
  return out;
}

/// Rows pushed outside the ball by test-only extremes are scaled back onto it.
int clip_to_ball(RowMatrix& X) {
  int clipped = 0;
  for (Index i = 0; i < X.rows(); ++i) {
    const double r = X.row(i).norm();
    if (r > 0.5) {
      X.row(i) *= 0.5 / r;
      ++clipped;
    }
  }
  return clipped;
}

Problem real_problem(const BenchConfig& cfg, const CsvTable& train_table, const CsvTable* test_table,
                     std::uint64_t seed, int& clipped) {
  CsvTable fit_part = train_table;
  CsvTable test_part;
  if (test_table) {
    test_part = *test_table;
  } else {
    const Split s = make_split(train_table.values.rows(), 0.8, derive_seed(seed, kTestRole));
    fit_part = take_rows(train_table, s.train);
    test_part = take_rows(train_table, s.validation);
  }
  Problem p;
  p.target = std::filesystem::path(cfg.train_csv).stem().string();
  p.deltas = {0.0};
  p.train.push_back(ingest_table(fit_part, cfg.target_column, cfg.log_transform));
  p.dim = p.train.front().dim();
  p.test.prep = p.train.front().prep;
  p.test.X = transform_inputs(test_part, p.test.prep);
  clipped += clip_to_ball(p.test.X);
  p.test.y = transform_targets(test_part.values.col(test_part.column(cfg.target_column)), p.test.prep);
  return p;
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

using CellKey = std::tuple<std::string, double, std::string, int, int, int, double>;

std::vector<CellStat> aggregate_cells(const std::vector<TrialRecord>& records) {
  std::map<CellKey, std::vector<double>> groups;
  std::vector<CellKey> order;
  for (const TrialRecord& r : records) {
    CellKey key{r.target, r.delta, r.method, r.cell.J, r.cell.n, r.cell.N, r.cell.tau};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(r.test_rmse);
  }
  std::vector<CellStat> out;
  for (const CellKey& key : order) {
    const std::vector<double>& v = groups[key];
    CellStat s;
    s.target = std::get<0>(key);
    s.delta = std::get<1>(key);
    s.method = std::get<2>(key);
    s.cell = {std::get<3>(key), std::get<4>(key), std::get<5>(key), std::get<6>(key)};
    double sum = 0.0;
    for (double x : v) sum += x;
    s.trials = static_cast<int>(v.size());
    s.mean = sum / s.trials;
    s.std = sample_std(v, s.mean);
    out.push_back(s);
  }
  return out;
}

bool better(const CellStat& a, const Optimum& incumbent) {
  if (!(incumbent.trials > 0)) return true;
  if (a.mean != incumbent.mean) return a.mean < incumbent.mean;
  return lower_capacity(a.cell, incumbent.cell);
}

std::vector<Optimum> grid_optima(const std::vector<CellStat>& cells, bool per_J) {
  std::map<std::tuple<std::string, double, std::string, int>, Optimum> best;
  std::vector<std::tuple<std::string, double, std::string, int>> order;
  for (const CellStat& c : cells) {
    const int J = per_J ? c.cell.J : 0;
    auto key = std::make_tuple(c.target, c.delta, c.method, J);
    auto [it, inserted] = best.try_emplace(key);
    if (inserted) order.push_back(key);
    if (better(c, it->second)) it->second = {c.target, c.delta, c.method, J, c.cell, c.mean, c.std, c.trials, 0.0};
  }
  std::vector<Optimum> out;
  for (const auto& key : order) out.push_back(best[key]);
  return out;
}

std::vector<Optimum> selection_optima(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<std::string, double, std::string>;
  std::map<Key, std::vector<const TrialRecord*>> groups;
  std::vector<Key> order;
  for (const TrialRecord& r : records) {
    Key key{r.target, r.delta, r.method};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<Optimum> out;
  for (const Key& key : order) {
    const auto& rs = groups[key];
    Optimum o;
    o.target = std::get<0>(key);
    o.delta = std::get<1>(key);
    o.method = std::get<2>(key);
    std::vector<double> v;
    double fit = 0.0;
    std::vector<std::pair<Candidate, int>> votes;
    for (const TrialRecord* r : rs) {
      v.push_back(r->test_rmse);
      fit += r->fit_seconds;
      auto it = std::find_if(votes.begin(), votes.end(), [&](const auto& p) { return p.first == r->cell; });
      if (it == votes.end()) {
        votes.push_back({r->cell, 1});
      } else {
        ++it->second;
      }
    }
    o.trials = static_cast<int>(v.size());
    for (double x : v) o.mean += x;
    o.mean /= o.trials;
    o.std = sample_std(v, o.mean);
    o.mean_fit_seconds = fit / o.trials;
    const auto top = std::min_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return lower_capacity(a.first, b.first);
    });
    o.cell = top->first;
    out.push_back(o);
  }
  return out;
}

const CellStat* find_cell(const std::vector<CellStat>& cells, const Optimum& o, const Candidate& c) {
  for (const CellStat& s : cells) {
    if (s.target == o.target && s.delta == o.delta && s.method == o.method && s.cell == c) return &s;
  }
  return nullptr;
}

std::string delta_label(double d) { return "delta=" + format_double(d); }

class Emitter {
 public:
  Emitter(const OutputDir& out, std::string dir, BenchResult& result) : out_(out), dir_(std::move(dir)), result_(result) {}

  std::ofstream open(const std::string& name) {
    result_.files.push_back(dir_ + "/" + name);
    return out_.open(dir_ + "/" + name);
  }

  void svg(const std::string& name, const LineChart& chart) {
    std::ofstream f = open(name);
    f << render_svg(chart);
  }

 private:
  const OutputDir& out_;
  std::string dir_;
  BenchResult& result_;
};

void write_record_header(std::ostream& o, bool with_validation) {
  o << "target,delta,method,trial,J,n,N,tau,test_rmse" << (with_validation ? ",validation_rmse" : "") << '\n';
}

void write_record(std::ostream& o, const TrialRecord& r, bool with_validation) {
  o << r.target << ',' << format_double(r.delta) << ',' << r.method << ',' << r.trial << ',' << r.cell.J << ','
    << r.cell.n << ',' << r.cell.N << ',' << format_double(r.cell.tau) << ',' << format_double(r.test_rmse);
  if (with_validation) o << ',' << format_double(r.validation_rmse);
  o << '\n';
}

void write_cells(std::ostream& o, const std::vector<CellStat>& cells) {
  o << "target,delta,method,J,n,N,tau,mean_rmse,std_rmse,trials\n";
  for (const CellStat& c : cells) {
    o << c.target << ',' << format_double(c.delta) << ',' << c.method << ',' << c.cell.J << ',' << c.cell.n << ','
      << c.cell.N << ',' << format_double(c.cell.tau) << ',' << format_double(c.mean) << ',' << format_double(c.std)
      << ',' << c.trials << '\n';
  }
}

void write_optima(std::ostream& o, const std::vector<Optimum>& optima) {
  o << "target,delta,method,J_group,J,n,N,tau,mean_rmse,std_rmse,trials\n";
  for (const Optimum& c : optima) {
    o << c.target << ',' << format_double(c.delta) << ',' << c.method << ',' << c.J << ',' << c.cell.J << ','
      << c.cell.n << ',' << c.cell.N << ',' << format_double(c.cell.tau) << ',' << format_double(c.mean) << ','
      << format_double(c.std) << ',' << c.trials << '\n';
  }
}

// One-parameter slices through the optimum, as in the sketching comparison figure.
void emit_sim2_curves(Emitter& em, const BenchResult& res) {
  std::ofstream o = em.open("curves.csv");
  o << "target,delta,method,parameter,value,mean_rmse,std_rmse,trials\n";
  std::map<std::pair<std::string, std::string>, LineChart> charts;
  std::vector<std::pair<std::string, std::string>> chart_order;
  const auto& g = res.config.grid;
  for (const Optimum& opt : res.optima) {
    for (const std::string param : {"N", "n", "tau"}) {
      Series s;
      s.label = opt.method + " " + delta_label(opt.delta);
      const std::size_t count = param == "N" ? g.N.size() : param == "n" ? g.n.size() : g.tau.size();
      for (std::size_t i = 0; i < count; ++i) {
        Candidate c = opt.cell;
        double value = 0.0;
        if (param == "N") value = c.N = g.N[i];
        if (param == "n") value = c.n = g.n[i];
        if (param == "tau") value = c.tau = g.tau[i];
        const CellStat* cs = find_cell(res.cells, opt, c);
        if (!cs) continue;
        o << opt.target << ',' << format_double(opt.delta) << ',' << opt.method << ',' << param << ','
          << format_double(value) << ',' << format_double(cs->mean) << ',' << format_double(cs->std) << ','
          << cs->trials << '\n';
        s.x.push_back(value);
        s.y.push_back(cs->mean);
      }
      auto key = std::make_pair(opt.target, std::string(param));
      auto [it, inserted] = charts.try_emplace(key);
      if (inserted) {
        chart_order.push_back(key);
        it->second.title = "sim2 " + opt.target + ": test RMSE vs " + param + " (others at optimum)";
        it->second.x_label = param;
        it->second.y_label = "test RMSE";
        it->second.log_y = true;
      }
      it->second.series.push_back(std::move(s));
    }
  }
  for (const auto& key : chart_order) em.svg("sim2_" + key.first + "_" + key.second + ".svg", charts[key]);

  std::map<std::string, LineChart> best;
  std::vector<std::string> targets;
  for (const Optimum& opt : res.optima) {
    auto [it, inserted] = best.try_emplace(opt.target);
    if (inserted) {
      targets.push_back(opt.target);
      it->second.title = "sim2 " + opt.target + ": grid-optimal test RMSE";
      it->second.x_label = "noise delta";
      it->second.y_label = "test RMSE";
      it->second.log_y = true;
    }
    auto& series = it->second.series;
    auto s = std::find_if(series.begin(), series.end(), [&](const Series& x) { return x.label == opt.method; });
    if (s == series.end()) {
      series.push_back({opt.method, {}, {}});
      s = series.end() - 1;
    }
    s->x.push_back(opt.delta);
    s->y.push_back(opt.mean);
  }
  for (const std::string& t : targets) em.svg("sim2_" + t + "_best.svg", best[t]);
}

void emit_sim3_curves(Emitter& em, const BenchResult& res) {
  // best over (n, N) for each (target, delta, tau, J)
  std::ofstream o = em.open("curves.csv");
  o << "target,delta,tau,J,n,N,mean_rmse,std_rmse,trials\n";
  using Key = std::tuple<std::string, double, double, int>;
  std::map<Key, const CellStat*> best;
  std::vector<Key> order;
  for (const CellStat& c : res.cells) {
    Key key{c.target, c.delta, c.cell.tau, c.cell.J};
    auto [it, inserted] = best.try_emplace(key, &c);
    if (inserted) {
      order.push_back(key);
    } else if (c.mean < it->second->mean || (c.mean == it->second->mean && lower_capacity(c.cell, it->second->cell))) {
      it->second = &c;
    }
  }
  std::sort(order.begin(), order.end());
  std::map<std::pair<std::string, double>, LineChart> charts;
  std::vector<std::pair<std::string, double>> chart_order;
  for (const Key& key : order) {
    const CellStat* c = best[key];
    o << c->target << ',' << format_double(c->delta) << ',' << format_double(c->cell.tau) << ',' << c->cell.J << ','
      << c->cell.n << ',' << c->cell.N << ',' << format_double(c->mean) << ',' << format_double(c->std) << ','
      << c->trials << '\n';
    auto ck = std::make_pair(c->target, c->delta);
    auto [it, inserted] = charts.try_emplace(ck);
    if (inserted) {
      chart_order.push_back(ck);
      it->second.title = "sim3 " + c->target + " " + delta_label(c->delta) + ": test RMSE vs J";
      it->second.x_label = "J";
      it->second.y_label = "test RMSE";
      it->second.log_y = true;
    }
    const std::string label = "tau=" + format_double(c->cell.tau);
    auto& series = it->second.series;
    auto s = std::find_if(series.begin(), series.end(), [&](const Series& x) { return x.label == label; });
    if (s == series.end()) {
      series.push_back({label, {}, {}});
      s = series.end() - 1;
    }
    s->x.push_back(c->cell.J);
    s->y.push_back(c->mean);
  }
  for (std::size_t i = 0; i < chart_order.size(); ++i) {
    const auto& noise = res.config.noise;
    const auto idx = std::find(noise.begin(), noise.end(), chart_order[i].second) - noise.begin();
    em.svg("sim3_" + chart_order[i].first + "_delta" + std::to_string(idx) + ".svg", charts[chart_order[i]]);
  }

  std::map<std::string, LineChart> byJ;
  std::vector<std::string> targets;
  for (const Optimum& opt : res.optima) {
    auto [it, inserted] = byJ.try_emplace(opt.target);
    if (inserted) {
      targets.push_back(opt.target);
      it->second.title = "sim3 " + opt.target + ": grid-optimal test RMSE vs J";
      it->second.x_label = "J";
      it->second.y_label = "test RMSE";
      it->second.log_y = true;
    }
    const std::string label = delta_label(opt.delta);
    auto& series = it->second.series;
    auto s = std::find_if(series.begin(), series.end(), [&](const Series& x) { return x.label == label; });
    if (s == series.end()) {
      series.push_back({label, {}, {}});
      s = series.end() - 1;
    }
    s->x.push_back(opt.J);
    s->y.push_back(opt.mean);
  }
  for (const std::string& t : targets) em.svg("sim3_" + t + "_J.svg", byJ[t]);
}

void emit_selection_charts(Emitter& em, const BenchResult& res, const std::string& prefix) {
  std::map<std::string, LineChart> charts;
  std::vector<std::string> targets;
  for (const Optimum& opt : res.optima) {
    auto [it, inserted] = charts.try_emplace(opt.target);
    if (inserted) {
      targets.push_back(opt.target);
      it->second.title = prefix + " " + opt.target + ": test RMSE of the hold-out choice";
      it->second.x_label = "noise delta";
      it->second.y_label = "test RMSE";
      it->second.log_y = true;
    }
    auto& series = it->second.series;
    auto s = std::find_if(series.begin(), series.end(), [&](const Series& x) { return x.label == opt.method; });
    if (s == series.end()) {
      series.push_back({opt.method, {}, {}});
      s = series.end() - 1;
    }
    s->x.push_back(opt.delta);
    s->y.push_back(opt.mean);
  }
  for (const std::string& t : targets) em.svg(prefix + "_" + t + ".svg", charts[t]);
}

json grid_json(const BenchGrid& g) {
  return json{{"J", g.J}, {"n", g.n}, {"N", g.N}, {"tau", g.tau}, {"max_dimension", g.max_dimension}};
}

}  // namespace

Experiment parse_experiment(const std::string& text) {
  if (text == "sim2") return Experiment::sim2;
  if (text == "sim3") return Experiment::sim3;
  if (text == "sim4") return Experiment::sim4;
  if (text == "real") return Experiment::real;
  throw UsageError("unknown experiment '" + text + "' (expected sim2, sim3, sim4 or real)");
}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::sim2: return "sim2";
    case Experiment::sim3: return "sim3";
    case Experiment::sim4: return "sim4";
    case Experiment::real: return "real";
  }
  return "sim2";
}

BenchConfig with_defaults(BenchConfig c) {
  if (c.trials < 1) throw UsageError("trial count must be >= 1");
  if (c.train_size < 2 || c.test_size < 1) throw UsageError("train size must be >= 2 and test size >= 1");
  if (c.noise.empty()) c.noise = c.experiment == Experiment::real ? std::vector<double>{0.0}
                                                                   : std::vector<double>{0.0, 0.01, 0.1, 0.3, 0.5};
  for (double d : c.noise) {
    if (!(d >= 0.0)) throw UsageError("noise levels must be >= 0");
  }
  if (c.targets.empty()) c.targets = {SyntheticTarget::f1, SyntheticTarget::f2};
  BenchGrid& g = c.grid;
  if (g.J.empty()) g.J = c.experiment == Experiment::sim2 ? std::vector<int>{1} : range_int(1, 5);
  if (c.full) {
    if (g.n.empty()) g.n = range_int(1, 10);
    if (g.N.empty()) g.N = range_int(10, 400, 10);
    if (g.tau.empty()) g.tau = {0.001, 0.01, 0.1, 0.3, 0.5};
    if (g.max_dimension < 0) g.max_dimension = 0;
  } else {
    if (g.n.empty()) g.n = {1, 2, 4, 6, 8, 10};
    if (g.N.empty()) g.N = {10, 20, 40, 80, 120, 200};
    if (g.tau.empty()) g.tau = {0.1, 0.3, 0.5};
    if (g.max_dimension < 0) g.max_dimension = 2400;
  }
  if (c.m < 1) throw UsageError("component depth m must be >= 1");
  if (c.experiment == Experiment::real && c.train_csv.empty()) throw UsageError("the real experiment needs --train-csv");
  return c;
}

BenchResult run_bench(const BenchConfig& raw, const OutputDir& out, std::ostream& log) {
  BenchResult res;
  res.config = with_defaults(raw);
  res.experiment = res.config.experiment;
  const BenchConfig& cfg = res.config;
  const std::string name = to_string(cfg.experiment);
  const std::vector<Candidate> cells = expand(cfg.grid, res.skipped_cells);
  const bool selection = cfg.experiment == Experiment::sim4 || cfg.experiment == Experiment::real;
  Emitter em(out, name, res);

  std::ofstream trials_csv = em.open("trials.csv");
  write_record_header(trials_csv, selection);
  const auto started = Clock::now();

  std::vector<SketchMode> modes{SketchMode::equal_area};
  if (cfg.experiment != Experiment::sim3) modes.push_back(SketchMode::random);

  int clipped = 0;
  CsvTable real_train, real_test;
  if (cfg.experiment == Experiment::real) {
    real_train = read_csv(cfg.train_csv);
    if (!cfg.test_csv.empty()) real_test = read_csv(cfg.test_csv);
  }
  const std::size_t n_targets = cfg.experiment == Experiment::real ? 1 : cfg.targets.size();

  for (std::size_t ti = 0; ti < n_targets; ++ti) {
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const int target_id = cfg.experiment == Experiment::real ? 100 : static_cast<int>(cfg.targets[ti]) + 1;
      const std::uint64_t seed = trial_seed(cfg.seed, target_id, trial);
      const Problem prob = cfg.experiment == Experiment::real
                               ? real_problem(cfg, real_train, cfg.test_csv.empty() ? nullptr : &real_test, seed, clipped)
                               : synthetic_problem(cfg.targets[ti], cfg, seed);
      for (SketchMode mode : modes) {
        const auto t0 = Clock::now();
        std::vector<TrialRecord> recs;
        if (selection) {
          select_and_score(prob, cells, mode, trial, seed, cfg, recs);
        } else {
          sweep(prob, cells, mode, trial, seed, cfg, recs);
        }
        for (const TrialRecord& r : recs) write_record(trials_csv, r, selection);
        trials_csv.flush();
        res.records.insert(res.records.end(), recs.begin(), recs.end());
        log << name << ' ' << prob.target << " trial " << trial + 1 << '/' << cfg.trials << ' ' << method_name(mode)
            << ": " << cells.size() << " cells in " << format_double(seconds_since(t0)) << " s\n";
      }
    }
  }
  trials_csv.close();

  if (selection) {
    res.optima = selection_optima(res.records);
    std::ofstream o = em.open("optima.csv");
    write_optima(o, res.optima);
    o.close();
    emit_selection_charts(em, res, name);
  } else {
    res.cells = aggregate_cells(res.records);
    res.optima = grid_optima(res.cells, cfg.experiment == Experiment::sim3);
    std::ofstream c = em.open("cells.csv");
    write_cells(c, res.cells);
    c.close();
    std::ofstream o = em.open("optima.csv");
    write_optima(o, res.optima);
    o.close();
    if (cfg.experiment == Experiment::sim2) {
      emit_sim2_curves(em, res);
    } else {
      emit_sim3_curves(em, res);
    }
  }

  // Timing lives only in the report so the CSV tables stay byte-stable.
  json optima = json::array();
  for (const Optimum& o : res.optima) {
    json row{{"target", o.target},     {"delta", o.delta},     {"method", o.method},
             {"J", o.cell.J},          {"n", o.cell.n},        {"N", o.cell.N},
             {"tau", o.cell.tau},      {"mean_rmse", o.mean},  {"std_rmse", o.std},
             {"trials", o.trials}};
    if (o.J) row["J_group"] = o.J;
    if (selection) row["mean_fit_seconds"] = o.mean_fit_seconds;
    optima.push_back(row);
  }
  double fit_total = 0.0;
  for (const TrialRecord& r : res.records) fit_total += r.fit_seconds;
  std::vector<std::string> targets;
  if (cfg.experiment == Experiment::real) {
    targets.push_back(cfg.train_csv);
  } else {
    for (SyntheticTarget t : cfg.targets) targets.push_back(target_name(t));
  }
  json report{
      {"experiment", name},
      {"trials", cfg.trials},
      {"trial_count_note", "mean and std are over the recorded trial count; the default of 5 trials is a convention"},
      {"master_seed", cfg.seed},
      {"full_grid", cfg.full},
      {"grid", grid_json(cfg.grid)},
      {"cells", cells.size()},
      {"skipped_cells", res.skipped_cells},
      {"noise", cfg.noise},
      {"targets", targets},
      {"train_size", cfg.train_size},
      {"test_size", cfg.test_size},
      {"m", cfg.m},
      {"lambda", cfg.fit.lambda},
      {"rank_tol", cfg.fit.rank_tol},
      {"train_fraction", cfg.train_fraction},
      {"optima", optima},
      {"fit_seconds_total", fit_total},
      {"wall_seconds", seconds_since(started)},
      {"environment", environment_fingerprint()},
  };
  if (cfg.experiment == Experiment::real) {
    report["test_rows_clipped_to_ball"] = clipped;
    report["target_column"] = cfg.target_column;
    report["log_transform"] = cfg.log_transform;
  }
  std::ofstream rep = em.open("report.json");
  rep << report.dump(2) << '\n';
  return res;
}

}  // namespace csketch::cli
