#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "bench.hpp"
#include "checks.hpp"
#include "config.hpp"
#include "csketch/csv.hpp"
#include "csketch/data.hpp"
#include "csketch/serialize.hpp"
#include "csketch/sphere.hpp"
#include "errors.hpp"
#include "json.hpp"
#include "output.hpp"
#include "report.hpp"

namespace csketch::cli {

namespace {

using nlohmann::json;

struct Common {
  std::string out_dir;
  std::string config;
};

struct SketchFlags {
  std::optional<int> J, n, N, m;
  std::optional<double> tau;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda, rank_tol;
  std::optional<std::string> route;

  void attach(CLI::App* app) {
    app->add_option("--J", J, "frequency parameter J");
    app->add_option("--n", n, "grid parameter n");
    app->add_option("--N", N, "number of sphere directions");
    app->add_option("--tau", tau, "trapezoid overlap width");
    app->add_option("--m", m, "component depth");
    app->add_option("--mode", mode, "sketch mode: equal-area or random");
    app->add_option("--seed", seed, "seed for random sketches and splits");
    app->add_option("--lambda", lambda, "ridge weight (0 = minimum-norm)");
    app->add_option("--rank-tol", rank_tol, "relative rank tolerance");
    app->add_option("--route", route, "solver route: automatic, primal or gram");
  }

  void apply(Settings& s) const {
    if (J) s.sketch.J = *J;
    if (n) s.sketch.n = *n;
    if (N) s.sketch.N = *N;
    if (tau) s.sketch.tau = *tau;
    if (m) s.sketch.m = *m;
    if (mode) s.sketch.mode = parse_sketch_mode(*mode);
    if (seed) s.sketch.seed = *seed;
    if (lambda) s.fit.lambda = *lambda;
    if (rank_tol) s.fit.rank_tol = *rank_tol;
    if (route) s.fit.route = parse_route(*route);
  }
};

struct DataFlags {
  std::optional<std::string> target_column;
  bool normalize = false;
  bool log_target = false;

  void attach(CLI::App* app) {
    app->add_option("--target-column", target_column, "name of the target column (default y)");
    app->add_flag("--normalize", normalize, "min-max normalise inputs and map them into the ball");
    app->add_flag("--log-target", log_target, "fit log(1 + y) instead of y (implies --normalize)");
  }

  void apply(Settings& s) const {
    if (target_column) s.target_column = *target_column;
    if (normalize) s.normalize = true;
    if (log_target) s.log_transform = true;
    if (s.log_transform) s.normalize = true;
  }
};

Settings base_settings(const Common& common) {
  Settings s;
  apply_config(load_config(common.config), s);
  return s;
}

Dataset load_training(const std::string& path, const Settings& s) {
  return s.normalize ? ingest_csv(path, s.target_column, s.log_transform) : load_prepared_csv(path, s.target_column);
}

json diagnostics_json(const FittedModel& model) {
  const FitDiagnostics& d = model.diagnostics;
  return {{"J", model.spec.J},
          {"n", model.spec.n},
          {"N", model.spec.N()},
          {"tau", model.spec.tau},
          {"m", model.spec.components.m()},
          {"dimension", model.spec.dimension()},
          {"M", model.M},
          {"train_rmse", d.train_rmse},
          {"residual_norm", d.residual_norm},
          {"effective_rank", d.effective_rank},
          {"route", std::string(to_string(d.route))},
          {"basis_seconds", d.basis_seconds},
          {"solve_seconds", d.solve_seconds},
          {"fit_seconds", d.fit_seconds}};
}

int cmd_components_check(const Common& common, const CheckOptions& opt, const std::string& csv, std::ostream& out,
                         std::ostream& err) {
  if (opt.m_min < 1 || opt.m_max < opt.m_min) throw UsageError("need 1 <= m-min <= m-max");
  if (opt.grid < 3 || opt.tuples < 1) throw UsageError("grid needs >= 3 points and tuples >= 1");
  const OutputDir dir = OutputDir::resolve(common.out_dir);
  const std::vector<CheckRow> rows = components_check(opt);
  std::ofstream f = dir.open(csv);
  write_check_csv(f, rows);
  int failed = 0;
  for (const CheckRow& r : rows) {
    if (!r.ok) {
      ++failed;
      err << "FAIL " << r.component << " m=" << r.m << " J=" << r.J << " tau=" << format_double(r.tau)
          << " error=" << format_double(r.sup_error) << " reference=" << format_double(r.reference)
          << " ratio=" << format_double(r.ratio) << '\n';
    }
  }
  out << rows.size() << " rows, " << failed << " failed; table in " << dir.file(csv).string() << '\n';
  if (failed) throw CheckFailed(std::to_string(failed) + " component checks failed");
  return kOk;
}

int cmd_sphere_gen(const Common& common, int d, int N, const std::string& mode, std::uint64_t seed, double mu,
                   const std::string& csv, std::ostream& out) {
  if (d < 2 || N < 1) throw UsageError("sphere-gen needs d >= 2 and N >= 1");
  const OutputDir dir = OutputDir::resolve(common.out_dir);
  const DirectionSet pts = parse_sketch_mode(mode) == SketchMode::equal_area ? eq_points(d, N) : random_points(d, N, seed);
  std::vector<std::string> header;
  for (int c = 1; c <= d; ++c) header.push_back("x" + std::to_string(c));
  std::ofstream f = dir.open(csv);
  write_csv(f, header, pts.points);
  json summary{{"d", d}, {"N", N}, {"mode", std::string(to_string(pts.mode))}, {"mu", mu}};
  if (pts.mode == SketchMode::random) summary["seed"] = seed;
  if (N > 1) {
    summary["riesz_energy"] = riesz_energy(pts, EnergyConfig(mu));
    summary["min_separation"] = min_separation(pts);
  }
  out << summary.dump(2) << '\n';
  return kOk;
}

int cmd_make_data(const Common& common, const std::string& target, Index size, double delta, std::uint64_t seed,
                  const std::string& csv, std::ostream& out) {
  const OutputDir dir = OutputDir::resolve(common.out_dir);
  const Dataset data = make_dataset(parse_synthetic_target(target), size, delta, seed);
  const auto path = dir.file(csv);
  write_dataset_csv(path.string(), data);
  out << "wrote " << data.size() << " rows to " << path.string() << '\n';
  return kOk;
}

int cmd_fit(const Common& common, const SketchFlags& sf, const DataFlags& df, const std::string& data_path,
            const std::string& model_path, std::ostream& out) {
  Settings s = base_settings(common);
  sf.apply(s);
  df.apply(s);
  const OutputDir dir = OutputDir::resolve(common.out_dir);
  const Dataset train = load_training(data_path, s);
  s.sketch.dim = train.dim();
  const SketchSpec spec = make_spec(s.sketch);
  const FittedModel model = fit_model(train, spec, s.fit);
  const auto path = dir.file(model_path);
  save_model(path.string(), model);
  json summary = diagnostics_json(model);
  summary["model"] = path.string();
  out << summary.dump(2) << '\n';
  return kOk;
}

/// Inputs of `table` mapped the way the model's training rows were.
RowMatrix model_inputs(const CsvTable& table, const FittedModel& model, std::ostream& err) {
  const PreprocessRecord& prep = model.prep;
  std::set<std::string> expected(prep.feature_names.begin(), prep.feature_names.end());
  expected.insert(prep.dropped_features.begin(), prep.dropped_features.end());
  std::size_t inputs = 0;
  for (const std::string& h : table.header) {
    if (h == prep.target_column) continue;
    ++inputs;
    if (!expected.count(h)) throw DataError("column '" + h + "' is not an input of this model");
  }
  if (inputs != expected.size()) {
    throw DataError("data has " + std::to_string(inputs) + " input columns, model expects " +
                    std::to_string(expected.size()));
  }
  RowMatrix X = transform_inputs(table, prep);
  if (prep.normalized) {
    int clipped = 0;
    for (Index i = 0; i < X.rows(); ++i) {
      const double r = X.row(i).norm();
      if (r > 0.5) {
        X.row(i) *= 0.5 / r;
        ++clipped;
      }
    }
    if (clipped) err << "warning: " << clipped << " rows fell outside the training range and were scaled onto the ball\n";
  }
  return X;
}

int cmd_predict(const Common& common, const std::string& model_path, const std::string& data_path,
                const std::string& csv, std::ostream& out, std::ostream& err) {
  const OutputDir dir = OutputDir::resolve(common.out_dir);
  const FittedModel model = load_model(model_path);
  const CsvTable table = read_csv(data_path);
  const RowMatrix X = model_inputs(table, model, err);
  const Vector raw = predict(model, X);
  const Vector pred = inverse_transform_targets(raw, model.prep);
  const bool has_target = table.has_column(model.prep.target_column);
  RowMatrix values(pred.size(), has_target ? 2 : 1);
  values.col(0) = pred;
  std::vector<std::string> header{"prediction"};
  json summary{{"rows", pred.size()}};
  if (has_target) {
    const Vector truth = table.values.col(table.column(model.prep.target_column));
    values.col(1) = truth;
    header.push_back(model.prep.target_column);
    summary["rmse"] = rmse(pred, truth);
  }
  const auto path = dir.file(csv);
  write_csv(path.string(), header, values);
  summary["predictions"] = path.string();
  out << summary.dump(2) << '\n';
  return kOk;
}

struct SelectFlags {
  std::optional<std::vector<int>> grid_J, grid_n, grid_N;
  std::optional<std::vector<double>> grid_tau;
  bool tie_N = false;
  bool holdout = false;
  std::optional<int> repeats;
  std::optional<double> train_fraction;
  std::optional<Index> max_dimension;
  bool refit_full = false;

  void attach(CLI::App* app) {
    app->add_option("--grid-J", grid_J, "J values to search")->delimiter(',');
    app->add_option("--grid-n", grid_n, "n values to search")->delimiter(',');
    app->add_option("--grid-N", grid_N, "N values to search")->delimiter(',');
    app->add_option("--grid-tau", grid_tau, "tau values to search")->delimiter(',');
    app->add_flag("--tie-N", tie_N, "use N = n^(d-1) instead of the N axis");
    app->add_flag("--holdout", holdout, "hold-out choice of n over {1..k} with N = n^(d-1), for fixed --J and --tau");
    app->add_option("--repeats", repeats, "independent splits per cell");
    app->add_option("--train-fraction", train_fraction, "fraction of rows used for fitting");
    app->add_flag("--refit-full", refit_full, "refit the chosen cell on all rows");
    app->add_option("--max-dimension", max_dimension, "skip cells with J n N above this");
  }
};

int cmd_select(const Common& common, const SketchFlags& sf, const DataFlags& df, const SelectFlags& fl,
               const std::string& data_path, const std::string& table_path, const std::string& model_path,
               std::ostream& out) {
  Settings s = base_settings(common);
  sf.apply(s);
  df.apply(s);
  if (fl.grid_J) s.grid.J = *fl.grid_J;
  if (fl.grid_n) s.grid.n = *fl.grid_n;
  if (fl.grid_N) s.grid.N = *fl.grid_N;
  if (fl.grid_tau) s.grid.tau = *fl.grid_tau;
  if (fl.tie_N) s.grid.tie_N_to_n = true;
  if (fl.holdout) s.holdout = true;
  if (fl.repeats) s.selection.repeats = *fl.repeats;
  if (fl.train_fraction) s.selection.train_fraction = *fl.train_fraction;
  if (fl.refit_full) s.selection.refit_full = true;
  if (fl.max_dimension) s.grid.max_dimension = *fl.max_dimension;
  s.selection.fit = s.fit;
  s.selection.m = s.sketch.m;
  s.selection.mode = s.sketch.mode;
  s.selection.seed = s.sketch.seed;
  s.selection.operand_range = s.sketch.operand_range;

  const OutputDir dir = OutputDir::resolve(common.out_dir);
  const Dataset data = load_training(data_path, s);
  const SelectionResult result = s.holdout ? holdout_select(data, s.sketch.J, s.sketch.tau, s.selection)
                                           : grid_search(data, s.grid, s.selection);
  std::ofstream table = dir.open(table_path);
  write_validation_table(table, result);
  table.close();
  const auto path = dir.file(model_path);
  save_model(path.string(), result.model);
  json summary{{"chosen", {{"J", result.chosen.J}, {"n", result.chosen.n}, {"N", result.chosen.N}, {"tau", result.chosen.tau}}},
               {"validation_rmse", std::sqrt(result.chosen_mse)},
               {"cells", result.cells.size()},
               {"table", dir.file(table_path).string()},
               {"model", path.string()}};
  out << summary.dump(2) << '\n';
  return kOk;
}

struct BenchFlags {
  std::string experiment;
  std::optional<int> trials, m;
  std::optional<std::uint64_t> seed;
  bool full = false;
  std::optional<Index> train_size, test_size, max_dimension;
  std::optional<std::vector<double>> noise, tau;
  std::optional<std::vector<std::string>> targets;
  std::optional<std::vector<int>> J, n, N;
  std::optional<std::string> train_csv, test_csv, target_column;
  bool log_target = false;
  std::optional<double> lambda;

  void attach(CLI::App* app) {
    app->add_option("experiment", experiment, "sim2, sim3, sim4 or real")->required();
    app->add_option("--trials", trials, "trials averaged per cell (default 5)");
    app->add_option("--seed", seed, "master seed");
    app->add_flag("--full", full, "use the complete grid instead of the desk-scale grid");
    app->add_option("--train-size", train_size, "training rows per trial (default 2000)");
    app->add_option("--test-size", test_size, "test rows per trial (default 1000)");
    app->add_option("--noise", noise, "noise levels")->delimiter(',');
    app->add_option("--targets", targets, "synthetic targets: f1, f2")->delimiter(',');
    app->add_option("--grid-J", J, "J axis")->delimiter(',');
    app->add_option("--grid-n", n, "n axis")->delimiter(',');
    app->add_option("--grid-N", N, "N axis")->delimiter(',');
    app->add_option("--grid-tau", tau, "tau axis")->delimiter(',');
    app->add_option("--max-dimension", max_dimension, "skip cells with J n N above this (0 = no cap)");
    app->add_option("--m", m, "component depth (default 20)");
    app->add_option("--lambda", lambda, "ridge weight");
    app->add_option("--train-csv", train_csv, "real: data file (split 80/20 per trial unless --test-csv is given)");
    app->add_option("--test-csv", test_csv, "real: separate test file");
    app->add_option("--target-column", target_column, "real: target column (default y)");
    app->add_flag("--log-target", log_target, "real: fit log(1 + y)");
  }
};

int cmd_bench(const Common& common, const BenchFlags& fl, std::ostream& out, std::ostream& err) {
  Settings s = base_settings(common);
  BenchConfig& b = s.bench;
  b.experiment = parse_experiment(fl.experiment);
  if (fl.trials) b.trials = *fl.trials;
  if (fl.seed) b.seed = *fl.seed;
  if (fl.full) b.full = true;
  if (fl.train_size) b.train_size = *fl.train_size;
  if (fl.test_size) b.test_size = *fl.test_size;
  if (fl.noise) b.noise = *fl.noise;
  if (fl.targets) {
    b.targets.clear();
    for (const std::string& t : *fl.targets) b.targets.push_back(parse_synthetic_target(t));
  }
  if (fl.J) b.grid.J = *fl.J;
  if (fl.n) b.grid.n = *fl.n;
  if (fl.N) b.grid.N = *fl.N;
  if (fl.tau) b.grid.tau = *fl.tau;
  if (fl.max_dimension) b.grid.max_dimension = *fl.max_dimension;
  if (fl.m) b.m = *fl.m;
  if (fl.lambda) b.fit.lambda = *fl.lambda;
  if (fl.train_csv) b.train_csv = *fl.train_csv;
  if (fl.test_csv) b.test_csv = *fl.test_csv;
  if (fl.target_column) b.target_column = *fl.target_column;
  if (fl.log_target) b.log_transform = true;

  const OutputDir dir = OutputDir::resolve(common.out_dir);
  const BenchResult res = run_bench(b, dir, err);
  for (const Optimum& o : res.optima) {
    out << o.target << " delta=" << format_double(o.delta) << ' ' << o.method;
    if (o.J) out << " J=" << o.J;
    out << ": rmse " << format_double(o.mean) << " (std " << format_double(o.std) << ", " << o.trials
        << " trials) at J=" << o.cell.J << " n=" << o.cell.n << " N=" << o.cell.N << " tau=" << format_double(o.cell.tau)
        << '\n';
  }
  for (const std::string& f : res.files) out << "wrote " << (dir.root() / f).string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Component-based sketching regression: components, sphere points, fitting, selection, benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out-dir", common.out_dir, "directory for every output file (default $CSKETCH_OUT_DIR or .)");
  app.add_option("--config", common.config, "JSON config file; flags override it");
  bool version = false;
  app.add_flag("--version", version, "print version and build information");

  CheckOptions check;
  std::string check_csv = "components_check.csv";
  auto* cc = app.add_subcommand("components-check", "measure component errors against their error laws");
  cc->add_option("--m-min", check.m_min, "smallest depth m");
  cc->add_option("--m-max", check.m_max, "largest depth m");
  cc->add_option("--grid", check.grid, "grid points on [0, 1] for the square error");
  cc->add_option("--tuples", check.tuples, "random tuples per product row");
  cc->add_option("--seed", check.seed, "seed for product tuples and trapezoid specs");
  cc->add_option("--taus", check.taus, "trapezoid widths")->delimiter(',');
  cc->add_option("--out", check_csv, "output CSV");

  int sg_d = 3, sg_N = 0;
  std::string sg_mode = "equal-area", sg_csv = "points.csv";
  std::uint64_t sg_seed = 0;
  double sg_mu = 1.0;
  auto* sg = app.add_subcommand("sphere-gen", "generate sphere directions and report their Riesz energy");
  sg->add_option("--d", sg_d, "ambient dimension")->required();
  sg->add_option("--N", sg_N, "number of points")->required();
  sg->add_option("--mode", sg_mode, "equal-area or random");
  sg->add_option("--seed", sg_seed, "seed for random mode");
  sg->add_option("--mu", sg_mu, "Riesz exponent (0 = logarithmic)");
  sg->add_option("--out", sg_csv, "output CSV");

  std::string md_target = "f1", md_csv = "data.csv";
  Index md_size = 2000;
  double md_delta = 0.0;
  std::uint64_t md_seed = 0;
  auto* md = app.add_subcommand("make-data", "sample a synthetic dataset");
  md->add_option("--target", md_target, "f1 (d = 3) or f2 (d = 4)");
  md->add_option("--size", md_size, "number of rows");
  md->add_option("--delta", md_delta, "Gaussian noise standard deviation");
  md->add_option("--seed", md_seed, "seed");
  md->add_option("--out", md_csv, "output CSV");

  SketchFlags fit_sketch;
  DataFlags fit_data;
  std::string fit_csv, fit_model_path = "model.json";
  auto* ft = app.add_subcommand("fit", "fit a sketch model and save it as JSON");
  ft->add_option("--data", fit_csv, "training CSV")->required();
  ft->add_option("--model", fit_model_path, "output model JSON");
  fit_sketch.attach(ft);
  fit_data.attach(ft);

  std::string pr_model, pr_csv, pr_out = "predictions.csv";
  auto* pr = app.add_subcommand("predict", "predict with a saved model");
  pr->add_option("--model", pr_model, "model JSON")->required();
  pr->add_option("--data", pr_csv, "input CSV")->required();
  pr->add_option("--out", pr_out, "output CSV");

  SketchFlags sel_sketch;
  DataFlags sel_data;
  SelectFlags sel_flags;
  std::string sel_csv, sel_table = "validation.csv", sel_model = "model.json";
  auto* se = app.add_subcommand("select", "hold-out grid search");
  se->add_option("--data", sel_csv, "training CSV")->required();
  se->add_option("--table", sel_table, "output validation table CSV");
  se->add_option("--model", sel_model, "output model JSON");
  sel_sketch.attach(se);
  sel_data.attach(se);
  sel_flags.attach(se);

  BenchFlags bench;
  auto* be = app.add_subcommand("bench", "reproduce the simulation studies at desk scale");
  bench.attach(be);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (version && e.get_exit_code() == static_cast<int>(CLI::ExitCodes::RequiredError)) {
      out << environment_fingerprint().dump(2) << '\n';
      return kOk;
    }
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  }

  try {
    if (cc->parsed()) return cmd_components_check(common, check, check_csv, out, err);
    if (sg->parsed()) return cmd_sphere_gen(common, sg_d, sg_N, sg_mode, sg_seed, sg_mu, sg_csv, out);
    if (md->parsed()) return cmd_make_data(common, md_target, md_size, md_delta, md_seed, md_csv, out);
    if (ft->parsed()) return cmd_fit(common, fit_sketch, fit_data, fit_csv, fit_model_path, out);
    if (pr->parsed()) return cmd_predict(common, pr_model, pr_csv, pr_out, out, err);
    if (se->parsed()) return cmd_select(common, sel_sketch, sel_data, sel_flags, sel_csv, sel_table, sel_model, out);
    if (be->parsed()) return cmd_bench(common, bench, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace csketch::cli
