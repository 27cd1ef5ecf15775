#include "config.hpp"

#include <fstream>
#include <set>

#include "errors.hpp"

namespace csketch::cli {

namespace {

using nlohmann::json;

void check_keys(const json& section, const std::string& name, const std::set<std::string>& allowed) {
  if (!section.is_object()) throw UsageError("config section '" + name + "' must be an object");
  for (const auto& [key, value] : section.items()) {
    if (!allowed.count(key)) throw UsageError("unknown key '" + name + "." + key + "' in config");
  }
}

template <class T>
void read(const json& section, const char* key, T& target) {
  if (section.contains(key)) target = section.at(key).get<T>();
}

void apply_sketch(const json& s, Settings& out) {
  check_keys(s, "sketch", {"J", "n", "N", "tau", "m", "mode", "seed", "operand_range"});
  read(s, "J", out.sketch.J);
  read(s, "n", out.sketch.n);
  read(s, "N", out.sketch.N);
  read(s, "tau", out.sketch.tau);
  if (s.contains("m")) out.sketch.m = s.at("m").get<int>();
  if (s.contains("mode")) out.sketch.mode = parse_sketch_mode(s.at("mode").get<std::string>());
  read(s, "seed", out.sketch.seed);
  if (s.contains("operand_range")) {
    const auto r = s.at("operand_range").get<std::vector<double>>();
    if (r.size() != 2 || !(r[0] < r[1])) throw UsageError("sketch.operand_range must be [lo, hi] with lo < hi");
    out.sketch.operand_range = {r[0], r[1]};
  }
}

void apply_fit(const json& s, FitOptions& fit) {
  check_keys(s, "fit", {"lambda", "rank_tol", "gram_ratio", "route"});
  read(s, "lambda", fit.lambda);
  read(s, "rank_tol", fit.rank_tol);
  read(s, "gram_ratio", fit.gram_ratio);
  if (s.contains("route")) fit.route = parse_route(s.at("route").get<std::string>());
}

void apply_data(const json& s, Settings& out) {
  check_keys(s, "data", {"target_column", "normalize", "log_transform"});
  read(s, "target_column", out.target_column);
  read(s, "normalize", out.normalize);
  read(s, "log_transform", out.log_transform);
}

void apply_selection(const json& s, Settings& out) {
  check_keys(s, "selection", {"train_fraction", "repeats", "refit_full", "holdout", "J", "n", "N", "tau", "tie_N_to_n",
                            "max_dimension"});
  read(s, "train_fraction", out.selection.train_fraction);
  read(s, "repeats", out.selection.repeats);
  read(s, "refit_full", out.selection.refit_full);
  read(s, "holdout", out.holdout);
  read(s, "J", out.grid.J);
  read(s, "n", out.grid.n);
  read(s, "N", out.grid.N);
  read(s, "tau", out.grid.tau);
  read(s, "tie_N_to_n", out.grid.tie_N_to_n);
  read(s, "max_dimension", out.grid.max_dimension);
}

void apply_bench(const json& s, BenchConfig& b) {
  check_keys(s, "bench", {"trials", "seed", "full", "train_size", "test_size", "noise", "targets", "J", "n", "N", "tau",
                          "max_dimension", "m", "train_fraction", "train_csv", "test_csv", "target_column",
                          "log_transform"});
  read(s, "trials", b.trials);
  read(s, "seed", b.seed);
  read(s, "full", b.full);
  read(s, "train_size", b.train_size);
  read(s, "test_size", b.test_size);
  read(s, "noise", b.noise);
  if (s.contains("targets")) {
    b.targets.clear();
    for (const auto& t : s.at("targets")) b.targets.push_back(parse_synthetic_target(t.get<std::string>()));
  }
  read(s, "J", b.grid.J);
  read(s, "n", b.grid.n);
  read(s, "N", b.grid.N);
  read(s, "tau", b.grid.tau);
  read(s, "max_dimension", b.grid.max_dimension);
  read(s, "m", b.m);
  read(s, "train_fraction", b.train_fraction);
  read(s, "train_csv", b.train_csv);
  read(s, "test_csv", b.test_csv);
  read(s, "target_column", b.target_column);
  read(s, "log_transform", b.log_transform);
}

}  // namespace

SolveRoute parse_route(const std::string& text) {
  if (text == "automatic") return SolveRoute::automatic;
  if (text == "primal") return SolveRoute::primal;
  if (text == "gram") return SolveRoute::gram;
  throw UsageError("unknown solve route '" + text + "' (expected automatic, primal or gram)");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void apply_config(const json& config, Settings& settings) {
  check_keys(config, "<root>", {"sketch", "fit", "data", "selection", "bench"});
  try {
    if (config.contains("sketch")) apply_sketch(config.at("sketch"), settings);
    if (config.contains("fit")) {
      apply_fit(config.at("fit"), settings.fit);
      settings.selection.fit = settings.fit;
      settings.bench.fit = settings.fit;
    }
    if (config.contains("data")) apply_data(config.at("data"), settings);
    if (config.contains("selection")) apply_selection(config.at("selection"), settings);
    if (config.contains("bench")) apply_bench(config.at("bench"), settings.bench);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config value has the wrong type: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace csketch::cli
