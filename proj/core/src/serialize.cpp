#include "csketch/serialize.hpp"

#include <fstream>
#include <sstream>

#include "csketch/errors.hpp"
#include "json.hpp"

namespace csketch {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json spec_json(const SketchSpec& spec) {
  json dirs = json::array();
  for (Index l = 0; l < spec.N(); ++l) {
    json row = json::array();
    for (int c = 0; c < spec.dim(); ++c) row.push_back(spec.directions.points(l, c));
    dirs.push_back(std::move(row));
  }
  return json{
      {"J", spec.J},
      {"n", spec.n},
      {"N", spec.N()},
      {"d", spec.dim()},
      {"tau", spec.tau},
      {"m", spec.components.m()},
      {"operand_range", {spec.components.range().lo, spec.components.range().hi}},
      {"mode", std::string(to_string(spec.mode))},
      {"seed", spec.seed},
      {"grid", spec.grid},
      {"directions", std::move(dirs)},
  };
}

SketchSpec spec_from(const json& j) {
  SketchSpec spec;
  spec.J = j.at("J").get<int>();
  spec.n = j.at("n").get<int>();
  spec.tau = j.at("tau").get<double>();
  const auto range = j.at("operand_range").get<std::vector<double>>();
  if (range.size() != 2) throw DataError("operand_range must have two entries");
  spec.components = ComponentParams(j.at("m").get<int>(), Interval{range[0], range[1]});
  spec.mode = parse_sketch_mode(j.at("mode").get<std::string>());
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.grid = j.at("grid").get<std::vector<double>>();
  const int d = j.at("d").get<int>();
  const auto& dirs = j.at("directions");
  if (static_cast<int>(dirs.size()) != j.at("N").get<int>()) throw DataError("direction count does not match N");
  spec.directions.dim = d;
  spec.directions.mode = spec.mode;
  spec.directions.seed = spec.seed;
  spec.directions.points.resize(static_cast<Index>(dirs.size()), d);
  for (std::size_t l = 0; l < dirs.size(); ++l) {
    if (static_cast<int>(dirs[l].size()) != d) throw DataError("direction has wrong dimension");
    for (int c = 0; c < d; ++c) spec.directions.points(static_cast<Index>(l), c) = dirs[l][c].get<double>();
  }
  validate(spec);
  return spec;
}

json prep_json(const PreprocessRecord& p) {
  return json{
      {"source", std::string(to_string(p.source))},
      {"feature_names", p.feature_names},
      {"target_column", p.target_column},
      {"normalized", p.normalized},
      {"feature_min", p.feature_min},
      {"feature_max", p.feature_max},
      {"ball_scale", p.ball_scale},
      {"dropped_features", p.dropped_features},
      {"target_transform", std::string(to_string(p.target_transform))},
      {"warnings", p.warnings},
      {"generator", p.generator},
      {"noise_std", p.noise_std},
      {"seed", p.seed},
  };
}

PreprocessRecord prep_from(const json& j) {
  PreprocessRecord p;
  p.source = parse_data_source(j.at("source").get<std::string>());
  p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  p.target_column = j.at("target_column").get<std::string>();
  p.normalized = j.at("normalized").get<bool>();
  p.feature_min = j.at("feature_min").get<std::vector<double>>();
  p.feature_max = j.at("feature_max").get<std::vector<double>>();
  p.ball_scale = j.at("ball_scale").get<double>();
  p.dropped_features = j.at("dropped_features").get<std::vector<std::string>>();
  p.target_transform = parse_target_transform(j.at("target_transform").get<std::string>());
  p.warnings = j.at("warnings").get<std::vector<std::string>>();
  p.generator = j.at("generator").get<std::string>();
  p.noise_std = j.at("noise_std").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  if (p.normalized && (p.feature_min.size() != p.feature_names.size() || p.feature_max.size() != p.feature_names.size())) {
    throw DataError("normalisation constants do not match feature list");
  }
  for (std::size_t c = 0; c < p.feature_min.size(); ++c) {
    if (!(p.feature_min[c] < p.feature_max[c])) throw DataError("normalisation requires min < max per feature");
  }
  return p;
}

SolveRoute parse_route(const std::string& s) {
  if (s == "primal") return SolveRoute::primal;
  if (s == "gram") return SolveRoute::gram;
  if (s == "automatic") return SolveRoute::automatic;
  throw DataError("unknown solve route '" + s + "'");
}

template <class F>
auto parse_guarded(std::string_view text, F&& build) {
  try {
    return build(json::parse(text));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid document: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(SolveRoute route) {
  switch (route) {
    case SolveRoute::primal:
      return "primal";
    case SolveRoute::gram:
      return "gram";
    case SolveRoute::automatic:
      break;
  }
  return "automatic";
}

std::string to_json(const SketchSpec& spec) { return spec_json(spec).dump(2); }

SketchSpec sketch_spec_from_json(std::string_view text) {
  return parse_guarded(text, [](const json& j) { return spec_from(j); });
}

std::string to_json(const PreprocessRecord& prep) { return prep_json(prep).dump(2); }

PreprocessRecord preprocess_record_from_json(std::string_view text) {
  return parse_guarded(text, [](const json& j) { return prep_from(j); });
}

std::string to_json(const FittedModel& model) {
  const FitDiagnostics& d = model.diagnostics;
  json j{
      {"format", "csketch-model"},
      {"version", kFormatVersion},
      {"spec", spec_json(model.spec)},
      {"coefficients", std::vector<double>(model.coefficients.begin(), model.coefficients.end())},
      {"M", model.M},
      {"lambda", model.lambda},
      {"preprocessing", prep_json(model.prep)},
      {"diagnostics",
       {{"residual_norm", d.residual_norm},
        {"train_rmse", d.train_rmse},
        {"effective_rank", d.effective_rank},
        {"route", std::string(to_string(d.route))},
        {"basis_seconds", d.basis_seconds},
        {"solve_seconds", d.solve_seconds},
        {"fit_seconds", d.fit_seconds}}},
  };
  return j.dump(2);
}

FittedModel fitted_model_from_json(std::string_view text) {
  return parse_guarded(text, [](const json& j) {
    if (j.at("format").get<std::string>() != "csketch-model") throw DataError("not a csketch model document");
    if (j.at("version").get<int>() != kFormatVersion) throw DataError("unsupported model format version");
    FittedModel model;
    model.spec = spec_from(j.at("spec"));
    const auto coef = j.at("coefficients").get<std::vector<double>>();
    if (static_cast<Index>(coef.size()) != model.spec.dimension()) {
      throw DataError("coefficient count does not match J n N");
    }
    model.coefficients = Eigen::Map<const Vector>(coef.data(), static_cast<Index>(coef.size()));
    model.M = j.at("M").get<double>();
    if (!(model.M >= 0.0)) throw DataError("truncation bound M must be >= 0");
    model.lambda = j.at("lambda").get<double>();
    model.prep = prep_from(j.at("preprocessing"));
    const auto& d = j.at("diagnostics");
    model.diagnostics.residual_norm = d.at("residual_norm").get<double>();
    model.diagnostics.train_rmse = d.at("train_rmse").get<double>();
    model.diagnostics.effective_rank = d.at("effective_rank").get<Index>();
    model.diagnostics.route = parse_route(d.at("route").get<std::string>());
    model.diagnostics.basis_seconds = d.at("basis_seconds").get<double>();
    model.diagnostics.solve_seconds = d.at("solve_seconds").get<double>();
    model.diagnostics.fit_seconds = d.at("fit_seconds").get<double>();
    return model;
  });
}

void save_model(const std::string& path, const FittedModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << to_json(model) << '\n';
}

FittedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return fitted_model_from_json(buf.str());
}

}  // namespace csketch
