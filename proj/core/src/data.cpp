#include "csketch/data.hpp"

#include <cmath>
#include <stdexcept>

#include "csketch/errors.hpp"
#include "csketch/rng.hpp"

namespace csketch {

namespace {

constexpr double kBallSlack = 1e-12;

std::vector<std::string> default_feature_names(int d) {
  std::vector<std::string> names;
  for (int c = 1; c <= d; ++c) names.push_back("x" + std::to_string(c));
  return names;
}

void check_in_ball(const RowMatrix& X, const std::string& what) {
  for (Index i = 0; i < X.rows(); ++i) {
    if (X.row(i).norm() > 0.5 + kBallSlack) {
      throw DataError(what + ": row " + std::to_string(i) + " lies outside the ball of radius 1/2");
    }
  }
}

}  // namespace

std::string_view to_string(TargetTransform t) { return t == TargetTransform::log1p ? "log1p" : "none"; }

std::string_view to_string(DataSource s) {
  switch (s) {
    case DataSource::synthetic_f1:
      return "synthetic-f1";
    case DataSource::synthetic_f2:
      return "synthetic-f2";
    case DataSource::csv:
      break;
  }
  return "csv";
}

TargetTransform parse_target_transform(std::string_view text) {
  if (text == "none") return TargetTransform::none;
  if (text == "log1p") return TargetTransform::log1p;
  throw std::invalid_argument("unknown target transform '" + std::string(text) + "'");
}

DataSource parse_data_source(std::string_view text) {
  if (text == "synthetic-f1") return DataSource::synthetic_f1;
  if (text == "synthetic-f2") return DataSource::synthetic_f2;
  if (text == "csv") return DataSource::csv;
  throw std::invalid_argument("unknown data source '" + std::string(text) + "'");
}

SyntheticTarget parse_synthetic_target(std::string_view text) {
  if (text == "f1") return SyntheticTarget::f1;
  if (text == "f2") return SyntheticTarget::f2;
  throw std::invalid_argument("unknown synthetic target '" + std::string(text) + "'");
}

RowMatrix sample_ball(int d, Index p, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("ball dimension must be >= 1");
  if (p < 0) throw std::invalid_argument("sample count must be >= 0");
  Rng rng(seed);
  RowMatrix X(p, d);
  for (Index i = 0; i < p; ++i) {
    double norm = 0.0;
    do {
      for (int c = 0; c < d; ++c) X(i, c) = rng.normal();
      norm = X.row(i).norm();
    } while (norm == 0.0);
    const double radius = 0.5 * std::pow(rng.uniform(), 1.0 / d);
    X.row(i) *= radius / norm;
  }
  return X;
}

double synth_f1(std::span<const double> x) {
  if (x.size() != 3) throw DataError("f1 is defined on R^3");
  const double r = 2.0 * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  return (r - 0.1) * (r - 0.5) * (r - 0.9);
}

double synth_f2(std::span<const double> x) {
  if (x.size() != 4) throw DataError("f2 is defined on R^4");
  double sq = 0.0;
  for (double v : x) sq += v * v;
  const double r = 2.2 * std::sqrt(sq);
  if (r > 1.0) return 0.0;
  return std::pow(1.0 - r, 6) * (35.0 * r * r + 18.0 * r + 3.0);
}

int target_dim(SyntheticTarget target) { return target == SyntheticTarget::f1 ? 3 : 4; }

double synth_value(SyntheticTarget target, std::span<const double> x) {
  return target == SyntheticTarget::f1 ? synth_f1(x) : synth_f2(x);
}

Dataset make_dataset(SyntheticTarget target, Index p, double delta, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("dataset needs at least one sample");
  if (!(delta >= 0.0)) throw std::invalid_argument("noise level must be >= 0");
  const int d = target_dim(target);
  Dataset data;
  data.X = sample_ball(d, p, derive_seed(seed, 0));
  data.y.resize(p);
  for (Index i = 0; i < p; ++i) data.y(i) = synth_value(target, {data.X.row(i).data(), static_cast<std::size_t>(d)});
  if (delta > 0.0) {
    Rng noise(derive_seed(seed, 1));
    for (Index i = 0; i < p; ++i) data.y(i) += delta * noise.normal();
  }
  data.prep.source = target == SyntheticTarget::f1 ? DataSource::synthetic_f1 : DataSource::synthetic_f2;
  data.prep.feature_names = default_feature_names(d);
  data.prep.generator = std::string(Rng::kAlgorithm);
  data.prep.noise_std = delta;
  data.prep.seed = seed;
  return data;
}

Dataset ingest_table(const CsvTable& table, const std::string& target_column, bool log_transform) {
  const Index target = table.column(target_column);
  if (table.values.rows() == 0) throw DataError("no data rows");
  Dataset data;
  PreprocessRecord& prep = data.prep;
  prep.source = DataSource::csv;
  prep.target_column = target_column;
  prep.normalized = true;
  prep.target_transform = log_transform ? TargetTransform::log1p : TargetTransform::none;

  for (Index c = 0; c < table.values.cols(); ++c) {
    if (c == target) continue;
    const double lo = table.values.col(c).minCoeff();
    const double hi = table.values.col(c).maxCoeff();
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw DataError("column '" + table.header[c] + "' is not finite");
    if (lo == hi) {
      prep.dropped_features.push_back(table.header[c]);
      prep.warnings.push_back("dropped constant column '" + table.header[c] + "'");
      continue;
    }
    prep.feature_names.push_back(table.header[c]);
    prep.feature_min.push_back(lo);
    prep.feature_max.push_back(hi);
  }
  if (prep.feature_names.empty()) throw DataError("no non-constant input columns");
  prep.ball_scale = 1.0 / std::sqrt(static_cast<double>(prep.feature_names.size()));

  data.X = transform_inputs(table, prep);
  data.y = transform_targets(table.values.col(target), prep);
  return data;
}

Dataset ingest_csv(const std::string& path, const std::string& target_column, bool log_transform) {
  return ingest_table(read_csv(path), target_column, log_transform);
}

Dataset load_prepared_csv(const std::string& path, const std::string& target_column) {
  const CsvTable table = read_csv(path);
  const Index target = table.column(target_column);
  Dataset data;
  data.prep.source = DataSource::csv;
  data.prep.target_column = target_column;
  for (Index c = 0; c < table.values.cols(); ++c) {
    if (c != target) data.prep.feature_names.push_back(table.header[c]);
  }
  if (data.prep.feature_names.empty()) throw DataError(path + ": no input columns");
  data.X = transform_inputs(table, data.prep);
  data.y = table.values.col(target);
  check_in_ball(data.X, path);
  return data;
}

RowMatrix transform_inputs(const CsvTable& table, const PreprocessRecord& prep) {
  const auto d = static_cast<Index>(prep.feature_names.size());
  RowMatrix X(table.values.rows(), d);
  for (Index c = 0; c < d; ++c) {
    const Index src = table.column(prep.feature_names[c]);
    if (prep.normalized) {
      const double lo = prep.feature_min[c];
      const double span = prep.feature_max[c] - lo;
      for (Index i = 0; i < X.rows(); ++i) X(i, c) = ((table.values(i, src) - lo) / span - 0.5) * prep.ball_scale;
    } else {
      X.col(c) = table.values.col(src);
    }
  }
  if (!X.allFinite()) throw DataError("input contains non-finite values");
  return X;
}

Vector transform_targets(const Vector& y, const PreprocessRecord& prep) {
  if (!y.allFinite()) throw DataError("target contains non-finite values");
  if (prep.target_transform == TargetTransform::none) return y;
  Vector out(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    if (!(y(i) > -1.0)) throw DataError("log(1 + y) needs y > -1");
    out(i) = std::log1p(y(i));
  }
  return out;
}

Vector inverse_transform_targets(const Vector& y, const PreprocessRecord& prep) {
  if (prep.target_transform == TargetTransform::none) return y;
  return y.unaryExpr([](double v) { return std::expm1(v); });
}

Dataset subset(const Dataset& data, std::span<const Index> rows) {
  Dataset out;
  out.prep = data.prep;
  out.X.resize(static_cast<Index>(rows.size()), data.X.cols());
  out.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.X.row(static_cast<Index>(r)) = data.X.row(rows[r]);
    out.y(static_cast<Index>(r)) = data.y(rows[r]);
  }
  return out;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::vector<std::string> header = data.prep.feature_names;
  if (static_cast<int>(header.size()) != data.dim()) header = default_feature_names(data.dim());
  header.push_back(data.prep.target_column);
  RowMatrix table(data.size(), data.dim() + 1);
  table.leftCols(data.dim()) = data.X;
  table.col(data.dim()) = data.y;
  write_csv(path, header, table);
}

}  // namespace csketch
