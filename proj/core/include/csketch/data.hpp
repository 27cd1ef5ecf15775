#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csketch/csv.hpp"
#include "csketch/types.hpp"

namespace csketch {

enum class TargetTransform { none, log1p };
enum class DataSource { synthetic_f1, synthetic_f2, csv };
enum class SyntheticTarget { f1, f2 };

std::string_view to_string(TargetTransform t);
std::string_view to_string(DataSource s);
TargetTransform parse_target_transform(std::string_view text);
DataSource parse_data_source(std::string_view text);
SyntheticTarget parse_synthetic_target(std::string_view text);

/// Everything needed to map raw rows into the ball the same way the training
/// rows were mapped.
struct PreprocessRecord {
  DataSource source = DataSource::csv;
  std::vector<std::string> feature_names;  ///< retained input columns, in order
  std::string target_column = "y";
  bool normalized = false;                 ///< min-max + ball map applied
  std::vector<double> feature_min;         ///< per retained column when normalized
  std::vector<double> feature_max;
  double ball_scale = 1.0;                 ///< 1 / sqrt(d) when normalized
  std::vector<std::string> dropped_features;
  TargetTransform target_transform = TargetTransform::none;
  std::vector<std::string> warnings;
  std::string generator;                   ///< RNG algorithm for synthetic sources
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

/// Inputs inside the closed ball of radius 1/2 and their targets.
struct Dataset {
  RowMatrix X;
  Vector y;
  PreprocessRecord prep;

  int dim() const { return static_cast<int>(X.cols()); }
  Index size() const { return X.rows(); }
};

/// Uniform samples from the ball of radius 1/2 in R^d.
RowMatrix sample_ball(int d, Index p, std::uint64_t seed);

/// g1(2|x|) with g1(r) = (r - 0.1)(r - 0.5)(r - 0.9); x in R^3.
double synth_f1(std::span<const double> x);

/// Wendland-type g2(2.2|x|) with g2(r) = (1 - r)^6 (35 r^2 + 18 r + 3) for r <= 1; x in R^4.
double synth_f2(std::span<const double> x);

int target_dim(SyntheticTarget target);
double synth_value(SyntheticTarget target, std::span<const double> x);

/// p ball samples with targets f(x) + N(0, delta^2). Inputs depend only on
/// the seed, so delta = 0 with the same seed yields the clean test variant.
Dataset make_dataset(SyntheticTarget target, Index p, double delta, std::uint64_t seed);

/// Min-max normalises every input column, maps the unit cube into the ball
/// of radius 1/2, optionally applies log(1 + y) to the target. Constant
/// columns are dropped and noted in the record.
Dataset ingest_table(const CsvTable& table, const std::string& target_column, bool log_transform);
Dataset ingest_csv(const std::string& path, const std::string& target_column, bool log_transform);

/// Reads rows that are already inside the ball, without normalisation.
Dataset load_prepared_csv(const std::string& path, const std::string& target_column);

/// Maps raw input columns with the stored constants; never modifies `prep`.
RowMatrix transform_inputs(const CsvTable& table, const PreprocessRecord& prep);
Vector transform_targets(const Vector& y, const PreprocessRecord& prep);
Vector inverse_transform_targets(const Vector& y, const PreprocessRecord& prep);

Dataset subset(const Dataset& data, std::span<const Index> rows);

void write_dataset_csv(const std::string& path, const Dataset& data);

}  // namespace csketch
