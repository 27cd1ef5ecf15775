#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "csketch/csv.hpp"
#include "csketch/data.hpp"
#include "csketch/errors.hpp"

namespace {

using namespace csketch;

CsvTable table(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

TEST(SampleBall, InsideAndUniform) {
  const RowMatrix X = sample_ball(3, 100000, 1);
  EXPECT_LE(X.rowwise().norm().maxCoeff(), 0.5);
  const double inner = (X.rowwise().norm().array() <= 0.25).cast<double>().mean();
  EXPECT_NEAR(inner, 0.125, 0.01);
  EXPECT_EQ(sample_ball(4, 50, 9), sample_ball(4, 50, 9));
  EXPECT_EQ(sample_ball(3, 0, 1).rows(), 0);
}

TEST(Synthetic, F1Values) {
  const double zero[3] = {0, 0, 0};
  EXPECT_DOUBLE_EQ(synth_f1(zero), -0.045);
  const double quarter[3] = {0.0, 0.25, 0.0};
  EXPECT_NEAR(synth_f1(quarter), 0.0, 1e-17);
  const double small[3] = {0.03, 0.0, 0.04};
  EXPECT_NEAR(synth_f1(small), 0.0, 1e-17);
  EXPECT_THROW(synth_f1(std::span<const double>(zero, 2)), DataError);
}

TEST(Synthetic, F2Values) {
  const double zero[4] = {0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(synth_f2(zero), 3.0);
  const double edge[4] = {0.5, 0, 0, 0};
  EXPECT_EQ(synth_f2(edge), 0.0);
  const double r1[4] = {0, 0, 1.0 / 2.2, 0};
  EXPECT_NEAR(synth_f2(r1), 0.0, 1e-30);
  // (1 - 0.55)^6 (35 * 0.3025 + 9.9 + 3) at |x| = 0.25
  const double mid[4] = {0, 0.25, 0, 0};
  EXPECT_NEAR(synth_f2(mid), std::pow(0.45, 6) * (35 * 0.3025 + 9.9 + 3), 1e-15);
  EXPECT_THROW(synth_f2(std::span<const double>(zero, 3)), DataError);
}

TEST(MakeDataset, NoiseModel) {
  const Dataset clean = make_dataset(SyntheticTarget::f1, 100000, 0.0, 2);
  const Dataset noisy = make_dataset(SyntheticTarget::f1, 100000, 0.1, 2);
  EXPECT_EQ(clean.X, noisy.X);
  for (Index i = 0; i < 50; ++i) {
    const Eigen::RowVector3d x = clean.X.row(i);
    EXPECT_EQ(clean.y(i), synth_f1(std::span<const double>(x.data(), 3)));
  }
  const Vector e = noisy.y - clean.y;
  const double sd = std::sqrt((e.array() - e.mean()).square().sum() / (e.size() - 1));
  EXPECT_NEAR(sd, 0.1, 0.002);
  const Dataset again = make_dataset(SyntheticTarget::f1, 100000, 0.1, 2);
  EXPECT_EQ(again.y, noisy.y);
  EXPECT_EQ(make_dataset(SyntheticTarget::f2, 10, 0.0, 1).dim(), 4);
  EXPECT_EQ(noisy.prep.source, DataSource::synthetic_f1);
  EXPECT_EQ(noisy.prep.noise_std, 0.1);
}

TEST(Ingest, SingleFeature) {
  const Dataset d = ingest_table(table("x,y\n0,1\n5,2\n10,3\n"), "y", false);
  ASSERT_EQ(d.dim(), 1);
  EXPECT_DOUBLE_EQ(d.X(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(d.X(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(d.X(2, 0), 0.5);
  EXPECT_EQ(d.y, Eigen::Vector3d(1, 2, 3));
}

TEST(Ingest, CubeCornerOnSphere) {
  const Dataset d = ingest_table(table("a,b,c,d,y\n0,0,0,0,0\n1,2,3,4,0\n0.5,1,1,1,0\n"), "y", false);
  EXPECT_NEAR(d.X.row(1).norm(), 0.5, 1e-15);
  EXPECT_NEAR(d.X.row(0).norm(), 0.5, 1e-15);
  EXPECT_LE(d.X.rowwise().norm().maxCoeff(), 0.5 + 1e-12);
  EXPECT_DOUBLE_EQ(d.prep.ball_scale, 0.5);
}

TEST(Ingest, LogTargetAndConstantColumn) {
  const Dataset d = ingest_table(table("a,k,y\n1,7,0\n2,7,3\n4,7,1e3\n"), "y", true);
  EXPECT_EQ(d.dim(), 1);
  EXPECT_EQ(d.prep.dropped_features, std::vector<std::string>{"k"});
  EXPECT_FALSE(d.prep.warnings.empty());
  EXPECT_EQ(d.y(0), 0.0);
  EXPECT_DOUBLE_EQ(d.y(1), std::log(4.0));
  EXPECT_DOUBLE_EQ(inverse_transform_targets(d.y, d.prep)(2), 1e3);
}

TEST(Ingest, Errors) {
  EXPECT_THROW(ingest_table(table("a,b\n1,2\n2,3\n"), "y", false), DataError);
  EXPECT_THROW(table("a,y\n1,x\n"), DataError);
  EXPECT_THROW(table("a,y\n1,2,3\n"), DataError);
  EXPECT_THROW(ingest_table(table("a,y\n1,-2\n2,3\n"), "y", true), DataError);
}

TEST(Ingest, TestRowsUseTrainingStatistics) {
  const CsvTable train = table("a,b,y\n0,10,1\n4,20,2\n2,30,3\n");
  const Dataset d = ingest_table(train, "y", false);
  const PreprocessRecord before = d.prep;
  const RowMatrix again = transform_inputs(train, d.prep);
  EXPECT_EQ(again, d.X);
  const RowMatrix held = transform_inputs(table("a,b\n8,0\n"), d.prep);
  EXPECT_DOUBLE_EQ(held(0, 0), (8.0 / 4 - 0.5) / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(held(0, 1), (-0.5 - 0.5) / std::sqrt(2.0));
  EXPECT_EQ(d.prep.feature_min, before.feature_min);
  EXPECT_EQ(d.prep.feature_max, before.feature_max);
}

TEST(Csv, FormatsSeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  std::ostringstream out;
  RowMatrix v(1, 2);
  v << 1.0 / 3, -4.5;
  write_csv(out, {"a", "b"}, v);
  EXPECT_EQ(out.str(), "a,b\n0.33333333333333331,-4.5\n");
  const CsvTable back = table(out.str());
  EXPECT_EQ(back.values, v);
}

TEST(Subset, PicksRows) {
  const Dataset d = make_dataset(SyntheticTarget::f1, 10, 0.0, 3);
  const std::vector<Index> rows{7, 2};
  const Dataset s = subset(d, rows);
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.X.row(0), d.X.row(7));
  EXPECT_EQ(s.y(1), d.y(2));
}

}  // namespace
