#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "csketch/csv.hpp"
#include "csketch/serialize.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("csketch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), {"csketch", "--out-dir", dir_.string()});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = csketch::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  std::string read(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"fit"}).code, 1);
  EXPECT_EQ(run({"sphere-gen", "--d", "3", "--N", "x"}).code, 1);
  EXPECT_EQ(run({"bench", "sim9"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, OutputStaysInOutDir) {
  EXPECT_EQ(run({"make-data", "--out", "../escape.csv"}).code, 1);
  EXPECT_EQ(run({"make-data", "--out", "/tmp/abs.csv"}).code, 1);
  EXPECT_FALSE(fs::exists(dir_.parent_path() / "escape.csv"));
}

TEST_F(CliTest, ComponentsCheck) {
  const Outcome ok = run({"components-check", "--m-max", "5", "--tuples", "500", "--grid", "20001"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const std::string csv = read(path("components_check.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "component,m,tau,J,sup_error,reference,ratio,ok");
  EXPECT_EQ(csv.find(",0\n"), std::string::npos);
  EXPECT_EQ(run({"components-check", "--m-max", "4", "--grid", "3"}).code, 4);
}

TEST_F(CliTest, SphereGen) {
  const Outcome r = run({"sphere-gen", "--d", "3", "--N", "33", "--out", "eq.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const csketch::CsvTable t = csketch::read_csv(path("eq.csv"));
  EXPECT_EQ(t.values.rows(), 33);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x1", "x2", "x3"}));
  EXPECT_EQ(run({"sphere-gen", "--d", "1", "--N", "3"}).code, 1);
}

TEST_F(CliTest, FitPredictRoundTrip) {
  ASSERT_EQ(run({"make-data", "--size", "300", "--seed", "4", "--out", "train.csv"}).code, 0);
  const Outcome fit = run({"fit", "--data", path("train.csv"), "--J", "2", "--n", "4", "--N", "20", "--tau", "0.3"});
  ASSERT_EQ(fit.code, 0) << fit.err;
  const auto summary = nlohmann::json::parse(fit.out);
  EXPECT_GT(summary["train_rmse"].get<double>(), 0.0);

  const Outcome pred = run({"predict", "--model", path("model.json"), "--data", path("train.csv")});
  ASSERT_EQ(pred.code, 0) << pred.err;
  EXPECT_NEAR(nlohmann::json::parse(pred.out)["rmse"].get<double>(), summary["train_rmse"].get<double>(), 1e-12);

  const csketch::FittedModel model = csketch::load_model(path("model.json"));
  const csketch::CsvTable data = csketch::read_csv(path("train.csv"));
  const csketch::RowMatrix X = data.values.leftCols(3);
  const csketch::CsvTable out = csketch::read_csv(path("predictions.csv"));
  const csketch::Vector direct = csketch::predict(model, X);
  for (csketch::Index i = 0; i < direct.size(); ++i) EXPECT_EQ(out.values(i, 0), direct(i));

  // load, save, load gives identical JSON
  const std::string first = read(path("model.json"));
  csketch::save_model(path("copy.json"), csketch::load_model(path("model.json")));
  EXPECT_EQ(read(path("copy.json")), first);
}

TEST_F(CliTest, PredictRejectsWrongDimension) {
  ASSERT_EQ(run({"make-data", "--size", "50", "--out", "f1.csv"}).code, 0);
  ASSERT_EQ(run({"make-data", "--target", "f2", "--size", "50", "--out", "f2.csv"}).code, 0);
  ASSERT_EQ(run({"fit", "--data", path("f1.csv"), "--n", "2", "--N", "4"}).code, 0);
  EXPECT_EQ(run({"predict", "--model", path("model.json"), "--data", path("f2.csv")}).code, 2);
  EXPECT_EQ(run({"predict", "--model", path("missing.json"), "--data", path("f1.csv")}).code, 2);
  EXPECT_EQ(run({"fit", "--data", path("missing.csv")}).code, 2);
}

TEST_F(CliTest, NormalizedFitOnRawTable) {
  std::ofstream f(path("raw.csv"));
  f << "a,b,const,target\n";
  for (int i = 0; i < 60; ++i) f << i << ',' << (i * 7) % 13 << ",5," << 0.1 * i + ((i * 7) % 13) << '\n';
  f.close();
  const Outcome fit = run({"fit", "--data", path("raw.csv"), "--normalize", "--target-column", "target", "--n", "3", "--N", "4",
                       "--J", "2", "--tau", "0.5"});
  ASSERT_EQ(fit.code, 0) << fit.err;
  std::ofstream g(path("new.csv"));
  g << "b,a,const\n3,10,5\n50,200,5\n";
  g.close();
  const Outcome pred = run({"predict", "--model", path("model.json"), "--data", path("new.csv"), "--out", "p.csv"});
  ASSERT_EQ(pred.code, 0) << pred.err;
  EXPECT_NE(pred.err.find("scaled onto the ball"), std::string::npos);
  std::ofstream h(path("extra.csv"));
  h << "a,b,c\n1,2,3\n";
  h.close();
  EXPECT_EQ(run({"predict", "--model", path("model.json"), "--data", path("extra.csv")}).code, 2);
}

TEST_F(CliTest, SelectWritesTableAndModel) {
  ASSERT_EQ(run({"make-data", "--size", "200", "--out", "d.csv"}).code, 0);
  const Outcome r = run({"select", "--data", path("d.csv"), "--grid-J", "1,2", "--grid-n", "2,3", "--grid-N", "5,10",
                     "--grid-tau", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const csketch::CsvTable t = csketch::read_csv(path("validation.csv"));
  EXPECT_EQ(t.values.rows(), 8);
  EXPECT_TRUE(fs::exists(path("model.json")));
  const Outcome h = run({"select", "--data", path("d.csv"), "--holdout", "--J", "2", "--tau", "0.5", "--table", "h.csv"});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_EQ(csketch::read_csv(path("h.csv")).values.rows(), 3);  // 3^5 >= 200
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  ASSERT_EQ(run({"make-data", "--size", "100", "--out", "d.csv"}).code, 0);
  std::ofstream c(path("cfg.json"));
  c << R"({"sketch": {"J": 2, "n": 3, "N": 7, "tau": 0.5}})";
  c.close();
  const Outcome r = run({"--config", path("cfg.json"), "fit", "--data", path("d.csv"), "--N", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(r.out);
  EXPECT_EQ(s["J"], 2);
  EXPECT_EQ(s["N"], 9);
  std::ofstream bad(path("bad.json"));
  bad << R"({"sketch": {"K": 2}})";
  bad.close();
  EXPECT_EQ(run({"--config", path("bad.json"), "fit", "--data", path("d.csv")}).code, 1);
}

TEST_F(CliTest, BenchIsDeterministic) {
  const std::vector<std::string> common{"--trials", "2", "--train-size", "150", "--test-size", "100", "--grid-J", "1,2",
                                        "--grid-n", "2,3", "--grid-N", "5,10", "--grid-tau", "0.5", "--noise", "0,0.1"};
  for (const std::string exp : {"sim2", "sim3", "sim4"}) {
    std::vector<std::string> a{"bench", exp};
    a.insert(a.end(), common.begin(), common.end());
    ASSERT_EQ(run(a).code, 0);
    const fs::path first = dir_ / exp;
    fs::rename(first, dir_ / (exp + "_first"));
    ASSERT_EQ(run(a).code, 0);
    for (const auto& entry : fs::directory_iterator(first)) {
      if (entry.path().extension() == ".csv" || entry.path().extension() == ".svg") {
        EXPECT_EQ(read(entry.path()), read(dir_ / (exp + "_first") / entry.path().filename())) << entry.path();
      }
    }
    EXPECT_TRUE(fs::exists(first / "trials.csv"));
    EXPECT_TRUE(fs::exists(first / "report.json"));
  }
}

TEST_F(CliTest, BenchReal) {
  std::ofstream f(path("real.csv"));
  f << "u,v,y\n";
  for (int i = 0; i < 120; ++i) f << std::sin(i) << ',' << std::cos(3 * i) << ',' << std::sin(i) * std::cos(3 * i) << '\n';
  f.close();
  const Outcome r = run({"bench", "real", "--train-csv", path("real.csv"), "--trials", "2", "--grid-J", "1", "--grid-n", "2,3",
                     "--grid-N", "4", "--grid-tau", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "real" / "optima.csv"));
  EXPECT_EQ(run({"bench", "real"}).code, 1);
}

}  // namespace
