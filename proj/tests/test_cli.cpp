#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "willmore/cli.hpp"

namespace fs = std::filesystem;
using willmore::cli::run;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "willmore_cli_test" / name;
  fs::remove_all(p);
  return p;
}

int call(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int rc = run(args, out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, AnalyzeSphereReport) {
  auto dir = scratch("analyze");
  ASSERT_EQ(call({"analyze", "--gen", "sphere", "--subdiv", "4", "--out", dir.string()}), 0);
  auto j = nlohmann::json::parse(slurp(dir / "analyze.json"));
  EXPECT_EQ(j["tool"], "willmore");
  EXPECT_EQ(j["version"], "0.1.0");
  EXPECT_EQ(j["command"], "analyze");
  EXPECT_EQ(j["config"]["subdiv"], 4);
  EXPECT_TRUE(j["config"]["beta1_conjectured"].get<bool>());
  EXPECT_NEAR(j["result"]["willmore_over_4pi"].get<double>(), 1.0, 0.01);
  EXPECT_EQ(j["result"]["li_yau"]["violations"], 0);
  EXPECT_FALSE(j["config"].contains("threads"));
}

TEST(Cli, ExitCodes) {
  auto dir = scratch("codes").string();
  std::string err;
  EXPECT_EQ(call({"analyze", "--out", dir}, &err), 2);
  EXPECT_NE(err.find("--gen"), std::string::npos);
  EXPECT_EQ(call({"analyze", "--gen", "sphere", "--input", "x.obj", "--out", dir}), 2);
  EXPECT_EQ(call({"analyze", "--gen", "klein", "--out", dir}), 2);
  EXPECT_EQ(call({"analyze", "--gen", "sphere", "--delta", "0", "--out", dir}), 2);
  EXPECT_EQ(call({"analyze", "--gen", "sphere", "--beta", "1", "--out", dir}), 2);
  EXPECT_EQ(call({"analyze", "--gen", "torus", "--major", "1", "--out", dir}), 2);
  EXPECT_EQ(call({"uniformize", "--gen", "sphere", "--out", dir}, &err), 2);
  EXPECT_NE(err.find("spherical uniformization"), std::string::npos);
  EXPECT_EQ(call({"frobnicate"}), 2);
  EXPECT_EQ(call({"uniformize", "--gen", "torus", "--res", "16", "--tol", "residual_tolerance=1e-300",
                  "--out", dir}),
            3);
  EXPECT_EQ(call({"--help"}), 0);
}

TEST(Cli, InputFileAndMembership) {
  auto dir = scratch("input");
  ASSERT_EQ(call({"normalize", "--gen", "clifford-stereo", "--res", "24", "--out", dir.string()}), 0);
  auto mesh = (dir / "normalized.obj").string();
  ASSERT_EQ(call({"analyze", "--input", mesh, "--delta", "3.14", "--out", (dir / "a").string()}), 0);
  auto j = nlohmann::json::parse(slurp(dir / "a" / "analyze.json"));
  EXPECT_EQ(j["result"]["genus"], 1);
  EXPECT_TRUE(j["result"]["membership"]["member"].get<bool>());
}

TEST(Cli, ModulusAndSweep) {
  auto dir = scratch("modulus");
  ASSERT_EQ(call({"modulus", "--gen", "torus", "--major", "2", "--minor", "1", "--res", "48", "--out",
                  dir.string()}),
            0);
  auto j = nlohmann::json::parse(slurp(dir / "modulus.json"));
  EXPECT_NEAR(j["result"]["b"].get<double>(), std::sqrt(3.0), 0.05);
  ASSERT_EQ(call({"sweep", "--family", "tori", "--ratios", "1.5,2,3", "--res", "24", "--out", dir.string()}), 0);
  std::string csv = slurp(dir / "sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Cli, GausscheckWritesFaceTable) {
  auto dir = scratch("gauss");
  ASSERT_EQ(call({"gausscheck", "--gen", "perturbed-clifford", "--res", "24", "--xi-samples", "10", "--out",
                  dir.string()}),
            0);
  std::string csv = slurp(dir / "gausscheck_faces.csv");
  EXPECT_EQ(csv.substr(0, 8), "face_id,");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 24 * 24 * 2 + 1);
}

TEST(Cli, ReportsIndependentOfThreadCount) {
  const std::vector<std::vector<std::string>> cmds = {
      {"analyze", "--gen", "torus", "--res", "32"},
      {"uniformize", "--gen", "clifford-stereo", "--res", "32"},
      {"gausscheck", "--gen", "perturbed-clifford", "--res", "24", "--xi-samples", "5"}};
  int k = 0;
  for (auto c : cmds) {
    auto d1 = scratch("det" + std::to_string(k) + "a"), d2 = scratch("det" + std::to_string(k) + "b");
    ++k;
    auto a = c, b = c;
    a.insert(a.end(), {"--threads", "1", "--out", d1.string()});
    b.insert(b.end(), {"--threads", "3", "--out", d2.string()});
    ASSERT_EQ(call(a), 0);
    ASSERT_EQ(call(b), 0);
    for (const auto& e : fs::directory_iterator(d1))
      EXPECT_EQ(slurp(e.path()), slurp(d2 / e.path().filename())) << e.path();
  }
}
