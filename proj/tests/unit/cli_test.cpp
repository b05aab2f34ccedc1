#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mirrorplace/cli.hpp"
#include "mirrorplace/io.hpp"

namespace mirrorplace {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kPath5 = std::string(MIRRORPLACE_TEST_DATA_DIR) + "/path5.json";
const std::string kUlaknet = std::string(MIRRORPLACE_DATA_DIR) + "/topologyzoo/Ulaknet.graphml";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mirrorplace_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Cli, PlaceDragoonOnPathOfFive) {
  const CliRun r = run_cli({"place", "--algo", "dragoon", "--k", "2", "--scenario", kPath5});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_EQ(report["placement"]["fitness"]["maximum"], 1.0);
  EXPECT_EQ(report["placement"]["servers"], json::array({1, 4}));
  EXPECT_FALSE(report["metadata"].contains("timestamp"));
}

TEST(Cli, OracleOnPathOfFive) {
  const CliRun r = run_cli({"oracle", "--k", "2", "--scenario", kPath5});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(r.out);
  EXPECT_EQ(report["optimum"], 1.0);
  EXPECT_TRUE(report["bound_holds"].get<bool>());
  for (const json& run : report["two_approx"]) EXPECT_LE(run["maximum"].get<double>(), 2.0);
}

TEST(Cli, UnknownAlgorithmListsAllSeven) {
  const CliRun r = run_cli({"place", "--algo", "nosuch", "--scenario", kPath5});
  EXPECT_EQ(r.code, 1);
  for (const char* name : {"dragoon", "two-approx", "greedy", "macqueen", "kmeans++", "monte-carlo", "genetic"})
    EXPECT_NE(r.err.find(name), std::string::npos) << name;
}

TEST(Cli, UsageAndValidationErrorsExitOne) {
  EXPECT_EQ(run_cli({"place", "--scenario", kPath5, "--metric", "p99"}).code, 1);
  EXPECT_EQ(run_cli({"place", "--scenario", kPath5, "--k", "9"}).code, 1);
  EXPECT_EQ(run_cli({"place", "--scenario", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, RuntimeErrorsExitTwo) {
  const CliRun r = run_cli({"oracle", "--scenario", kUlaknet, "--k", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, PlaceIsByteIdenticalAcrossRuns) {
  for (const char* algo : {"dragoon", "two-approx", "genetic", "kmeans++", "monte-carlo"}) {
    const fs::path a = fresh_dir(std::string("det_a_") + algo), b = fresh_dir(std::string("det_b_") + algo);
    ASSERT_EQ(run_cli({"place", "--algo", algo, "--k", "4", "--scenario", kUlaknet, "--seed", "9", "--trace",
                       "--out", a.string()}).code, 0);
    ASSERT_EQ(run_cli({"place", "--algo", algo, "--k", "4", "--scenario", kUlaknet, "--seed", "9", "--trace",
                       "--out", b.string()}).code, 0);
    EXPECT_EQ(read_text_file(a / "placement.json"), read_text_file(b / "placement.json")) << algo;
  }
}

TEST(Cli, TimestampOnlyWhenRequested) {
  const CliRun r = run_cli({"place", "--scenario", kPath5, "--timestamp"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["metadata"].contains("timestamp"));
}

TEST(Cli, SweepWritesJsonAndCsv) {
  const fs::path dir = fresh_dir("sweep");
  const CliRun r = run_cli({"sweep", "--scenario", kPath5, "--algo", "dragoon,greedy,two-approx", "--k", "1-3",
                            "--runs", "3", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = json::parse(read_text_file(dir / "sweep.json"));
  EXPECT_EQ(report["result"]["k_values"], json::array({1, 2, 3}));
  const std::string csv = read_text_file(dir / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,dragoon,greedy,two-approx");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Cli, EmitIlp) {
  const CliRun r = run_cli({"emit-ilp", "--scenario", kPath5, "--k", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("\\", 0), 0u);
  EXPECT_NE(r.out.find("Binaries"), std::string::npos);
  EXPECT_NE(r.out.find("End"), std::string::npos);
}

TEST(Cli, SimulateCacheBothObjectives) {
  for (const char* objective : {"distance", "profile"}) {
    const CliRun r = run_cli({"simulate-cache", "--scenario", kUlaknet, "--k", "4", "--objective", objective,
                              "--layout", "scattered", "--similarity", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_GT(doc["report"]["total_requests"].get<std::uint64_t>(), 0u);
    EXPECT_GE(doc["report"]["cache_miss_ratio"].get<double>(), 0.0);
    EXPECT_LE(doc["report"]["cache_miss_ratio"].get<double>(), 1.0);
  }
  EXPECT_EQ(run_cli({"simulate-cache", "--scenario", kPath5, "--objective", "nearest"}).code, 1);
}

TEST(Cli, SaturationAndServersNeeded) {
  CliRun r = run_cli({"saturation", "--scenario", kPath5, "--k-range", "1-5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["values"].size(), 5u);
  r = run_cli({"servers-needed", "--scenario", kPath5, "--limit", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["servers"], 2);
  r = run_cli({"servers-needed", "--scenario", kPath5, "--limit", "1", "--exact"});
  EXPECT_EQ(json::parse(r.out)["servers"], 2);
}

TEST(Cli, ConvertThenPlaceOnConvertedScenario) {
  const fs::path dir = fresh_dir("convert");
  ASSERT_EQ(run_cli({"convert", "--input", kUlaknet, "--out", dir.string()}).code, 0);
  const fs::path converted = dir / "Ulaknet.json";
  ASSERT_TRUE(fs::exists(converted));
  EXPECT_EQ(load_scenario_file(converted), import_graphml(kUlaknet).topology);
  const CliRun direct = run_cli({"place", "--k", "3", "--scenario", kUlaknet});
  const CliRun via = run_cli({"place", "--k", "3", "--scenario", converted.string()});
  EXPECT_EQ(json::parse(direct.out)["placement"], json::parse(via.out)["placement"]);
}

TEST(Cli, ExportGeojson) {
  const CliRun r = run_cli({"export-geojson", "--scenario", kPath5, "--k", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json g = json::parse(r.out);
  EXPECT_EQ(g["type"], "FeatureCollection");
  EXPECT_EQ(g["features"].size(), 5u + 3u);
}

TEST(Cli, ConfigFileIsApplied) {
  const fs::path dir = fresh_dir("config");
  write_text_file(dir / "cfg.json", R"({"monte_carlo":{"trials":3}})");
  const CliRun r = run_cli({"place", "--algo", "monte-carlo", "--scenario", kPath5, "--config",
                            (dir / "cfg.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["metadata"]["config"]["monte_carlo"]["trials"], 3);
}

}  // namespace
}  // namespace mirrorplace
