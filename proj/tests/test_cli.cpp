#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdc/io.hpp"
#include "mdc/rng.hpp"
#include "mdc/types.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mdc;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string err;
};

fs::path work_dir() {
  const fs::path d = fs::temp_directory_path() / "mdc_cli_tests";
  fs::create_directories(d);
  return d;
}

CliRun run(const std::string& args) {
  const char* cli = std::getenv("MDC_CLI");
  REQUIRE(cli != nullptr);
  const fs::path dir = work_dir();
  const fs::path errfile = dir / "stderr.txt";
  const std::string cmd = "cd " + dir.string() + " && " + cli + " " + args +
                          " > /dev/null 2> " + errfile.string();
  const int rc = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(errfile);
  std::ostringstream os;
  os << in.rdbuf();
  r.err = os.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int line_count(const fs::path& p) {
  const std::string s = slurp(p);
  int lines = 0;
  for (char c : s)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("points csv round-trips exactly") {
  Rng rng(19);
  MatrixXd pts(37, 3);
  for (int i = 0; i < 37; ++i)
    for (int j = 0; j < 3; ++j) pts(i, j) = rng.normal() * std::pow(10.0, rng.uniform_int(7) - 3);
  const fs::path p = work_dir() / "roundtrip.csv";
  io::write_points_csv(p, pts);
  const MatrixXd back = io::read_points_csv(p);
  CHECK((back.array() == pts.array()).all());
}

TEST_CASE("labels csv is one 1-indexed integer per line") {
  const auto r = run("datagen --shape rings --n 100 --seed 1 --out r100.csv");
  REQUIRE(r.exit_code == 0);
  CHECK(line_count(work_dir() / "r100.csv") == 100);
  CHECK(line_count(work_dir() / "r100.csv.labels.csv") == 100);
  const VectorXi labels = io::read_labels_csv(work_dir() / "r100.csv.labels.csv");
  CHECK(labels.minCoeff() == 1);
  CHECK(labels.maxCoeff() == 3);
}

TEST_CASE("datagen with a repeated seed is byte-identical") {
  REQUIRE(run("datagen --shape gaussians --n 64 --seed 9 --out a.csv").exit_code == 0);
  REQUIRE(run("datagen --shape gaussians --n 64 --seed 9 --out b.csv").exit_code == 0);
  CHECK(slurp(work_dir() / "a.csv") == slurp(work_dir() / "b.csv"));
  REQUIRE(run("datagen --shape gaussians --n 64 --seed 10 --out c.csv").exit_code == 0);
  CHECK(slurp(work_dir() / "a.csv") != slurp(work_dir() / "c.csv"));
}

TEST_CASE("cluster emits labels for every row plus a sidecar") {
  REQUIRE(run("datagen --shape trapezoid --n 80 --seed 2 --out t80.csv").exit_code == 0);
  const auto r = run(
      "cluster --input t80.csv --t 32 --sigma 0.33 --sigma0 0.4 --complete "
      "--kde-nn 10 --out t80.labels.csv");
  REQUIRE(r.exit_code == 0);
  CHECK(line_count(work_dir() / "t80.labels.csv") == 80);
  const json side = json::parse(slurp(work_dir() / "t80.labels.csv.json"));
  CHECK(side["k"].get<int>() >= 1);
  CHECK(side["score_curve"].size() == 80);
  CHECK(side["mode_indices"].size() == side["k"].get<size_t>());
  // score curve sorted non-increasing
  double prev = 1e300;
  for (const auto& v : side["score_curve"]) {
    CHECK(v.get<double>() <= prev);
    prev = v.get<double>();
  }
}

TEST_CASE("cluster runs at t = 0") {
  REQUIRE(run("datagen --shape trapezoid --n 40 --seed 2 --out t40.csv").exit_code == 0);
  CHECK(run("cluster --input t40.csv --t 0 --sigma 0.33 --sigma0 0.4 --complete "
            "--kde-nn 8 --out t40.labels.csv")
            .exit_code == 0);
}

TEST_CASE("usage errors carry a machine-parsable code") {
  auto r = run("cluster --input nowhere.csv --t 1 --sigma -3 --sigma0 0.4 "
               "--complete --kde-nn 8 --out x.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.err.rfind("E_", 0) == 0);

  r = run("datagen --shape pentagon --out x.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.err.rfind("E_USAGE", 0) == 0);

  r = run("compare --input t40.csv --truth t40.csv.labels.csv --algorithms "
          "dbscan --sigma 0.33 --sigma0 0.4 --complete --kde-nn 8 --out x.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.err.rfind("E_USAGE", 0) == 0);

  r = run("cluster --input missing_file.csv --t 1 --sigma 1 --sigma0 1 "
          "--complete --kde-nn 8 --out x.csv");
  CHECK(r.exit_code != 0);
  CHECK(r.err.rfind("E_IO", 0) == 0);
}

TEST_CASE("mlund on identical points reports a null optimal") {
  {
    MatrixXd pts = MatrixXd::Zero(12, 2);
    io::write_points_csv(work_dir() / "flat.csv", pts);
  }
  const auto r = run(
      "mlund --input flat.csv --sigma 1 --sigma0 1 --complete --kde-nn 4 "
      "--out flat.json");
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(slurp(work_dir() / "flat.json"));
  CHECK(rep["optimal"].is_null());
  CHECK(rep["j"].empty());
  CHECK(rep["times"].size() == rep["k_t"].size());
}

TEST_CASE("mlund report schema on a structured input") {
  REQUIRE(run("datagen --shape trapezoid --n 80 --seed 4 --out t4.csv").exit_code == 0);
  const auto r = run(
      "mlund --input t4.csv --sigma 0.33 --sigma0 0.4 --complete --kde-nn 10 "
      "--beta 2 --tau 1e-5 --out t4_report.json");
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(slurp(work_dir() / "t4_report.json"));
  REQUIRE(!rep["optimal"].is_null());
  const size_t grid = rep["times"].size();
  CHECK(rep["t"].get<int>() + 2 == static_cast<int>(grid));
  CHECK(rep["k_t"].size() == grid);
  CHECK(rep["labels_paths"].size() == grid);
  CHECK(rep["total_vi"].size() == rep["j"].size());
  // each per-time labels file exists with one row per point
  for (const auto& path : rep["labels_paths"])
    CHECK(line_count(work_dir() / path.get<std::string>()) == 80);
  // optimal time is a grid time and its labels path is listed
  const double t_opt = rep["optimal"]["time"].get<double>();
  bool found = false;
  for (const auto& t : rep["times"]) found |= t.get<double>() == t_opt;
  CHECK(found);
}

TEST_CASE("compare against own labels reaches nmi 1 and non-finite encodes as null") {
  REQUIRE(run("datagen --shape trapezoid --n 80 --seed 5 --out t5.csv").exit_code == 0);
  const auto r = run(
      "compare --input t5.csv --truth t5.csv.labels.csv --algorithms slc,kmeans "
      "--fixed-k 4 --sigma 0.33 --sigma0 0.4 --complete --kde-nn 10 --seed 0 "
      "--out t5_cmp.csv");
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(work_dir() / "t5_cmp.csv");
  CHECK(csv.find("algorithm,mode,k,nmi") == 0);
  CHECK(csv.find("slc,fixed-k,4,1") != std::string::npos);

  // json encodes non-finite interval endpoints as null
  json j;
  j["upper"] = std::numeric_limits<double>::infinity();
  CHECK(j.dump() == "{\"upper\":null}");
}

}  // TEST_SUITE
