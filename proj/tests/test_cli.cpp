// Copyright 2026 The ogf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace
{

struct Run
{
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir(const std::string & tag)
{
  static std::mt19937_64 rng(std::random_device{}());
  const fs::path dir = fs::temp_directory_path() / ("ogf_cli_" + tag + "_" + std::to_string(rng()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run ogf(const std::string & args, const fs::path & dir)
{
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd =
    std::string("\"") + OGF_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path & p)
{
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) {
      fields.push_back(f);
    }
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("sim2d writes one row per sample count and trial")
{
  const fs::path dir = scratch_dir("sim2d");
  const Run r = ogf("sim2d --samples 300 --no-timing --out \"" + dir.string() + "\"", dir);
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir / "results.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].front() == "n");
  CHECK(rows[1].front() == "300");
  for (const char * f : {"run.json", "map_ogf.csv", "map_ep.csv", "map_baseline.csv"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto run = nlohmann::json::parse(slurp(dir / "run.json"));
  CHECK(run.contains("command"));
  fs::remove_all(dir);
}

TEST_CASE("sim2d with zero samples leaves the maps unknown")
{
  const fs::path dir = scratch_dir("zero");
  const Run r = ogf("sim2d --samples 0 --no-timing --out \"" + dir.string() + "\"", dir);
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir / "results.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][2] == "0");
  CHECK(rows[1][3] == "0");
  CHECK(rows[1][4] == "0");
  for (const char * f : {"map_ogf.csv", "map_ep.csv", "map_baseline.csv"}) {
    const auto cells = read_csv(dir / f);
    REQUIRE(cells.size() == 626);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      CHECK(cells[i][3] == "0");
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("sim2d rejects more samples than cells")
{
  const fs::path dir = scratch_dir("toomany");
  const Run r = ogf("sim2d --samples 1000 --out \"" + dir.string() + "\"", dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("exceeds the cell count 625") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("sim2d output is byte-identical without timing")
{
  const fs::path a = scratch_dir("repro_a");
  const fs::path b = scratch_dir("repro_b");
  REQUIRE(ogf("sim2d --samples 60,120 --no-timing --out \"" + a.string() + "\"", a).code == 0);
  REQUIRE(ogf("sim2d --samples 60,120 --no-timing --out \"" + b.string() + "\"", b).code == 0);
  for (const char * f : {"results.csv", "map_ogf.csv", "map_ep.csv", "map_baseline.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("compare reports the filter equal to single-sweep EP")
{
  const fs::path dir = scratch_dir("compare");
  const Run r = ogf("compare --samples 300 --out \"" + dir.string() + "\"", dir);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("ogf_vs_single_sweep_mean").get<double>() < 1e-9);
  CHECK(j.at("ogf_vs_single_sweep_cov").get<double>() < 1e-9);
  CHECK(j.at("mapdiff_ogf_vs_converged").get<double>() < 0.04);
  CHECK(j.at("ep_converged").get<bool>());
  CHECK(fs::exists(dir / "compare.json"));
  CHECK(fs::exists(dir / "run.json"));

  const Run one = ogf("compare --samples 300 --ep-max-sweeps 1 --out \"" + dir.string() + "\"", dir);
  REQUIRE(one.code == 0);
  const auto k = nlohmann::json::parse(one.out);
  CHECK(k.at("converged_vs_single_sweep_mean").get<double>() == 0.0);
  CHECK(k.at("converged_vs_single_sweep_cov").get<double>() == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("synthetic room through map3d")
{
  const fs::path dir = scratch_dir("room");
  const Run s = ogf("synth-room --out \"" + dir.string() + "\"", dir);
  REQUIRE(s.code == 0);
  CHECK(s.out.find("wall_cells 192") != std::string::npos);

  const fs::path out = dir / "map";
  const Run m = ogf("map3d --poses \"" + (dir / "poses.csv").string() + "\" --scans \"" +
                      (dir / "scans.csv").string() + "\" --dims 12,12,4 --origin 0,0,0 --out \"" + out.string() + "\"",
                    dir);
  REQUIRE(m.code == 0);
  for (const char * f : {"run.json", "map.csv", "occupied.ply", "stats.json"}) {
    CHECK(fs::exists(out / f));
  }
  const auto stats = nlohmann::json::parse(slurp(out / "stats.json"));
  CHECK(stats.at("unknown_cells").get<long>() > 0);

  std::map<std::array<std::string, 3>, std::string> truth;
  const auto truth_rows = read_csv(dir / "truth.csv");
  for (std::size_t i = 1; i < truth_rows.size(); ++i) {
    truth[{truth_rows[i][0], truth_rows[i][1], truth_rows[i][2]}] = truth_rows[i][3];
  }
  const auto cells = read_csv(out / "map.csv");
  REQUIRE(cells.size() == truth_rows.size());
  int surface_occupied = 0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const auto it = truth.find({cells[i][0], cells[i][1], cells[i][2]});
    REQUIRE(it != truth.end());
    surface_occupied += it->second == "1" && cells[i][3] == "1";
  }
  CHECK(std::abs(surface_occupied - 192) <= 0.02 * 192);
  fs::remove_all(dir);
}

TEST_CASE("map3d input and capacity errors")
{
  const fs::path dir = scratch_dir("errors");
  const std::string missing = (dir / "nope.csv").string();
  const Run r = ogf("map3d --poses \"" + missing + "\" --scans \"" + missing + "\" --out \"" + dir.string() + "\"",
                    dir);
  CHECK(r.code == 2);
  CHECK(r.err.find(missing) != std::string::npos);

  REQUIRE(ogf("synth-room --out \"" + dir.string() + "\"", dir).code == 0);
  const Run d = ogf("map3d --poses \"" + (dir / "poses.csv").string() + "\" --scans \"" +
                      (dir / "scans.csv").string() +
                      "\" --dims 12,12,4 --origin 0,0,0 --backend dense --dense-limit 100 --out \"" +
                      (dir / "map").string() + "\"",
                    dir);
  CHECK(d.code == 2);
  CHECK_FALSE(d.err.empty());
  fs::remove_all(dir);
}

TEST_CASE("unknown options are usage errors")
{
  const fs::path dir = scratch_dir("usage");
  CHECK(ogf("sim2d --bogus", dir).code == 2);
  CHECK(ogf("--help", dir).code == 0);
  fs::remove_all(dir);
}
