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

#include "ogf/error.hpp"
#include "ogf/filter.hpp"
#include "ogf/io.hpp"
#include "ogf/kernel.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace ogf;

namespace
{

std::vector<Measurement> some_measurements(std::size_t n_cells, std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> cell(0, n_cells - 1);
  std::vector<Measurement> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(Measurement{cell(rng), k % 3 ? 1 : -1, k});
  }
  return out;
}

}  // namespace

TEST_CASE("ternary csv layout")
{
  const GridLattice lat({2, 3}, 1.0);
  LatentMap map = build_prior(lat, KernelConfig{});
  filter::update(map, Measurement{4, 1, 0});
  const TernaryMap t = classify(map, Thresholds{});
  std::ostringstream os;
  io::write_ternary_csv(os, map, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "cx,cy,cz,state,mean,variance");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    if (rows == 5) {
      CHECK(line.rfind("1,1,0,", 0) == 0);
    }
  }
  CHECK(rows == 6);
}

TEST_CASE("ply export lists occupied cells")
{
  const GridLattice lat({3}, 2.0);
  const TernaryMap t{{1, 0, 1}};
  std::ostringstream os;
  io::write_occupied_ply(os, lat, t);
  const std::string s = os.str();
  CHECK(s.rfind("ply\n", 0) == 0);
  CHECK(s.find("element vertex 2") != std::string::npos);
  CHECK(s.find("\n4 0 0\n") != std::string::npos);
}

TEST_CASE("measurement log round trip and errors")
{
  const auto batch = some_measurements(10, 25, 1);
  std::stringstream ss;
  io::write_measurements(ss, batch);
  CHECK(ss.str().rfind("t,cell,y\n", 0) == 0);
  CHECK(io::read_measurements(ss, 10) == batch);

  std::istringstream bad("t,cell,y\n0,3,1\n1,12,-1\n");
  try {
    io::read_measurements(bad, 10, "log.csv");
    FAIL("expected an error");
  } catch (const IoError & e) {
    CHECK(e.line() == 3);
  }
  std::istringstream bad_label("t,cell,y\n0,3,0\n");
  CHECK_THROWS_AS(io::read_measurements(bad_label, 10), IoError);
  std::istringstream bad_header("time,cell,y\n");
  CHECK_THROWS_AS(io::read_measurements(bad_header, 10), IoError);
}

TEST_CASE("dense checkpoint round trip")
{
  const GridLattice lat({4, 5}, 0.5, Point(1.0, 2.0, 0.0));
  LatentMap map = build_prior(lat, KernelConfig{0.7});
  filter::process(map, some_measurements(lat.size(), 30, 2));
  std::stringstream ss;
  io::save_checkpoint(ss, map);
  CHECK(ss.str().rfind("OGF1", 0) == 0);
  const LatentMap back = io::load_checkpoint(ss);
  CHECK(back.lattice() == lat);
  CHECK(back.backend() == CovarianceBackend::kDense);
  CHECK(back.mean() == map.mean());
  CHECK(back.covariance_matrix() == map.covariance_matrix());

  // Continuing from the checkpoint is identical to never stopping.
  LatentMap a = map;
  LatentMap b = back;
  const auto more = some_measurements(lat.size(), 10, 3);
  filter::process(a, more);
  filter::process(b, more);
  CHECK(a.mean() == b.mean());
}

TEST_CASE("sparse checkpoint round trip")
{
  const GridLattice lat({6, 6, 3}, 0.2);
  LatentMap map = build_prior(lat, KernelConfig{0.1, 0.6}, CovarianceBackend::kSparse);
  filter::process(map, some_measurements(lat.size(), 40, 4));
  std::stringstream ss;
  io::save_checkpoint(ss, map);
  const LatentMap back = io::load_checkpoint(ss);
  CHECK(back.backend() == CovarianceBackend::kSparse);
  CHECK(back.mean() == map.mean());
  CHECK(back.covariance_matrix() == map.covariance_matrix());
  LatentMap a = map;
  LatentMap b = back;
  const auto more = some_measurements(lat.size(), 10, 5);
  filter::process(a, more);
  filter::process(b, more);
  CHECK(a.covariance_matrix() == b.covariance_matrix());
}

TEST_CASE("corrupt checkpoints are rejected")
{
  std::istringstream wrong_magic("OGF2xxxxxxxx");
  CHECK_THROWS_AS(io::load_checkpoint(wrong_magic), IoError);
  const LatentMap map = build_prior(GridLattice({3}, 1.0), KernelConfig{});
  std::stringstream ss;
  io::save_checkpoint(ss, map);
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 5);
  std::istringstream truncated(bytes);
  CHECK_THROWS_AS(io::load_checkpoint(truncated), IoError);
  CHECK_THROWS_AS(io::load_checkpoint(std::string("/nonexistent/ckpt.bin")), IoError);
}
