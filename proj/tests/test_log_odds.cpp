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
#include "ogf/log_odds.hpp"

#include <doctest.h>

#include <random>

using namespace ogf;

TEST_CASE("log-odds increments")
{
  LogOddsMap map(4);
  map.update(Measurement{1, 1, 0});
  CHECK(map.logodds(1) == doctest::Approx(0.8472978603872037).epsilon(1e-15));
  map.update(Measurement{1, -1, 1});
  CHECK(map.logodds(1) == doctest::Approx(0.4418327522790392).epsilon(1e-14));
  for (int k = 0; k < 20; ++k) {
    map.update(Measurement{2, 1, 0});
  }
  CHECK(map.logodds(2) == 3.5);
  for (int k = 0; k < 20; ++k) {
    map.update(Measurement{3, -1, 0});
  }
  CHECK(map.logodds(3) == -3.5);
  CHECK_THROWS_AS(map.update(Measurement{4, 1, 0}), InvalidCell);
}

TEST_CASE("log-odds classification")
{
  LogOddsMap map(3);
  map.update(Measurement{0, 1, 0});
  LogOddsConfig sym;
  sym.miss = -sym.hit;
  LogOddsMap mirrored(3, sym);
  mirrored.update(Measurement{2, -1, 0});
  const Thresholds th;
  CHECK(map.classify(th).states == std::vector<std::int8_t>{1, 0, 0});
  CHECK(mirrored.classify(th).states == std::vector<std::int8_t>{0, 0, -1});
}

TEST_CASE("log-odds cells are independent")
{
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> cell(0, 49);
  LogOddsMap map(50);
  for (int k = 0; k < 500; ++k) {
    const std::vector<double> before(map.values().begin(), map.values().end());
    const Measurement m{cell(rng), k % 3 ? 1 : -1, 0};
    map.update(m);
    for (std::size_t i = 0; i < 50; ++i) {
      if (i != m.cell) {
        CHECK(map.logodds(i) == before[i]);
      }
      CHECK(map.logodds(i) >= -3.5);
      CHECK(map.logodds(i) <= 3.5);
    }
  }
}

TEST_CASE("noise-free distinct samples are marked as measured")
{
  LogOddsConfig sym;
  sym.miss = -sym.hit;
  LogOddsMap map(30, sym);
  std::vector<Measurement> batch;
  for (std::size_t i = 0; i < 30; i += 2) {
    batch.push_back(Measurement{i, i % 4 ? 1 : -1, i});
  }
  map.process(batch);
  const TernaryMap t = map.classify(Thresholds{});
  for (std::size_t i = 0; i < 30; ++i) {
    if (i % 2) {
      CHECK(t.states[i] == 0);
    } else {
      CHECK(t.states[i] == (i % 4 ? 1 : -1));
    }
  }
}
