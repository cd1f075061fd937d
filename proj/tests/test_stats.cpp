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

#include "ogf/stats.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ogf::stats;

TEST_CASE("pdf values and symmetry")
{
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(std_normal_pdf(1.0) == doctest::Approx(0.24197072451914335).epsilon(1e-14));
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    CHECK(std_normal_pdf(x) == std_normal_pdf(-x));
  }
}

TEST_CASE("cdf values")
{
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(1.96) == doctest::Approx(0.9750021048517796).epsilon(1e-14));
  CHECK(std_normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(std_normal_cdf(-1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
}

TEST_CASE("cdf complement identity and monotonicity")
{
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) < 1e-14);
    CHECK(std_normal_cdf(x) >= prev);
    prev = std_normal_cdf(x);
  }
}

TEST_CASE("cdf derivative matches pdf")
{
  const double h = 1e-5;
  for (double x = -5.0; x <= 5.0; x += 0.05) {
    const double fd = (std_normal_cdf(x + h) - std_normal_cdf(x - h)) / (2.0 * h);
    CHECK(std::abs(fd - std_normal_pdf(x)) < 1e-6);
  }
}

TEST_CASE("cdf against multiprecision")
{
  double worst = 0.0;
  for (double x = -8.0; x <= 8.0; x += 1.0 / 64.0) {
    worst = std::max(worst, oracle::relerr(std_normal_cdf(x), oracle::cdf(x)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("inverse Mills ratio values")
{
  CHECK(inv_mills(0.0) == doctest::Approx(0.7978845608028654).epsilon(1e-14));
  CHECK(inv_mills(-10.0) == doctest::Approx(10.098093233962512).epsilon(1e-12));
  CHECK(inv_mills(10.0) == doctest::Approx(7.694598626706419e-23).epsilon(1e-10));
  CHECK(inv_mills(-40.0) == doctest::Approx(40.02496884720726).epsilon(1e-12));
}

TEST_CASE("inverse Mills ratio tail behaviour")
{
  const double r = inv_mills(-30.0);
  CHECK(r > 30.0);
  CHECK(r < 30.04);
  double prev_gap = inv_mills(-5.0) - 5.0;
  for (double z = -6.0; z >= -200.0; z -= 1.0) {
    const double gap = inv_mills(z) + z;
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(std::isfinite(inv_mills(-1e6)));
}

TEST_CASE("inverse Mills ratio against multiprecision")
{
  double worst = 0.0;
  for (double z = -40.0; z <= 8.0; z += 1.0 / 32.0) {
    const double got = inv_mills(z);
    CHECK(got > 0.0);
    worst = std::max(worst, oracle::relerr(got, oracle::inv_mills(z)));
  }
  CHECK(worst < 1e-10);
}
