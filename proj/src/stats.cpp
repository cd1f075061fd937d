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

#include <cmath>

namespace ogf::stats
{
namespace
{
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kInvSqrt2 = 0.707106781186547524400844362105;
constexpr double kTailSwitch = -5.0;

// 1 / R(x) for x > 0, where R(x) = (1 - cdf(x)) / pdf(x) is the Mills ratio.
// Continued fraction x + 1/(x + 2/(x + 3/(x + ...))), modified Lentz.
double reciprocal_mills_ratio(double x)
{
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < 10000; ++k) {
    d = x + k * d;
    if (std::fabs(d) < tiny) {
      d = tiny;
    }
    c = x + k / c;
    if (std::fabs(c) < tiny) {
      c = tiny;
    }
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < eps) {
      break;
    }
  }
  return f;
}
}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double inv_mills(double z)
{
  if (z < kTailSwitch) {
    return reciprocal_mills_ratio(-z);
  }
  return std_normal_pdf(z) / std_normal_cdf(z);
}

}  // namespace ogf::stats
