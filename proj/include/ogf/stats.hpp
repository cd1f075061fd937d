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

#ifndef OGF_STATS_HPP_
#define OGF_STATS_HPP_

namespace ogf::stats
{

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal cumulative distribution, evaluated through erfc so that the
/// left tail keeps full relative precision.
double std_normal_cdf(double x);

/// Inverse Mills ratio pdf(z) / cdf(z).
///
/// Computed jointly so the result stays finite and accurate when cdf(z)
/// underflows: below z = -5 a continued fraction for the Mills ratio is used
/// instead of the quotient. Strictly positive, and approaches -z from above as
/// z goes to -infinity.
double inv_mills(double z);

}  // namespace ogf::stats

#endif  // OGF_STATS_HPP_
