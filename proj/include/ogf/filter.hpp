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

#ifndef OGF_FILTER_HPP_
#define OGF_FILTER_HPP_

#include "ogf/latent_map.hpp"
#include "ogf/lattice.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ogf::filter
{

struct UpdateDiagnostics
{
  /// Marginal likelihood of the measurement, cdf(z_score).
  double eta = 0.5;
  /// y * mean_i / sqrt(var_i + 1).
  double z_score = 0.0;
  std::size_t clamped_variances = 0;
  /// Largest |Sigma_ij - Sigma_ji| before the symmetrization step (dense backend only).
  double asymmetry = 0.0;
};

/// Folds one probit measurement into the map by Gaussian moment matching.
///
/// With s = sqrt(Sigma_ii + 1), z = y * m_i / s and r = pdf(z) / cdf(z):
///   m'     = m + y * r / s * Sigma e_i
///   Sigma' = Sigma - r * (z + r) / s^2 * (Sigma e_i)(Sigma e_i)^T
/// which is the mean shift outer product plus the second-moment correction in
/// one rank-1 term. r comes from stats::inv_mills so strongly contradicted
/// measurements stay finite.
///
/// Throws InvalidCell for a bad index and NumericalError if the state turns
/// non-finite.
UpdateDiagnostics update(LatentMap & map, const Measurement & meas);

/// Applies `update` to each measurement in the given order. The result depends
/// on that order; it is never changed internally.
std::vector<UpdateDiagnostics> process(LatentMap & map, std::span<const Measurement> batch);

}  // namespace ogf::filter

#endif  // OGF_FILTER_HPP_
