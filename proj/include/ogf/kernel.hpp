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

#ifndef OGF_KERNEL_HPP_
#define OGF_KERNEL_HPP_

#include "ogf/latent_map.hpp"
#include "ogf/lattice.hpp"

#include <cstddef>
#include <limits>

namespace ogf
{

/// Normal-pdf kernel k(x, x') = pdf(|x - x'|; 0, sigma^2), zero beyond the cutoff.
struct KernelConfig
{
  double sigma = 1.0;
  double cutoff_radius = std::numeric_limits<double>::infinity();

  void validate() const;
};

inline constexpr std::size_t kDefaultDenseLimit = 5000;

double kernel_eval(const KernelConfig & cfg, const Point & a, const Point & b);
/// Kernel value as a function of the distance between two positions.
double kernel_at_distance(const KernelConfig & cfg, double distance);

/// Zero-mean prior with covariance k(center_i, center_j).
///
/// The dense backend refuses lattices with more than `dense_limit` cells
/// (CapacityError). The sparse backend needs a finite cutoff radius.
LatentMap build_prior(
  const GridLattice & lattice, const KernelConfig & cfg,
  CovarianceBackend backend = CovarianceBackend::kDense,
  std::size_t dense_limit = kDefaultDenseLimit);

}  // namespace ogf

#endif  // OGF_KERNEL_HPP_
