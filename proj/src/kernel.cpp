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

#include "ogf/kernel.hpp"

#include "ogf/error.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ogf
{
namespace
{
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
}

void KernelConfig::validate() const
{
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("kernel sigma must be positive and finite");
  }
  if (!(cutoff_radius > 0.0)) {
    throw std::invalid_argument("kernel cutoff radius must be positive");
  }
}

double kernel_at_distance(const KernelConfig & cfg, double distance)
{
  // Pairs at the cutoff up to rounding are kept, as in the sparse stencil.
  if (distance > cfg.cutoff_radius * (1.0 + 1e-12)) {
    return 0.0;
  }
  const double r = distance / cfg.sigma;
  return kInvSqrt2Pi / cfg.sigma * std::exp(-0.5 * r * r);
}

double kernel_eval(const KernelConfig & cfg, const Point & a, const Point & b)
{
  return kernel_at_distance(cfg, (a - b).norm());
}

LatentMap build_prior(
  const GridLattice & lattice, const KernelConfig & cfg, CovarianceBackend backend,
  std::size_t dense_limit)
{
  cfg.validate();
  const std::size_t n = lattice.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (backend == CovarianceBackend::kSparse) {
    if (!std::isfinite(cfg.cutoff_radius)) {
      throw std::invalid_argument("sparse covariance backend needs a finite cutoff radius");
    }
    return LatentMap(
      lattice, std::move(mean),
      SparseCovariance(lattice, cfg.cutoff_radius, [&cfg](double d) {
        return kernel_at_distance(cfg, d);
      }));
  }
  if (n > dense_limit) {
    throw CapacityError(
      "dense covariance backend limited to " + std::to_string(dense_limit) + " cells, lattice has " +
      std::to_string(n));
  }
  std::vector<Point> centers(n);
  for (std::size_t i = 0; i < n; ++i) {
    centers[i] = lattice.cell_to_world(i);
  }
  Eigen::MatrixXd cov(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) {
      const double k = kernel_eval(cfg, centers[i], centers[j]);
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
    }
  }
  return LatentMap(lattice, std::move(mean), DenseCovariance(std::move(cov)));
}

}  // namespace ogf
