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

#include "ogf/filter.hpp"

#include "ogf/error.hpp"
#include "ogf/stats.hpp"

#include <cmath>
#include <string>
#include <variant>

namespace ogf::filter
{

UpdateDiagnostics update(LatentMap & map, const Measurement & meas)
{
  validate(meas, map.size());
  const std::size_t i = meas.cell;
  const double y = meas.label;
  const double var_i = map.variance(i);
  const double mean_i = map.mean()[static_cast<Eigen::Index>(i)];
  if (!(var_i > 0.0) || !std::isfinite(var_i) || !std::isfinite(mean_i)) {
    throw NumericalError("invalid marginal at cell " + std::to_string(i));
  }

  const double s = std::sqrt(var_i + 1.0);
  const double z = y * mean_i / s;
  const double ratio = stats::inv_mills(z);
  const double gain = y * ratio / s;
  const double contraction = ratio * (z + ratio) / (s * s);
  if (!std::isfinite(gain) || !std::isfinite(contraction)) {
    throw NumericalError("non-finite update at cell " + std::to_string(i));
  }

  UpdateDiagnostics diag;
  diag.z_score = z;
  diag.eta = stats::std_normal_cdf(z);

  CovarianceColumn col;
  std::visit([&](auto & cov) { cov.gather_column(i, col); }, map.covariance());

  auto & mean = map.mean();
  if (col.dense()) {
    mean.noalias() += gain * col.values;
  } else {
    for (std::size_t k = 0; k < col.cells.size(); ++k) {
      mean[static_cast<Eigen::Index>(col.cells[k])] += gain * col.values[static_cast<Eigen::Index>(k)];
    }
  }
  if (!std::isfinite(mean[static_cast<Eigen::Index>(i)])) {
    throw NumericalError("non-finite mean after update at cell " + std::to_string(i));
  }

  std::visit(
    [&](auto & cov) {
      cov.subtract_outer(col, contraction);
      if constexpr (std::is_same_v<std::decay_t<decltype(cov)>, DenseCovariance>) {
        diag.asymmetry = cov.symmetrize();
      }
      diag.clamped_variances = cov.clamp_variances(col);
    },
    map.covariance());
  map.add_clamped(diag.clamped_variances);
  return diag;
}

std::vector<UpdateDiagnostics> process(LatentMap & map, std::span<const Measurement> batch)
{
  std::vector<UpdateDiagnostics> out;
  out.reserve(batch.size());
  for (const auto & meas : batch) {
    out.push_back(update(map, meas));
  }
  return out;
}

}  // namespace ogf::filter
