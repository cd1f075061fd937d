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

#include "ogf/lattice.hpp"

#include "ogf/error.hpp"
#include "ogf/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ogf
{

GridLattice::GridLattice(std::vector<std::size_t> dims, double resolution, const Point & origin)
: rank_(dims.size()), dims_{1, 1, 1}, size_(1), resolution_(resolution), origin_(origin)
{
  if (dims.empty() || dims.size() > 3) {
    throw std::invalid_argument("lattice must have 1 to 3 axes");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("lattice resolution must be positive");
  }
  if (!origin.allFinite()) {
    throw std::invalid_argument("lattice origin must be finite");
  }
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (dims[a] == 0) {
      throw std::invalid_argument("lattice dimension " + std::to_string(a) + " is zero");
    }
    dims_[a] = dims[a];
    size_ *= dims[a];
  }
  for (std::size_t a = rank_; a < 3; ++a) {
    origin_[a] = 0.0;
  }
}

std::optional<CellIndex> GridLattice::world_to_index(const Point & p) const
{
  CellIndex idx{0, 0, 0};
  for (std::size_t a = 0; a < rank_; ++a) {
    const double u = (p[a] - origin_[a]) / resolution_;
    if (!std::isfinite(u)) {
      return std::nullopt;
    }
    // Nearest center, ties toward the lower index.
    const double k = std::ceil(u - 0.5);
    if (k < 0.0 || k >= static_cast<double>(dims_[a])) {
      return std::nullopt;
    }
    idx[a] = static_cast<std::int64_t>(k);
  }
  return idx;
}

std::optional<std::size_t> GridLattice::world_to_cell(const Point & p) const
{
  const auto idx = world_to_index(p);
  if (!idx) {
    return std::nullopt;
  }
  return ravel(*idx);
}

Point GridLattice::index_to_world(const CellIndex & idx) const
{
  Point p = origin_;
  for (std::size_t a = 0; a < rank_; ++a) {
    p[a] += resolution_ * static_cast<double>(idx[a]);
  }
  return p;
}

Point GridLattice::cell_to_world(std::size_t cell) const { return index_to_world(unravel(cell)); }

Point GridLattice::world_to_continuous(const Point & p) const
{
  Point u = Point::Constant(0.5);
  for (std::size_t a = 0; a < rank_; ++a) {
    u[a] = (p[a] - origin_[a]) / resolution_ + 0.5;
  }
  return u;
}

Point GridLattice::continuous_to_world(const Point & u) const
{
  Point p = origin_;
  for (std::size_t a = 0; a < rank_; ++a) {
    p[a] += (u[a] - 0.5) * resolution_;
  }
  return p;
}

bool GridLattice::contains(const CellIndex & idx) const
{
  for (std::size_t a = 0; a < 3; ++a) {
    if (idx[a] < 0 || idx[a] >= static_cast<std::int64_t>(dims_[a])) {
      return false;
    }
  }
  return true;
}

CellIndex GridLattice::unravel(std::size_t cell) const
{
  if (cell >= size_) {
    throw InvalidCell(cell, size_);
  }
  CellIndex idx;
  idx[2] = static_cast<std::int64_t>(cell % dims_[2]);
  cell /= dims_[2];
  idx[1] = static_cast<std::int64_t>(cell % dims_[1]);
  idx[0] = static_cast<std::int64_t>(cell / dims_[1]);
  return idx;
}

std::size_t GridLattice::ravel(const CellIndex & idx) const
{
  return (static_cast<std::size_t>(idx[0]) * dims_[1] + static_cast<std::size_t>(idx[1])) *
           dims_[2] +
         static_cast<std::size_t>(idx[2]);
}

Point GridLattice::lower_corner() const
{
  Point c = origin_;
  for (std::size_t a = 0; a < rank_; ++a) {
    c[a] -= 0.5 * resolution_;
  }
  return c;
}

Point GridLattice::upper_corner() const
{
  Point c = origin_;
  for (std::size_t a = 0; a < rank_; ++a) {
    c[a] += (static_cast<double>(dims_[a]) - 0.5) * resolution_;
  }
  return c;
}

bool GridLattice::operator==(const GridLattice & other) const
{
  return rank_ == other.rank_ && dims_ == other.dims_ && resolution_ == other.resolution_ &&
         origin_ == other.origin_;
}

void validate(const Measurement & meas, std::size_t n_cells)
{
  if (meas.cell >= n_cells) {
    throw InvalidCell(meas.cell, n_cells);
  }
  if (meas.label != 1 && meas.label != -1) {
    throw std::invalid_argument("measurement label must be -1 or +1, got " +
                                std::to_string(meas.label));
  }
}

Thresholds::Thresholds(double occupied, double free) : occupied_(occupied), free_(free)
{
  if (!(free > 0.0 && free < 0.5 && occupied > 0.5 && occupied < 1.0)) {
    throw std::invalid_argument("thresholds must satisfy 0 < free < 0.5 < occupied < 1");
  }
}

std::size_t TernaryMap::count(Occupancy state) const
{
  std::size_t n = 0;
  for (const auto s : states) {
    n += s == static_cast<std::int8_t>(state) ? 1 : 0;
  }
  return n;
}

std::int8_t decide(double probability, const Thresholds & th)
{
  if (probability > th.occupied()) {
    return 1;
  }
  if (probability < th.free()) {
    return -1;
  }
  return 0;
}

TernaryMap classify_mean(std::span<const double> mean, const Thresholds & th)
{
  TernaryMap out;
  out.states.reserve(mean.size());
  for (const double m : mean) {
    out.states.push_back(decide(stats::std_normal_cdf(m), th));
  }
  return out;
}

double agreement(const TernaryMap & a, const TernaryMap & b)
{
  if (a.size() != b.size()) {
    throw std::invalid_argument("ternary maps differ in size");
  }
  if (a.size() == 0) {
    return 1.0;
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same += a.states[i] == b.states[i] ? 1 : 0;
  }
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace ogf
