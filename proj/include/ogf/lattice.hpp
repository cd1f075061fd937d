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

#ifndef OGF_LATTICE_HPP_
#define OGF_LATTICE_HPP_

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ogf
{

using Point = Eigen::Vector3d;
using CellIndex = std::array<std::int64_t, 3>;

/// Regular lattice of 1 to 3 axes.
///
/// Cells are linearized row-major over the axes in declared order, so for
/// dims (d0, d1, d2) the linear index of (i0, i1, i2) is (i0 * d1 + i1) * d2 + i2.
/// Axes beyond the rank behave as if they had extent 1 and their world
/// coordinate is ignored. `origin` is the world position of the center of cell
/// (0, ..., 0).
class GridLattice
{
public:
  GridLattice(std::vector<std::size_t> dims, double resolution, const Point & origin = Point::Zero());

  std::size_t rank() const { return rank_; }
  std::size_t dim(std::size_t axis) const { return dims_[axis]; }
  const std::array<std::size_t, 3> & dims() const { return dims_; }
  std::size_t size() const { return size_; }
  double resolution() const { return resolution_; }
  const Point & origin() const { return origin_; }

  /// Nearest cell center; a position exactly midway between two centers goes
  /// to the lower index. Empty when p lies outside the lattice.
  std::optional<std::size_t> world_to_cell(const Point & p) const;
  std::optional<CellIndex> world_to_index(const Point & p) const;
  Point cell_to_world(std::size_t cell) const;
  Point index_to_world(const CellIndex & idx) const;

  /// Continuous lattice coordinate: cell k along an axis spans [k, k + 1).
  Point world_to_continuous(const Point & p) const;
  Point continuous_to_world(const Point & u) const;

  bool contains(const CellIndex & idx) const;
  CellIndex unravel(std::size_t cell) const;
  std::size_t ravel(const CellIndex & idx) const;

  /// Lower and upper world corners of the lattice box, per axis.
  Point lower_corner() const;
  Point upper_corner() const;

  bool operator==(const GridLattice & other) const;

private:
  std::size_t rank_;
  std::array<std::size_t, 3> dims_;
  std::size_t size_;
  double resolution_;
  Point origin_;
};

/// One binary occupancy observation of a lattice cell.
struct Measurement
{
  std::size_t cell = 0;
  int label = 1;  // +1 occupied, -1 free
  std::size_t time = 0;

  bool operator==(const Measurement &) const = default;
};

/// Throws InvalidCell or std::invalid_argument.
void validate(const Measurement & meas, std::size_t n_cells);

/// Probability thresholds for the ternary decision; free < 0.5 < occupied.
class Thresholds
{
public:
  Thresholds() = default;
  Thresholds(double occupied, double free);

  double occupied() const { return occupied_; }
  double free() const { return free_; }

private:
  double occupied_ = 0.65;
  double free_ = 0.35;
};

enum class Occupancy : std::int8_t { kFree = -1, kUnknown = 0, kOccupied = 1 };

/// Per-cell decision in {-1, 0, +1}.
struct TernaryMap
{
  std::vector<std::int8_t> states;

  std::size_t size() const { return states.size(); }
  std::size_t count(Occupancy state) const;
  bool operator==(const TernaryMap &) const = default;
};

/// Ternary decision from an occupancy probability.
std::int8_t decide(double probability, const Thresholds & th);

/// Applies the probit squashing to every latent mean and thresholds it.
TernaryMap classify_mean(std::span<const double> mean, const Thresholds & th);

/// Fraction of cells on which two ternary maps agree.
double agreement(const TernaryMap & a, const TernaryMap & b);

}  // namespace ogf

#endif  // OGF_LATTICE_HPP_
