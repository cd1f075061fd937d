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

#ifndef OGF_RAY_HPP_
#define OGF_RAY_HPP_

#include "ogf/lattice.hpp"

#include <cstddef>
#include <vector>

namespace ogf
{

struct RayCells
{
  /// Cells crossed by the segment, in order, each sharing a face with the next.
  std::vector<std::size_t> cells;
  /// False when the endpoint lies outside the lattice and the ray was clipped.
  bool reaches_endpoint = true;
};

/// Voxel traversal of the segment origin -> endpoint (Amanatides & Woo).
///
/// Cell k along an axis covers [k, k + 1) in continuous lattice coordinates,
/// so a point on a face belongs to the upper cell. The list starts with the
/// origin cell and ends with the endpoint cell, or with the last cell inside
/// the lattice when the segment leaves it. Ties between axes step the lowest
/// axis first. Throws std::invalid_argument if the origin is outside.
RayCells ray_traverse(const GridLattice & lattice, const Point & origin, const Point & endpoint);

/// Cell containing a point under the same half-open convention; empty outside.
std::optional<CellIndex> containing_cell(const GridLattice & lattice, const Point & p);

}  // namespace ogf

#endif  // OGF_RAY_HPP_
