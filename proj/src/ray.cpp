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

#include "ogf/ray.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ogf
{

std::optional<CellIndex> containing_cell(const GridLattice & lattice, const Point & p)
{
  const Point u = lattice.world_to_continuous(p);
  CellIndex idx{0, 0, 0};
  for (std::size_t a = 0; a < lattice.rank(); ++a) {
    const double k = std::floor(u[a]);
    if (!(k >= 0.0 && k < static_cast<double>(lattice.dim(a)))) {
      return std::nullopt;
    }
    idx[a] = static_cast<std::int64_t>(k);
  }
  return idx;
}

RayCells ray_traverse(const GridLattice & lattice, const Point & origin, const Point & endpoint)
{
  const auto start = containing_cell(lattice, origin);
  if (!start) {
    throw std::invalid_argument("ray origin lies outside the lattice");
  }
  const std::size_t rank = lattice.rank();
  const Point u0 = lattice.world_to_continuous(origin);
  const Point u1 = lattice.world_to_continuous(endpoint);
  const Point d = u1 - u0;

  RayCells out;
  CellIndex last;
  if (const auto end = containing_cell(lattice, endpoint)) {
    last = *end;
  } else {
    out.reaches_endpoint = false;
    double t_exit = 1.0;
    for (std::size_t a = 0; a < rank; ++a) {
      const double extent = static_cast<double>(lattice.dim(a));
      if (d[a] > 0.0) {
        t_exit = std::min(t_exit, (extent - u0[a]) / d[a]);
      } else if (d[a] < 0.0) {
        t_exit = std::min(t_exit, -u0[a] / d[a]);
      }
    }
    last = {0, 0, 0};
    for (std::size_t a = 0; a < rank; ++a) {
      const double k = std::floor(u0[a] + t_exit * d[a]);
      last[a] = std::clamp<std::int64_t>(
        static_cast<std::int64_t>(k), 0, static_cast<std::int64_t>(lattice.dim(a)) - 1);
    }
  }

  CellIndex cur = *start;
  std::array<std::int64_t, 3> step{0, 0, 0};
  std::array<double, 3> t_max;
  std::array<double, 3> t_delta;
  t_max.fill(std::numeric_limits<double>::infinity());
  t_delta.fill(std::numeric_limits<double>::infinity());
  std::size_t remaining = 0;
  for (std::size_t a = 0; a < rank; ++a) {
    remaining += static_cast<std::size_t>(std::llabs(last[a] - cur[a]));
    if (d[a] > 0.0) {
      step[a] = 1;
      t_max[a] = (static_cast<double>(cur[a] + 1) - u0[a]) / d[a];
      t_delta[a] = 1.0 / d[a];
    } else if (d[a] < 0.0) {
      step[a] = -1;
      t_max[a] = (static_cast<double>(cur[a]) - u0[a]) / d[a];
      t_delta[a] = -1.0 / d[a];
    }
  }

  out.cells.reserve(remaining + 1);
  out.cells.push_back(lattice.ravel(cur));
  for (; remaining > 0; --remaining) {
    // Only axes that still have to move are eligible, so the walk ends exactly on `last`.
    std::size_t axis = 3;
    for (std::size_t a = 0; a < rank; ++a) {
      if (cur[a] != last[a] && (axis == 3 || t_max[a] < t_max[axis])) {
        axis = a;
      }
    }
    cur[axis] += step[axis];
    t_max[axis] += t_delta[axis];
    out.cells.push_back(lattice.ravel(cur));
  }
  return out;
}

}  // namespace ogf
