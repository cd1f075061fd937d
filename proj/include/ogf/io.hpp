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

#ifndef OGF_IO_HPP_
#define OGF_IO_HPP_

#include "ogf/latent_map.hpp"
#include "ogf/lattice.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ogf::io
{

/// One row per cell: `cx,cy,cz,state,mean,variance`, cell indices with
/// missing axes written as 0.
void write_ternary_csv(std::ostream & os, const LatentMap & map, const TernaryMap & ternary);
/// Same layout for maps without a Gaussian state; `values` fills the mean
/// column and variance is written as 0.
void write_ternary_csv(
  std::ostream & os, const GridLattice & lattice, const TernaryMap & ternary,
  std::span<const double> values);

/// ASCII PLY with one vertex per occupied cell center.
void write_occupied_ply(std::ostream & os, const GridLattice & lattice, const TernaryMap & ternary);

/// Measurement log with header `t,cell,y`.
void write_measurements(std::ostream & os, std::span<const Measurement> batch);
std::vector<Measurement> read_measurements(
  std::istream & is, std::size_t n_cells, const std::string & source = "<stream>");

/// Binary filter checkpoint.
///
/// Layout (little-endian host order): magic "OGF1", u8 backend (0 dense,
/// 1 sparse), u8 rank, u64 dims[3], f64 resolution, f64 origin[3], f64
/// mean[N]; dense: f64 covariance[N*N] column-major; sparse: f64 cutoff, u64
/// stencil size S, f64 prior[S], u64 row count R, then R x (u64 cell, f64 row[S]).
void save_checkpoint(std::ostream & os, const LatentMap & map);
LatentMap load_checkpoint(std::istream & is, const std::string & source = "<stream>");

/// Helpers that open the path and report failures as IoError.
void save_checkpoint(const std::string & path, const LatentMap & map);
LatentMap load_checkpoint(const std::string & path);

}  // namespace ogf::io

#endif  // OGF_IO_HPP_
