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

#ifndef OGF_CLOUD3D_HPP_
#define OGF_CLOUD3D_HPP_

#include "ogf/kernel.hpp"
#include "ogf/latent_map.hpp"
#include "ogf/lattice.hpp"

#include <Eigen/Geometry>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

/// Point-cloud mapping: pose-stamped lidar returns are ray traced into
/// per-cell free/occupied measurements, downsampled so each cell is measured
/// at most once (occupied may override an earlier free), and fed to the filter.
namespace ogf::cloud3d
{

struct Pose
{
  double time = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

struct ScanFrame
{
  Pose pose;
  /// Returns in the sensor frame, meters.
  std::vector<Point> points;
};

enum class CellObservation : std::uint8_t { kNever = 0, kFree = 1, kOccupied = 2 };

/// Which cells have been measured so far. Occupied is absorbing; free may be
/// upgraded to occupied once.
class CellObservationLedger
{
public:
  explicit CellObservationLedger(std::size_t n_cells) : states_(n_cells, CellObservation::kNever) {}

  CellObservation state(std::size_t cell) const { return states_.at(cell); }
  std::size_t size() const { return states_.size(); }

  /// Records the observation if the downsampling policy admits it; returns whether it did.
  bool offer(std::size_t cell, int label);

private:
  std::vector<CellObservation> states_;
};

struct ExtractStats
{
  std::size_t taken = 0;
  std::size_t dropped = 0;
};

/// Ray traces every return of one scan and returns the admitted measurements
/// in point order. Returns beyond `max_range` or outside the lattice only
/// produce free measurements along the clipped ray.
std::vector<Measurement> extract_measurements(
  const ScanFrame & frame, const GridLattice & lattice, CellObservationLedger & ledger,
  double max_range = 100.0, std::size_t time = 0, ExtractStats * stats = nullptr);

struct MapConfig
{
  KernelConfig kernel;
  Thresholds thresholds;
  CovarianceBackend backend = CovarianceBackend::kSparse;
  std::size_t dense_limit = kDefaultDenseLimit;
  double max_range = 100.0;
};

/// Kernel sigma of half a cell, cutoff of three cells, sparse backend when the
/// lattice exceeds the dense limit.
MapConfig default_config(const GridLattice & lattice);

struct MapStats
{
  std::size_t scans = 0;
  std::size_t measurements_taken = 0;
  std::size_t dropped = 0;
  std::size_t occupied_cells = 0;
  std::size_t free_cells = 0;
  std::size_t unknown_cells = 0;
};

struct MapResult
{
  LatentMap map;
  TernaryMap ternary;
  MapStats stats;
  /// Every measurement fed to the filter, in processing order.
  std::vector<Measurement> measurements;
};

/// Processes scans in ascending pose time (stable for equal times).
MapResult build_map_3d(
  std::span<const ScanFrame> scans, const GridLattice & lattice, const MapConfig & cfg);

/// Poses CSV with header `t,x,y,z,qw,qx,qy,qz`.
std::vector<Pose> load_poses(const std::string & path);
/// Scans CSV with header `t,x,y,z`, rows grouped by ascending t. Each scan is
/// paired with the pose stamped nearest its time.
std::vector<ScanFrame> load_scans(const std::string & path, std::span<const Pose> poses);
void write_poses(const std::string & path, std::span<const ScanFrame> scans);
void write_scans(const std::string & path, std::span<const ScanFrame> scans);

/// JSON object with measurements_taken, dropped, occupied_cells, free_cells, unknown_cells.
std::string stats_json(const MapStats & stats);

/// Closed axis-aligned room whose walls are one cell thick, surrounded by an
/// unobservable margin, scanned from poses inside it.
struct SyntheticRoomSpec
{
  std::array<std::size_t, 3> dims{12, 12, 4};
  double resolution = 0.2;
  /// Exterior cells around the room along x and y.
  std::size_t margin = 1;
  std::size_t n_poses = 3;
  std::size_t beams_per_scan = 1500;
  /// Keep every k-th beam only.
  std::size_t beam_stride = 1;
  /// How far the reflecting surface lies inside the wall cells, as a fraction of a cell.
  double surface_depth = 0.001;
};

struct SyntheticRoom
{
  GridLattice lattice;
  std::vector<ScanFrame> scans;
  /// +1 wall surface, -1 interior, 0 for hidden shell edges and the exterior.
  std::vector<std::int8_t> truth;

  std::size_t wall_cells() const;
};

SyntheticRoom make_synthetic_room(const SyntheticRoomSpec & spec);

}  // namespace ogf::cloud3d

#endif  // OGF_CLOUD3D_HPP_
