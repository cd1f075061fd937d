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

#include "ogf/cloud3d.hpp"

#include "ogf/error.hpp"
#include "ogf/filter.hpp"
#include "ogf/ray.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <string_view>

namespace ogf::cloud3d
{
namespace
{

std::vector<double> parse_row(
  std::string_view line, std::size_t expected, const std::string & path, std::size_t line_no)
{
  std::vector<double> out;
  out.reserve(expected);
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = std::min(line.find(',', pos), line.size());
    std::string_view field = line.substr(pos, comma - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
      field.remove_prefix(1);
    }
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
      throw IoError(path, line_no, "malformed number '" + std::string(field) + "'");
    }
    out.push_back(v);
    if (comma == line.size()) {
      break;
    }
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw IoError(
      path, line_no,
      "expected " + std::to_string(expected) + " fields, got " + std::to_string(out.size()));
  }
  return out;
}

template <typename RowFn>
void read_csv(const std::string & path, std::string_view header, std::size_t fields, RowFn && fn)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError(path, 0, "cannot open file");
  }
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (!seen_header) {
      if (line != header) {
        throw IoError(path, line_no, "expected header '" + std::string(header) + "'");
      }
      seen_header = true;
      continue;
    }
    fn(parse_row(line, fields, path, line_no), line_no);
  }
  if (!seen_header) {
    throw IoError(path, 0, "missing header '" + std::string(header) + "'");
  }
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool CellObservationLedger::offer(std::size_t cell, int label)
{
  CellObservation & s = states_.at(cell);
  if (s == CellObservation::kNever) {
    s = label > 0 ? CellObservation::kOccupied : CellObservation::kFree;
    return true;
  }
  if (s == CellObservation::kFree && label > 0) {
    s = CellObservation::kOccupied;
    return true;
  }
  return false;
}

std::vector<Measurement> extract_measurements(
  const ScanFrame & frame, const GridLattice & lattice, CellObservationLedger & ledger,
  double max_range, std::size_t time, ExtractStats * stats)
{
  if (ledger.size() != lattice.size()) {
    throw std::invalid_argument("ledger and lattice sizes differ");
  }
  const Eigen::Matrix3d rot = frame.pose.orientation.normalized().toRotationMatrix();
  const Point & origin = frame.pose.position;
  std::vector<Measurement> out;
  ExtractStats local;
  for (const auto & p : frame.points) {
    if (!p.allFinite()) {
      continue;
    }
    const double range = p.norm();
    bool hit = true;
    Point local_end = p;
    if (range > max_range) {
      local_end = p * (max_range / range);
      hit = false;
    }
    const Point end = origin + rot * local_end;
    const RayCells ray = ray_traverse(lattice, origin, end);
    hit = hit && ray.reaches_endpoint;
    for (std::size_t k = 0; k < ray.cells.size(); ++k) {
      const bool is_end = k + 1 == ray.cells.size();
      const int label = (is_end && hit) ? 1 : -1;
      if (ledger.offer(ray.cells[k], label)) {
        out.push_back({ray.cells[k], label, time});
        ++local.taken;
      } else {
        ++local.dropped;
      }
    }
  }
  if (stats) {
    stats->taken += local.taken;
    stats->dropped += local.dropped;
  }
  return out;
}

MapConfig default_config(const GridLattice & lattice)
{
  MapConfig cfg;
  cfg.kernel.sigma = 0.5 * lattice.resolution();
  cfg.kernel.cutoff_radius = 3.0 * lattice.resolution();
  cfg.backend =
    lattice.size() > cfg.dense_limit ? CovarianceBackend::kSparse : CovarianceBackend::kDense;
  return cfg;
}

MapResult build_map_3d(
  std::span<const ScanFrame> scans, const GridLattice & lattice, const MapConfig & cfg)
{
  MapResult result{build_prior(lattice, cfg.kernel, cfg.backend, cfg.dense_limit), {}, {}, {}};
  std::vector<std::size_t> order(scans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&scans](std::size_t a, std::size_t b) {
    return scans[a].pose.time < scans[b].pose.time;
  });

  CellObservationLedger ledger(lattice.size());
  ExtractStats counts;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto batch =
      extract_measurements(scans[order[k]], lattice, ledger, cfg.max_range, k, &counts);
    filter::process(result.map, batch);
    result.measurements.insert(result.measurements.end(), batch.begin(), batch.end());
  }
  result.ternary = classify(result.map, cfg.thresholds);
  result.stats.scans = scans.size();
  result.stats.measurements_taken = counts.taken;
  result.stats.dropped = counts.dropped;
  result.stats.occupied_cells = result.ternary.count(Occupancy::kOccupied);
  result.stats.free_cells = result.ternary.count(Occupancy::kFree);
  result.stats.unknown_cells = result.ternary.count(Occupancy::kUnknown);
  return result;
}

std::vector<Pose> load_poses(const std::string & path)
{
  std::vector<Pose> poses;
  read_csv(path, "t,x,y,z,qw,qx,qy,qz", 8, [&](const std::vector<double> & v, std::size_t line) {
    Pose pose;
    pose.time = v[0];
    pose.position = {v[1], v[2], v[3]};
    pose.orientation = Eigen::Quaterniond(v[4], v[5], v[6], v[7]);
    if (std::fabs(pose.orientation.norm() - 1.0) > 1e-6) {
      throw IoError(path, line, "orientation quaternion is not unit length");
    }
    poses.push_back(pose);
  });
  std::stable_sort(poses.begin(), poses.end(), [](const Pose & a, const Pose & b) {
    return a.time < b.time;
  });
  return poses;
}

std::vector<ScanFrame> load_scans(const std::string & path, std::span<const Pose> poses)
{
  if (poses.empty()) {
    throw IoError(path, 0, "no poses available to place the scans");
  }
  std::vector<double> times;
  std::vector<std::vector<Point>> groups;
  read_csv(path, "t,x,y,z", 4, [&](const std::vector<double> & v, std::size_t line) {
    if (times.empty() || v[0] != times.back()) {
      if (!times.empty() && v[0] < times.back()) {
        throw IoError(path, line, "scan times must be ascending");
      }
      times.push_back(v[0]);
      groups.emplace_back();
    }
    groups.back().emplace_back(v[1], v[2], v[3]);
  });
  std::vector<ScanFrame> scans;
  scans.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto it = std::lower_bound(
      poses.begin(), poses.end(), times[k],
      [](const Pose & p, double t) { return p.time < t; });
    const Pose * best = nullptr;
    if (it == poses.end()) {
      best = &poses.back();
    } else if (it == poses.begin()) {
      best = &*it;
    } else {
      const auto prev = std::prev(it);
      best = (times[k] - prev->time <= it->time - times[k]) ? &*prev : &*it;
    }
    ScanFrame frame{*best, std::move(groups[k])};
    frame.pose.time = times[k];
    scans.push_back(std::move(frame));
  }
  return scans;
}

void write_poses(const std::string & path, std::span<const ScanFrame> scans)
{
  std::ofstream out(path);
  if (!out) {
    throw IoError(path, 0, "cannot write file");
  }
  out << "t,x,y,z,qw,qx,qy,qz\n";
  for (const auto & s : scans) {
    const auto & p = s.pose;
    out << fmt(p.time) << ',' << fmt(p.position.x()) << ',' << fmt(p.position.y()) << ','
        << fmt(p.position.z()) << ',' << fmt(p.orientation.w()) << ',' << fmt(p.orientation.x())
        << ',' << fmt(p.orientation.y()) << ',' << fmt(p.orientation.z()) << '\n';
  }
}

void write_scans(const std::string & path, std::span<const ScanFrame> scans)
{
  std::ofstream out(path);
  if (!out) {
    throw IoError(path, 0, "cannot write file");
  }
  out << "t,x,y,z\n";
  for (const auto & s : scans) {
    for (const auto & p : s.points) {
      out << fmt(s.pose.time) << ',' << fmt(p.x()) << ',' << fmt(p.y()) << ',' << fmt(p.z())
          << '\n';
    }
  }
}

std::string stats_json(const MapStats & stats)
{
  nlohmann::ordered_json j;
  j["measurements_taken"] = stats.measurements_taken;
  j["dropped"] = stats.dropped;
  j["occupied_cells"] = stats.occupied_cells;
  j["free_cells"] = stats.free_cells;
  j["unknown_cells"] = stats.unknown_cells;
  j["scans"] = stats.scans;
  return j.dump(2);
}

std::size_t SyntheticRoom::wall_cells() const
{
  return static_cast<std::size_t>(std::count(truth.begin(), truth.end(), std::int8_t{1}));
}

SyntheticRoom make_synthetic_room(const SyntheticRoomSpec & spec)
{
  const std::array<std::size_t, 3> margin{spec.margin, spec.margin, 0};
  for (std::size_t a = 0; a < 3; ++a) {
    if (spec.dims[a] < 2 * margin[a] + 3) {
      throw std::invalid_argument("synthetic room too small for its walls and margin");
    }
  }
  if (spec.beam_stride == 0) {
    throw std::invalid_argument("beam stride must be positive");
  }
  SyntheticRoom room{
    GridLattice({spec.dims[0], spec.dims[1], spec.dims[2]}, spec.resolution), {}, {}};
  const GridLattice & lat = room.lattice;

  if (!(spec.surface_depth > 0.0 && spec.surface_depth < 1.0)) {
    throw std::invalid_argument("surface depth must lie in (0, 1)");
  }
  Point lo;
  Point hi;
  const double inset = 0.5 - spec.surface_depth;
  for (std::size_t a = 0; a < 3; ++a) {
    lo[a] = (static_cast<double>(margin[a]) + inset) * spec.resolution;
    hi[a] = (static_cast<double>(spec.dims[a] - 1 - margin[a]) - inset) * spec.resolution;
  }

  // A wall cell counts as surface when it shares a face with the interior;
  // edge and corner cells of the shell are hidden behind the surfaces.
  room.truth.assign(lat.size(), 0);
  for (std::size_t c = 0; c < lat.size(); ++c) {
    const CellIndex idx = lat.unravel(c);
    int outside = 0;
    int on_shell = 0;
    for (std::size_t a = 0; a < 3; ++a) {
      const auto lo_i = static_cast<std::int64_t>(margin[a]);
      const auto hi_i = static_cast<std::int64_t>(spec.dims[a] - 1 - margin[a]);
      outside += idx[a] < lo_i || idx[a] > hi_i;
      on_shell += idx[a] == lo_i || idx[a] == hi_i;
    }
    if (outside == 0 && on_shell <= 1) {
      room.truth[c] = on_shell == 1 ? 1 : -1;
    }
  }

  // Fibonacci sphere in the sensor frame.
  std::vector<Eigen::Vector3d> beams;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < spec.beams_per_scan; ++k) {
    if (k % spec.beam_stride != 0) {
      continue;
    }
    const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) /
                             static_cast<double>(spec.beams_per_scan);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    beams.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }

  const Point center = 0.5 * (lo + hi);
  const Point half = 0.5 * (hi - lo);
  for (std::size_t p = 0; p < spec.n_poses; ++p) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(p) /
                         static_cast<double>(std::max<std::size_t>(spec.n_poses, 1));
    ScanFrame frame;
    frame.pose.time = static_cast<double>(p);
    frame.pose.position = center + Point(
                                     0.35 * half.x() * std::cos(angle),
                                     0.35 * half.y() * std::sin(angle), 0.1 * half.z());
    frame.pose.orientation =
      Eigen::Quaterniond(Eigen::AngleAxisd(0.7 * static_cast<double>(p), Eigen::Vector3d::UnitZ()));
    const Eigen::Matrix3d rot = frame.pose.orientation.toRotationMatrix();
    for (const auto & b : beams) {
      const Eigen::Vector3d dir = rot * b;
      double t = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < 3; ++a) {
        if (dir[a] > 0.0) {
          t = std::min(t, (hi[a] - frame.pose.position[a]) / dir[a]);
        } else if (dir[a] < 0.0) {
          t = std::min(t, (lo[a] - frame.pose.position[a]) / dir[a]);
        }
      }
      frame.points.push_back(t * b);
    }
    room.scans.push_back(std::move(frame));
  }
  return room;
}

}  // namespace ogf::cloud3d
