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

#include "ogf/io.hpp"

#include "ogf/error.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace ogf::io
{
namespace
{

constexpr char kMagic[4] = {'O', 'G', 'F', '1'};

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
void put(std::ostream & os, const T & v)
{
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream & is, const std::string & source)
{
  T v{};
  if (!is.read(reinterpret_cast<char *>(&v), sizeof(T))) {
    throw IoError(source, 0, "truncated checkpoint");
  }
  return v;
}

void read_doubles(std::istream & is, double * dst, std::size_t n, const std::string & source)
{
  if (!is.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(n * sizeof(double)))) {
    throw IoError(source, 0, "truncated checkpoint");
  }
}

void write_row(
  std::ostream & os, const GridLattice & lattice, std::size_t cell, int state, double mean,
  double variance)
{
  const CellIndex idx = lattice.unravel(cell);
  os << idx[0] << ',' << idx[1] << ',' << idx[2] << ',' << state << ',' << fmt(mean) << ','
     << fmt(variance) << '\n';
}

}  // namespace

void write_ternary_csv(std::ostream & os, const LatentMap & map, const TernaryMap & ternary)
{
  if (ternary.size() != map.size()) {
    throw std::invalid_argument("ternary map does not match the latent map");
  }
  os << "cx,cy,cz,state,mean,variance\n";
  for (std::size_t i = 0; i < map.size(); ++i) {
    write_row(
      os, map.lattice(), i, ternary.states[i], map.mean()[static_cast<Eigen::Index>(i)],
      map.variance(i));
  }
}

void write_ternary_csv(
  std::ostream & os, const GridLattice & lattice, const TernaryMap & ternary,
  std::span<const double> values)
{
  if (ternary.size() != lattice.size() || values.size() != lattice.size()) {
    throw std::invalid_argument("ternary map does not match the lattice");
  }
  os << "cx,cy,cz,state,mean,variance\n";
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    write_row(os, lattice, i, ternary.states[i], values[i], 0.0);
  }
}

void write_occupied_ply(std::ostream & os, const GridLattice & lattice, const TernaryMap & ternary)
{
  if (ternary.size() != lattice.size()) {
    throw std::invalid_argument("ternary map does not match the lattice");
  }
  const std::size_t n = ternary.count(Occupancy::kOccupied);
  os << "ply\nformat ascii 1.0\nelement vertex " << n
     << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (std::size_t i = 0; i < ternary.size(); ++i) {
    if (ternary.states[i] == 1) {
      const Point p = lattice.cell_to_world(i);
      os << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
    }
  }
}

void write_measurements(std::ostream & os, std::span<const Measurement> batch)
{
  os << "t,cell,y\n";
  for (const auto & m : batch) {
    os << m.time << ',' << m.cell << ',' << m.label << '\n';
  }
}

std::vector<Measurement> read_measurements(
  std::istream & is, std::size_t n_cells, const std::string & source)
{
  std::vector<Measurement> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (!header) {
      if (line != "t,cell,y") {
        throw IoError(source, line_no, "expected header 't,cell,y'");
      }
      header = true;
      continue;
    }
    std::array<long long, 3> v{};
    std::string_view rest = line;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t comma = k < 2 ? rest.find(',') : rest.size();
      if (comma == std::string_view::npos) {
        throw IoError(source, line_no, "expected 3 fields");
      }
      const std::string_view field = rest.substr(0, comma);
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v[k]);
      if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw IoError(source, line_no, "malformed integer '" + std::string(field) + "'");
      }
      rest = k < 2 ? rest.substr(comma + 1) : std::string_view{};
    }
    if (v[0] < 0 || v[1] < 0) {
      throw IoError(source, line_no, "negative time or cell");
    }
    const Measurement m{
      static_cast<std::size_t>(v[1]), static_cast<int>(v[2]), static_cast<std::size_t>(v[0])};
    try {
      validate(m, n_cells);
    } catch (const std::exception & e) {
      throw IoError(source, line_no, e.what());
    }
    out.push_back(m);
  }
  if (!header) {
    throw IoError(source, 0, "missing header 't,cell,y'");
  }
  return out;
}

void save_checkpoint(std::ostream & os, const LatentMap & map)
{
  const GridLattice & lat = map.lattice();
  os.write(kMagic, sizeof(kMagic));
  put<std::uint8_t>(os, map.backend() == CovarianceBackend::kDense ? 0 : 1);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(lat.rank()));
  for (const auto d : lat.dims()) {
    put<std::uint64_t>(os, d);
  }
  put<double>(os, lat.resolution());
  for (int a = 0; a < 3; ++a) {
    put<double>(os, lat.origin()[a]);
  }
  os.write(
    reinterpret_cast<const char *>(map.mean().data()),
    static_cast<std::streamsize>(map.size() * sizeof(double)));
  if (map.backend() == CovarianceBackend::kDense) {
    const auto & m = map.dense().matrix();
    os.write(
      reinterpret_cast<const char *>(m.data()),
      static_cast<std::streamsize>(m.size() * static_cast<Eigen::Index>(sizeof(double))));
  } else {
    const auto & sparse = std::get<SparseCovariance>(map.covariance());
    put<double>(os, sparse.cutoff_radius());
    const auto & prior = sparse.prior_values();
    put<std::uint64_t>(os, prior.size());
    os.write(
      reinterpret_cast<const char *>(prior.data()),
      static_cast<std::streamsize>(prior.size() * sizeof(double)));
    const auto rows = sparse.materialized_cells();
    put<std::uint64_t>(os, rows.size());
    for (const auto c : rows) {
      put<std::uint64_t>(os, c);
      const auto values = sparse.row_values(c);
      os.write(
        reinterpret_cast<const char *>(values.data()),
        static_cast<std::streamsize>(values.size() * sizeof(double)));
    }
  }
  if (!os) {
    throw IoError("<stream>", 0, "failed writing checkpoint");
  }
}

LatentMap load_checkpoint(std::istream & is, const std::string & source)
{
  char magic[4];
  if (!is.read(magic, 4) || std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
    throw IoError(source, 0, "not an OGF1 checkpoint");
  }
  const auto backend = get<std::uint8_t>(is, source);
  const auto rank = get<std::uint8_t>(is, source);
  if (backend > 1 || rank < 1 || rank > 3) {
    throw IoError(source, 0, "corrupt checkpoint header");
  }
  std::vector<std::size_t> dims;
  for (int a = 0; a < 3; ++a) {
    const auto d = get<std::uint64_t>(is, source);
    if (a < rank) {
      dims.push_back(d);
    }
  }
  const double resolution = get<double>(is, source);
  Point origin;
  for (int a = 0; a < 3; ++a) {
    origin[a] = get<double>(is, source);
  }
  const GridLattice lattice(dims, resolution, origin);
  const auto n = static_cast<Eigen::Index>(lattice.size());
  Eigen::VectorXd mean(n);
  read_doubles(is, mean.data(), lattice.size(), source);
  if (backend == 0) {
    Eigen::MatrixXd cov(n, n);
    read_doubles(is, cov.data(), lattice.size() * lattice.size(), source);
    return LatentMap(lattice, std::move(mean), DenseCovariance(std::move(cov)));
  }
  const double cutoff = get<double>(is, source);
  const auto stencil = get<std::uint64_t>(is, source);
  std::vector<double> prior(stencil);
  read_doubles(is, prior.data(), prior.size(), source);
  SparseCovariance cov(lattice, cutoff, std::move(prior));
  const auto rows = get<std::uint64_t>(is, source);
  std::vector<double> row(stencil);
  for (std::uint64_t r = 0; r < rows; ++r) {
    const auto cell = get<std::uint64_t>(is, source);
    read_doubles(is, row.data(), row.size(), source);
    if (cell >= lattice.size()) {
      throw IoError(source, 0, "checkpoint row index out of range");
    }
    cov.assign_row(cell, row);
  }
  return LatentMap(lattice, std::move(mean), std::move(cov));
}

void save_checkpoint(const std::string & path, const LatentMap & map)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(path, 0, "cannot write checkpoint");
  }
  save_checkpoint(out, map);
}

LatentMap load_checkpoint(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, 0, "cannot open checkpoint");
  }
  return load_checkpoint(in, path);
}

}  // namespace ogf::io
