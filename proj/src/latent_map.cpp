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

#include "ogf/latent_map.hpp"

#include "ogf/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ogf
{

DenseCovariance::DenseCovariance(Eigen::MatrixXd matrix) : matrix_(std::move(matrix))
{
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("covariance must be square");
  }
}

void DenseCovariance::gather_column(std::size_t i, CovarianceColumn & out) const
{
  out.source = i;
  out.cells.clear();
  out.slots.clear();
  out.values = matrix_.col(static_cast<Eigen::Index>(i));
}

void DenseCovariance::subtract_outer(const CovarianceColumn & col, double scale)
{
  // w w^T with w = sqrt(|scale|) v is bitwise symmetric, so a symmetric matrix stays so.
  const Eigen::VectorXd w = std::sqrt(std::fabs(scale)) * col.values;
  if (scale >= 0.0) {
    matrix_.noalias() -= w * w.transpose();
  } else {
    matrix_.noalias() += w * w.transpose();
  }
}

double DenseCovariance::symmetrize()
{
  double asymmetry = 0.0;
  const Eigen::Index n = matrix_.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const double upper = matrix_(c, r);
      const double lower = matrix_(r, c);
      asymmetry = std::max(asymmetry, std::fabs(upper - lower));
      const double avg = 0.5 * (upper + lower);
      matrix_(c, r) = avg;
      matrix_(r, c) = avg;
    }
  }
  return asymmetry;
}

std::size_t DenseCovariance::clamp_variances(const CovarianceColumn & /*col*/)
{
  std::size_t clamped = 0;
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    if (!(matrix_(i, i) >= kVarianceFloor)) {
      matrix_(i, i) = kVarianceFloor;
      ++clamped;
    }
  }
  return clamped;
}

SparseCovariance::SparseCovariance(
  const GridLattice & lattice, double cutoff_radius, const std::function<double(double)> & prior)
: lattice_(lattice), cutoff_radius_(cutoff_radius), diagonal_slot_(-1)
{
  if (!(cutoff_radius > 0.0) || !std::isfinite(cutoff_radius)) {
    throw std::invalid_argument("sparse covariance needs a finite positive cutoff radius");
  }
  const double res = lattice.resolution();
  reach_ = static_cast<std::int64_t>(std::floor(cutoff_radius / res * (1.0 + 1e-12)));
  std::array<std::int64_t, 3> reach{0, 0, 0};
  for (std::size_t a = 0; a < lattice.rank(); ++a) {
    reach[a] = reach_;
  }
  for (std::int64_t dx = -reach[0]; dx <= reach[0]; ++dx) {
    for (std::int64_t dy = -reach[1]; dy <= reach[1]; ++dy) {
      for (std::int64_t dz = -reach[2]; dz <= reach[2]; ++dz) {
        const double dist = res * std::sqrt(static_cast<double>(dx * dx + dy * dy + dz * dz));
        if (dist <= cutoff_radius * (1.0 + 1e-12)) {
          if (dx == 0 && dy == 0 && dz == 0) {
            diagonal_slot_ = static_cast<std::int32_t>(offsets_.size());
          }
          offsets_.push_back({dx, dy, dz});
          prior_by_slot_.push_back(prior(dist));
        }
      }
    }
  }
  const std::int64_t width = 2 * reach_ + 1;
  slot_lookup_.assign(static_cast<std::size_t>(width * width * width), -1);
  for (std::size_t s = 0; s < offsets_.size(); ++s) {
    const auto & o = offsets_[s];
    slot_lookup_[static_cast<std::size_t>(
      ((o[0] + reach_) * width + (o[1] + reach_)) * width + (o[2] + reach_))] =
      static_cast<std::int32_t>(s);
  }
  const std::size_t n_slots = offsets_.size();
  pair_slot_.assign(n_slots * n_slots, -1);
  for (std::size_t a = 0; a < n_slots; ++a) {
    for (std::size_t b = 0; b < n_slots; ++b) {
      const CellIndex diff{
        offsets_[b][0] - offsets_[a][0], offsets_[b][1] - offsets_[a][1],
        offsets_[b][2] - offsets_[a][2]};
      pair_slot_[a * n_slots + b] = slot_of(diff);
    }
  }
  row_of_.assign(lattice.size(), -1);
}

SparseCovariance::SparseCovariance(
  const GridLattice & lattice, double cutoff_radius, std::vector<double> prior_by_slot)
: SparseCovariance(lattice, cutoff_radius, [](double) { return 0.0; })
{
  if (prior_by_slot.size() != prior_by_slot_.size()) {
    throw std::invalid_argument("prior stencil size does not match the cutoff radius");
  }
  prior_by_slot_ = std::move(prior_by_slot);
}

std::int32_t SparseCovariance::slot_of(const CellIndex & offset) const
{
  const std::int64_t width = 2 * reach_ + 1;
  for (const auto o : offset) {
    if (o < -reach_ || o > reach_) {
      return -1;
    }
  }
  return slot_lookup_[static_cast<std::size_t>(
    ((offset[0] + reach_) * width + (offset[1] + reach_)) * width + (offset[2] + reach_))];
}

double * SparseCovariance::row(std::size_t i)
{
  const std::size_t n_slots = offsets_.size();
  if (row_of_[i] < 0) {
    row_of_[i] = static_cast<std::int64_t>(storage_.size() / n_slots);
    storage_.insert(storage_.end(), prior_by_slot_.begin(), prior_by_slot_.end());
  }
  return storage_.data() + static_cast<std::size_t>(row_of_[i]) * n_slots;
}

const double * SparseCovariance::row(std::size_t i) const
{
  if (row_of_[i] < 0) {
    return prior_by_slot_.data();
  }
  return storage_.data() + static_cast<std::size_t>(row_of_[i]) * offsets_.size();
}

double SparseCovariance::at(std::size_t i, std::size_t j) const
{
  const CellIndex a = lattice_.unravel(i);
  const CellIndex b = lattice_.unravel(j);
  const std::int32_t s = slot_of({b[0] - a[0], b[1] - a[1], b[2] - a[2]});
  if (s < 0) {
    return 0.0;
  }
  return row(i)[s];
}

double SparseCovariance::variance(std::size_t i) const
{
  if (i >= row_of_.size()) {
    throw InvalidCell(i, row_of_.size());
  }
  return row(i)[diagonal_slot_];
}

void SparseCovariance::gather_column(std::size_t i, CovarianceColumn & out) const
{
  out.source = i;
  out.cells.clear();
  out.slots.clear();
  const CellIndex center = lattice_.unravel(i);
  const double * r = row(i);
  std::vector<double> values;
  values.reserve(offsets_.size());
  for (std::size_t s = 0; s < offsets_.size(); ++s) {
    const CellIndex idx{
      center[0] + offsets_[s][0], center[1] + offsets_[s][1], center[2] + offsets_[s][2]};
    if (!lattice_.contains(idx)) {
      continue;
    }
    out.cells.push_back(lattice_.ravel(idx));
    out.slots.push_back(static_cast<std::int32_t>(s));
    values.push_back(r[s]);
  }
  out.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void SparseCovariance::subtract_outer(const CovarianceColumn & col, double scale)
{
  const std::size_t n = col.cells.size();
  const std::size_t n_slots = offsets_.size();
  // Materialize first; row pointers are invalidated by storage growth.
  for (const auto c : col.cells) {
    row(c);
  }
  for (std::size_t a = 0; a < n; ++a) {
    double * ra = row(col.cells[a]);
    const auto sa = static_cast<std::size_t>(col.slots[a]);
    for (std::size_t b = a; b < n; ++b) {
      const auto sb = static_cast<std::size_t>(col.slots[b]);
      const std::int32_t ab = pair_slot_[sa * n_slots + sb];
      if (ab < 0) {
        continue;
      }
      const double delta = scale * col.values[static_cast<Eigen::Index>(a)] *
                           col.values[static_cast<Eigen::Index>(b)];
      ra[ab] -= delta;
      if (b != a) {
        row(col.cells[b])[pair_slot_[sb * n_slots + sa]] -= delta;
      }
    }
  }
}

std::size_t SparseCovariance::clamp_variances(const CovarianceColumn & col)
{
  std::size_t clamped = 0;
  for (const auto c : col.cells) {
    if (!(variance(c) >= kVarianceFloor)) {
      row(c)[diagonal_slot_] = kVarianceFloor;
      ++clamped;
    }
  }
  return clamped;
}

void SparseCovariance::for_each_entry(
  const std::function<void(std::size_t, std::size_t, double)> & fn) const
{
  for (std::size_t i = 0; i < row_of_.size(); ++i) {
    const CellIndex center = lattice_.unravel(i);
    const double * r = row(i);
    for (std::size_t s = static_cast<std::size_t>(diagonal_slot_); s < offsets_.size(); ++s) {
      const CellIndex idx{
        center[0] + offsets_[s][0], center[1] + offsets_[s][1], center[2] + offsets_[s][2]};
      if (lattice_.contains(idx)) {
        fn(i, lattice_.ravel(idx), r[s]);
      }
    }
  }
}

void SparseCovariance::set(std::size_t i, std::size_t j, double value)
{
  const CellIndex a = lattice_.unravel(i);
  const CellIndex b = lattice_.unravel(j);
  const std::int32_t s = slot_of({b[0] - a[0], b[1] - a[1], b[2] - a[2]});
  if (s < 0) {
    throw std::out_of_range("cell pair lies beyond the covariance cutoff");
  }
  const std::int32_t t = slot_of({a[0] - b[0], a[1] - b[1], a[2] - b[2]});
  row(i);
  row(j);
  row(i)[s] = value;
  row(j)[t] = value;
}

Eigen::MatrixXd SparseCovariance::to_dense() const
{
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for_each_entry([&m](std::size_t i, std::size_t j, double v) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  });
  return m;
}

std::vector<std::size_t> SparseCovariance::materialized_cells() const
{
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < row_of_.size(); ++i) {
    if (row_of_[i] >= 0) {
      cells.push_back(i);
    }
  }
  return cells;
}

std::span<const double> SparseCovariance::row_values(std::size_t i) const
{
  if (i >= row_of_.size()) {
    throw InvalidCell(i, row_of_.size());
  }
  return {row(i), offsets_.size()};
}

void SparseCovariance::assign_row(std::size_t i, std::span<const double> values)
{
  if (i >= row_of_.size()) {
    throw InvalidCell(i, row_of_.size());
  }
  if (values.size() != offsets_.size()) {
    throw std::invalid_argument("row length does not match the covariance stencil");
  }
  std::copy(values.begin(), values.end(), row(i));
}

LatentMap::LatentMap(GridLattice lattice, Eigen::VectorXd mean, Covariance cov)
: lattice_(std::move(lattice)), mean_(std::move(mean)), cov_(std::move(cov))
{
  const std::size_t n = lattice_.size();
  const std::size_t cov_n = std::visit([](const auto & c) { return c.size(); }, cov_);
  if (static_cast<std::size_t>(mean_.size()) != n || cov_n != n) {
    throw std::invalid_argument("latent map mean/covariance size does not match the lattice");
  }
}

CovarianceBackend LatentMap::backend() const
{
  return std::holds_alternative<DenseCovariance>(cov_) ? CovarianceBackend::kDense
                                                       : CovarianceBackend::kSparse;
}

double LatentMap::variance(std::size_t i) const
{
  if (i >= size()) {
    throw InvalidCell(i, size());
  }
  return std::visit([i](const auto & c) { return c.variance(i); }, cov_);
}

double LatentMap::covariance(std::size_t i, std::size_t j) const
{
  if (i >= size()) {
    throw InvalidCell(i, size());
  }
  if (j >= size()) {
    throw InvalidCell(j, size());
  }
  return std::visit([i, j](const auto & c) { return c.at(i, j); }, cov_);
}

const DenseCovariance & LatentMap::dense() const
{
  if (const auto * d = std::get_if<DenseCovariance>(&cov_)) {
    return *d;
  }
  throw std::logic_error("latent map uses the sparse covariance backend");
}

DenseCovariance & LatentMap::dense()
{
  if (auto * d = std::get_if<DenseCovariance>(&cov_)) {
    return *d;
  }
  throw std::logic_error("latent map uses the sparse covariance backend");
}

Eigen::MatrixXd LatentMap::covariance_matrix() const
{
  if (const auto * d = std::get_if<DenseCovariance>(&cov_)) {
    return d->matrix();
  }
  return std::get<SparseCovariance>(cov_).to_dense();
}

TernaryMap classify(const LatentMap & map, const Thresholds & th)
{
  return classify_mean(std::span<const double>(map.mean().data(), map.size()), th);
}

}  // namespace ogf
