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

#ifndef OGF_LATENT_MAP_HPP_
#define OGF_LATENT_MAP_HPP_

#include "ogf/lattice.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace ogf
{

/// Diagonal entries of a covariance are never allowed below this value.
inline constexpr double kVarianceFloor = 1e-12;

/// Column of a covariance restricted to its nonzero support.
///
/// For the dense backend `cells` is empty and `values` spans every cell. For
/// the sparse backend `slots` holds the stencil slot of each support cell
/// relative to the source cell.
struct CovarianceColumn
{
  std::size_t source = 0;
  std::vector<std::size_t> cells;
  std::vector<std::int32_t> slots;
  Eigen::VectorXd values;

  bool dense() const { return cells.empty(); }
};

class DenseCovariance
{
public:
  DenseCovariance() = default;
  explicit DenseCovariance(Eigen::MatrixXd matrix);

  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
  double at(std::size_t i, std::size_t j) const { return matrix_(i, j); }
  double variance(std::size_t i) const { return matrix_(i, i); }
  const Eigen::MatrixXd & matrix() const { return matrix_; }
  Eigen::MatrixXd & matrix() { return matrix_; }

  void gather_column(std::size_t i, CovarianceColumn & out) const;
  /// Sigma -= scale * col * col^T.
  void subtract_outer(const CovarianceColumn & col, double scale);
  /// Replaces Sigma by (Sigma + Sigma^T) / 2; returns the largest |Sigma_ij - Sigma_ji| seen.
  double symmetrize();
  /// Floors the diagonal at kVarianceFloor over the column support; returns the number clamped.
  std::size_t clamp_variances(const CovarianceColumn & col);

private:
  Eigen::MatrixXd matrix_;
};

/// Truncated symmetric covariance over a regular lattice.
///
/// Entries are kept only for cell pairs whose center distance is within the
/// cutoff radius; every pair farther apart is exactly zero. The prior is
/// stationary, so a row is materialized only when an update first touches it
/// and untouched rows are read from the per-offset prior values.
class SparseCovariance
{
public:
  /// `prior(distance)` gives the prior covariance for two cells that far apart.
  SparseCovariance(
    const GridLattice & lattice, double cutoff_radius,
    const std::function<double(double)> & prior);
  /// Restores a stencil whose per-slot prior values are already known.
  SparseCovariance(
    const GridLattice & lattice, double cutoff_radius, std::vector<double> prior_by_slot);

  std::size_t size() const { return row_of_.size(); }
  double cutoff_radius() const { return cutoff_radius_; }
  std::size_t stencil_size() const { return offsets_.size(); }
  std::size_t materialized_rows() const { return storage_.size() / offsets_.size(); }

  double at(std::size_t i, std::size_t j) const;
  double variance(std::size_t i) const;

  void gather_column(std::size_t i, CovarianceColumn & out) const;
  void subtract_outer(const CovarianceColumn & col, double scale);
  std::size_t clamp_variances(const CovarianceColumn & col);

  /// Visits every stored pair (i <= j) with its value, in ascending (i, j) order.
  void for_each_entry(const std::function<void(std::size_t, std::size_t, double)> & fn) const;
  /// Overwrites the (i, j) and (j, i) entries; the pair must lie within the cutoff.
  void set(std::size_t i, std::size_t j, double value);
  Eigen::MatrixXd to_dense() const;

  const std::vector<double> & prior_values() const { return prior_by_slot_; }
  /// Cells whose rows differ from the prior, ascending.
  std::vector<std::size_t> materialized_cells() const;
  std::span<const double> row_values(std::size_t i) const;
  void assign_row(std::size_t i, std::span<const double> values);

private:
  std::int32_t slot_of(const CellIndex & offset) const;
  double * row(std::size_t i);
  const double * row(std::size_t i) const;

  GridLattice lattice_;
  double cutoff_radius_;
  std::int64_t reach_;
  std::vector<CellIndex> offsets_;
  std::vector<double> prior_by_slot_;
  std::vector<std::int32_t> slot_lookup_;
  std::vector<std::int32_t> pair_slot_;
  std::int32_t diagonal_slot_;
  std::vector<std::int64_t> row_of_;
  std::vector<double> storage_;
};

enum class CovarianceBackend { kDense, kSparse };

/// Gaussian filter state over every lattice cell: latent mean and covariance.
///
/// Single writer. Reads may be shared between updates.
class LatentMap
{
public:
  using Covariance = std::variant<DenseCovariance, SparseCovariance>;

  LatentMap(GridLattice lattice, Eigen::VectorXd mean, Covariance cov);

  const GridLattice & lattice() const { return lattice_; }
  std::size_t size() const { return static_cast<std::size_t>(mean_.size()); }
  const Eigen::VectorXd & mean() const { return mean_; }
  Eigen::VectorXd & mean() { return mean_; }
  const Covariance & covariance() const { return cov_; }
  Covariance & covariance() { return cov_; }
  CovarianceBackend backend() const;

  double variance(std::size_t i) const;
  double covariance(std::size_t i, std::size_t j) const;
  /// Throws std::logic_error when the map uses the sparse backend.
  const DenseCovariance & dense() const;
  DenseCovariance & dense();
  Eigen::MatrixXd covariance_matrix() const;

  /// Total number of variance clamps applied over the map's lifetime.
  std::size_t clamped_variances() const { return clamped_; }
  void add_clamped(std::size_t n) { clamped_ += n; }

private:
  GridLattice lattice_;
  Eigen::VectorXd mean_;
  Covariance cov_;
  std::size_t clamped_ = 0;
};

/// Ternary occupancy from the latent means; the covariance is not consulted.
TernaryMap classify(const LatentMap & map, const Thresholds & th);

}  // namespace ogf

#endif  // OGF_LATENT_MAP_HPP_
