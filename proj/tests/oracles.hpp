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

// Reference implementations used only by the tests. None of them share code
// with the library beyond the public types.

#ifndef OGF_TESTS_ORACLES_HPP_
#define OGF_TESTS_ORACLES_HPP_

#include "ogf/lattice.hpp"
#include "ogf/latent_map.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace oracle
{

using Big = boost::multiprecision::cpp_bin_float_50;

inline Big big_pdf(const Big & x)
{
  return exp(-x * x / 2) / sqrt(2 * boost::math::constants::pi<Big>());
}

inline Big big_cdf(const Big & x)
{
  return boost::math::erfc(-x / sqrt(Big(2))) / 2;
}

inline double cdf(double x) { return static_cast<double>(big_cdf(Big(x))); }

inline double inv_mills(double z)
{
  const Big bz(z);
  return static_cast<double>(big_pdf(bz) / big_cdf(bz));
}

inline double relerr(double got, double want)
{
  return std::abs(got - want) / std::abs(want);
}

/// Moments of N(m; mu, s2) * cdf(y * m) by adaptive Gauss-Kronrod quadrature.
struct Moments1d
{
  double z = 0.0;
  double mean = 0.0;
  double var = 0.0;
};

inline Moments1d tilted_1d(double mu, double s2, int y)
{
  using boost::math::quadrature::gauss_kronrod;
  const double sd = std::sqrt(s2);
  // Substitute m = mu + sd * u and integrate u over a window that holds all
  // of the mass of the tilted density.
  auto weight = [&](double u) {
    const double m = mu + sd * u;
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi) *
           0.5 * std::erfc(-y * m / std::numbers::sqrt2);
  };
  const double lo = -12.0;
  const double hi = 12.0;
  auto integrate = [&](auto f) { return gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14); };
  const double z0 = integrate(weight);
  const double z1 = integrate([&](double u) { return u * weight(u); });
  const double z2 = integrate([&](double u) { return u * u * weight(u); });
  const double eu = z1 / z0;
  return Moments1d{z0, mu + sd * eu, s2 * (z2 / z0 - eu * eu)};
}

/// Exact tilted posterior of a Gaussian prior and one probit factor on cell i,
/// by reducing to the marginal of m_i (the factor depends on m_i only) and
/// conditioning the remaining cells on it.
inline void tilted_posterior(
  const Eigen::VectorXd & mean, const Eigen::MatrixXd & cov, std::size_t i, int y,
  Eigen::VectorXd & out_mean, Eigen::MatrixXd & out_cov)
{
  const auto ii = static_cast<Eigen::Index>(i);
  const double sii = cov(ii, ii);
  const Moments1d mm = tilted_1d(mean(ii), sii, y);
  const Eigen::VectorXd g = cov.col(ii) / sii;
  out_mean = mean + g * (mm.mean - mean(ii));
  out_cov = cov - g * cov.row(ii) + g * g.transpose() * mm.var;
}

/// Tilted moments for two cells by nested 2-D quadrature in whitened
/// coordinates, without the marginal reduction.
inline void tilted_posterior_2d(
  const Eigen::Vector2d & mean, const Eigen::Matrix2d & cov, int cell, int y,
  Eigen::Vector2d & out_mean, Eigen::Matrix2d & out_cov)
{
  using boost::math::quadrature::gauss_kronrod;
  const Eigen::Matrix2d L = cov.llt().matrixL();
  auto point = [&](double u, double v) { return Eigen::Vector2d(mean + L * Eigen::Vector2d(u, v)); };
  auto weight = [&](double u, double v) {
    const double m = point(u, v)(cell);
    return std::exp(-0.5 * (u * u + v * v)) / (2.0 * std::numbers::pi) *
           0.5 * std::erfc(-y * m / std::numbers::sqrt2);
  };
  auto integrate2 = [&](auto f) {
    return gauss_kronrod<double, 31>::integrate(
      [&](double u) {
        return gauss_kronrod<double, 31>::integrate(
          [&](double v) { return f(u, v); }, -11.0, 11.0, 10, 1e-13);
      },
      -11.0, 11.0, 10, 1e-13);
  };
  const double z = integrate2(weight);
  Eigen::Vector2d m1;
  for (int a = 0; a < 2; ++a) {
    m1(a) = integrate2([&](double u, double v) { return point(u, v)(a) * weight(u, v); }) / z;
  }
  Eigen::Matrix2d m2;
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      m2(a, b) = integrate2([&](double u, double v) {
                   const Eigen::Vector2d p = point(u, v);
                   return p(a) * p(b) * weight(u, v);
                 }) /
                 z;
      m2(b, a) = m2(a, b);
    }
  }
  out_mean = m1;
  out_cov = m2 - m1 * m1.transpose();
}

/// Random symmetric positive definite matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(std::mt19937_64 & rng, int n, double lo = 0.2, double hi = 2.0)
{
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(lo, hi);
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a(r, c) = nd(rng);
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd ev(n);
  for (int k = 0; k < n; ++k) {
    ev(k) = ud(rng);
  }
  Eigen::MatrixXd s = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

inline ogf::LatentMap dense_map(const Eigen::VectorXd & mean, const Eigen::MatrixXd & cov)
{
  return ogf::LatentMap(
    ogf::GridLattice({static_cast<std::size_t>(mean.size())}, 1.0), mean,
    ogf::DenseCovariance(cov));
}

/// Cell containing a continuous lattice coordinate, or nothing outside.
inline std::optional<ogf::CellIndex> cell_at(const ogf::GridLattice & lat, const Eigen::Vector3d & u)
{
  ogf::CellIndex idx{};
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor(u[a]);
    if (f < 0.0 || f >= static_cast<double>(lat.dim(static_cast<std::size_t>(a)))) {
      return std::nullopt;
    }
    idx[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(f);
  }
  return idx;
}

inline int differing_axes(const ogf::CellIndex & a, const ogf::CellIndex & b)
{
  int n = 0;
  for (int k = 0; k < 3; ++k) {
    n += a[static_cast<std::size_t>(k)] != b[static_cast<std::size_t>(k)];
  }
  return n;
}

/// Cells along a segment by fine stepping (res / 100) in continuous lattice
/// coordinates, deduplicating consecutive repeats. When two consecutive
/// samples are not face neighbors, the gap is bisected to recover the cells
/// the segment clipped between them. Stops at the first sample outside.
inline std::vector<std::size_t> fine_sampled_ray(
  const ogf::GridLattice & lat, const ogf::Point & origin, const ogf::Point & endpoint)
{
  const Eigen::Vector3d u0 = lat.world_to_continuous(origin);
  const Eigen::Vector3d u1 = lat.world_to_continuous(endpoint);
  const double len = (u1 - u0).norm();
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len * 100.0)));
  std::vector<ogf::CellIndex> cells;
  std::vector<double> params;

  auto at = [&](double t) { return cell_at(lat, u0 + t * (u1 - u0)); };

  // Fills the cells strictly between parameters ta and tb.
  auto fill = [&](auto && self, double ta, const ogf::CellIndex & ca, double tb,
                  const ogf::CellIndex & cb, int depth) -> void {
    if (differing_axes(ca, cb) <= 1 || depth > 80) {
      return;
    }
    const double tm = 0.5 * (ta + tb);
    const auto cm = at(tm);
    if (!cm) {
      return;
    }
    if (*cm == ca) {
      self(self, tm, ca, tb, cb, depth + 1);
    } else if (*cm == cb) {
      self(self, ta, ca, tm, cb, depth + 1);
    } else {
      self(self, ta, ca, tm, *cm, depth + 1);
      cells.push_back(*cm);
      self(self, tm, *cm, tb, cb, depth + 1);
    }
  };

  double prev_t = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    const auto c = at(t);
    if (!c) {
      if (cells.empty()) {
        break;
      }
      // Locate the exit and pick up a cell clipped just before it.
      double lo_t = prev_t;
      double hi_t = t;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo_t + hi_t);
        (at(mid) ? lo_t : hi_t) = mid;
      }
      const auto last_in = at(lo_t);
      if (last_in && *last_in != cells.back()) {
        const ogf::CellIndex last = cells.back();
        fill(fill, prev_t, last, lo_t, *last_in, 0);
        cells.push_back(*last_in);
      }
      break;
    }
    if (cells.empty()) {
      cells.push_back(*c);
    } else if (*c != cells.back()) {
      const ogf::CellIndex last = cells.back();
      fill(fill, prev_t, last, t, *c, 0);
      cells.push_back(*c);
    }
    prev_t = t;
  }
  std::vector<std::size_t> out;
  out.reserve(cells.size());
  for (const auto & c : cells) {
    out.push_back(lat.ravel(c));
  }
  return out;
}

}  // namespace oracle

#endif  // OGF_TESTS_ORACLES_HPP_
