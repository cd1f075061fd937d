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

#include "ogf/ep.hpp"

#include "ogf/error.hpp"
#include "ogf/stats.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <variant>

namespace ogf::ep
{
namespace
{

double log_std_normal_cdf(double z)
{
  if (z < -5.0) {
    return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(stats::inv_mills(z));
  }
  return std::log(stats::std_normal_cdf(z));
}

double relative_change(const SiteParams & before, const SiteParams & after)
{
  if (before.initialized() != after.initialized()) {
    return std::numeric_limits<double>::infinity();
  }
  if (!after.initialized()) {
    return 0.0;
  }
  const double dmu = std::fabs(after.mu - before.mu) / std::max(1.0, std::fabs(after.mu));
  const double dvar = std::fabs(after.sigma2 - before.sigma2) / std::max(1.0, after.sigma2);
  return std::max(dmu, dvar);
}

}  // namespace

std::optional<CavityParams> cavity(double post_mu, double post_sigma2, const SiteParams & site)
{
  if (!site.initialized()) {
    return CavityParams{post_mu, post_sigma2};
  }
  const double post_precision = 1.0 / post_sigma2;
  const double precision = post_precision - site.precision();
  if (!(precision > 0.0)) {
    return std::nullopt;
  }
  const double sigma2 = 1.0 / precision;
  return CavityParams{sigma2 * (post_precision * post_mu - site.precision_mean()), sigma2};
}

MomentMatch moment_match(const CavityParams & cav, int label)
{
  const double y = label;
  const double s2 = 1.0 + cav.sigma2;
  const double s = std::sqrt(s2);
  MomentMatch mm;
  mm.z = y * cav.mu / s;
  const double ratio = stats::inv_mills(mm.z);
  mm.eta_hat = stats::std_normal_cdf(mm.z);
  mm.mean_shift = y * cav.sigma2 * ratio / s;
  mm.mu_hat = cav.mu + mm.mean_shift;
  mm.variance_reduction = cav.sigma2 * cav.sigma2 * ratio * (mm.z + ratio) / s2;
  mm.sigma2_hat = cav.sigma2 - mm.variance_reduction;
  return mm;
}

SiteParams site_from_moments(const CavityParams & cav, const MomentMatch & mm)
{
  if (!(mm.variance_reduction >= 0.0) || !(mm.sigma2_hat > 0.0)) {
    throw Pathology("matched variance does not contract the cavity");
  }
  SiteParams site;
  if (mm.variance_reduction == 0.0) {
    // Likelihood is flat to working precision; the site stays at t_i = 1.
    site.eta = mm.eta_hat;
    return site;
  }
  // 1/sigma2_hat - 1/sigma2_cav without the cancellation.
  const double precision = mm.variance_reduction / (cav.sigma2 * mm.sigma2_hat);
  site.sigma2 = 1.0 / precision;
  site.mu = cav.mu + site.sigma2 * mm.mean_shift / mm.sigma2_hat;
  const double total = cav.sigma2 + site.sigma2;
  const double d = cav.mu - site.mu;
  const double log_eta = log_std_normal_cdf(mm.z) + 0.5 * std::log(2.0 * std::numbers::pi * total) +
                         d * d / (2.0 * total);
  site.eta = std::exp(log_eta);
  return site;
}

void replace_site(
  LatentMap & map, std::size_t cell, const SiteParams & old_site, const SiteParams & new_site)
{
  if (cell >= map.size()) {
    throw InvalidCell(cell, map.size());
  }
  const double dprec = new_site.precision() - old_site.precision();
  const double dprec_mean = new_site.precision_mean() - old_site.precision_mean();
  if (dprec == 0.0 && dprec_mean == 0.0) {
    return;
  }
  CovarianceColumn col;
  std::visit([&](auto & cov) { cov.gather_column(cell, col); }, map.covariance());
  const double var = map.variance(cell);
  const double mean_i = map.mean()[static_cast<Eigen::Index>(cell)];
  const double denom = 1.0 + dprec * var;
  if (!(denom > 0.0)) {
    throw Pathology("site replacement makes the posterior variance non-positive");
  }
  const double gain = (dprec_mean - dprec * mean_i) / denom;
  auto & mean = map.mean();
  if (col.dense()) {
    mean.noalias() += gain * col.values;
  } else {
    for (std::size_t k = 0; k < col.cells.size(); ++k) {
      mean[static_cast<Eigen::Index>(col.cells[k])] += gain * col.values[static_cast<Eigen::Index>(k)];
    }
  }
  std::visit(
    [&](auto & cov) {
      cov.subtract_outer(col, dprec / denom);
      map.add_clamped(cov.clamp_variances(col));
    },
    map.covariance());
}

void kf_site_update(LatentMap & map, std::size_t cell, const SiteParams & site)
{
  if (cell >= map.size()) {
    throw InvalidCell(cell, map.size());
  }
  if (!site.initialized()) {
    return;
  }
  CovarianceColumn col;
  std::visit([&](auto & cov) { cov.gather_column(cell, col); }, map.covariance());
  const double innovation_var = map.variance(cell) + site.sigma2;
  const double innovation = site.mu - map.mean()[static_cast<Eigen::Index>(cell)];
  auto & mean = map.mean();
  if (col.dense()) {
    mean.noalias() += (innovation / innovation_var) * col.values;
  } else {
    for (std::size_t k = 0; k < col.cells.size(); ++k) {
      mean[static_cast<Eigen::Index>(col.cells[k])] +=
        innovation / innovation_var * col.values[static_cast<Eigen::Index>(k)];
    }
  }
  std::visit(
    [&](auto & cov) {
      cov.subtract_outer(col, 1.0 / innovation_var);
      map.add_clamped(cov.clamp_variances(col));
    },
    map.covariance());
}

LatentMap recompute_posterior(
  const LatentMap & prior, std::span<const Measurement> measurements,
  std::span<const SiteParams> sites)
{
  if (measurements.size() != sites.size()) {
    throw std::invalid_argument("one site per measurement required");
  }
  // Sites on the same cell multiply: their natural parameters add.
  std::map<std::size_t, std::pair<double, double>> per_cell;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    validate(measurements[k], prior.size());
    if (!sites[k].initialized()) {
      continue;
    }
    auto & acc = per_cell[measurements[k].cell];
    acc.first += sites[k].precision();
    acc.second += sites[k].precision_mean();
  }
  const Eigen::MatrixXd & cov = prior.dense().matrix();
  const auto n_obs = static_cast<Eigen::Index>(per_cell.size());
  if (n_obs == 0) {
    return prior;
  }
  std::vector<Eigen::Index> cells;
  Eigen::VectorXd pseudo(n_obs);
  Eigen::VectorXd noise(n_obs);
  for (const auto & [cell, acc] : per_cell) {
    const auto k = static_cast<Eigen::Index>(cells.size());
    cells.push_back(static_cast<Eigen::Index>(cell));
    pseudo[k] = acc.second / acc.first;
    noise[k] = 1.0 / acc.first;
  }
  const auto n = static_cast<Eigen::Index>(prior.size());
  Eigen::MatrixXd cross(n, n_obs);
  Eigen::MatrixXd gram(n_obs, n_obs);
  Eigen::VectorXd residual(n_obs);
  for (Eigen::Index k = 0; k < n_obs; ++k) {
    cross.col(k) = cov.col(cells[static_cast<std::size_t>(k)]);
    residual[k] = pseudo[k] - prior.mean()[cells[static_cast<std::size_t>(k)]];
  }
  for (Eigen::Index k = 0; k < n_obs; ++k) {
    for (Eigen::Index l = 0; l < n_obs; ++l) {
      gram(k, l) = cross(cells[static_cast<std::size_t>(k)], l);
    }
    gram(k, k) += noise[k];
  }
  const Eigen::LDLT<Eigen::MatrixXd> solver(gram);
  Eigen::VectorXd mean = prior.mean() + cross * solver.solve(residual);
  Eigen::MatrixXd post = cov - cross * solver.solve(cross.transpose());
  post = (0.5 * (post + post.transpose())).eval();
  return LatentMap(prior.lattice(), std::move(mean), DenseCovariance(std::move(post)));
}

LatentMap single_sweep(const LatentMap & prior, std::span<const Measurement> batch)
{
  prior.dense();
  LatentMap posterior = prior;
  const SiteParams blank;
  for (const auto & meas : batch) {
    validate(meas, prior.size());
    const auto cav = cavity(
      posterior.mean()[static_cast<Eigen::Index>(meas.cell)], posterior.variance(meas.cell), blank);
    const SiteParams site = site_from_moments(*cav, moment_match(*cav, meas.label));
    replace_site(posterior, meas.cell, blank, site);
  }
  return posterior;
}

State run(const LatentMap & prior, std::span<const Measurement> batch, const Options & opts)
{
  prior.dense();
  State state{prior, prior, {batch.begin(), batch.end()}, {}, 0, false, false, 0, false};
  state.sites.assign(batch.size(), SiteParams{});
  for (const auto & meas : batch) {
    validate(meas, prior.size());
  }
  if (batch.empty()) {
    state.converged = true;
    state.last_change = 0.0;
    return state;
  }

  int growth_streak = 0;
  double previous = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double change = 0.0;
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const std::size_t cell = batch[k].cell;
      const auto cav = cavity(
        state.posterior.mean()[static_cast<Eigen::Index>(cell)], state.posterior.variance(cell),
        state.sites[k]);
      if (!cav) {
        ++skipped;
        continue;
      }
      SiteParams updated;
      try {
        updated = site_from_moments(*cav, moment_match(*cav, batch[k].label));
        replace_site(state.posterior, cell, state.sites[k], updated);
      } catch (const Pathology &) {
        ++skipped;
        continue;
      }
      change = std::max(change, relative_change(state.sites[k], updated));
      state.sites[k] = updated;
    }
    ++state.sweeps;
    state.skipped_updates += skipped;
    state.last_change = change;

    if (opts.verify_sweeps) {
      const LatentMap rebuilt = recompute_posterior(state.prior, state.measurements, state.sites);
      const double gap = std::max(
        (rebuilt.mean() - state.posterior.mean()).cwiseAbs().maxCoeff(),
        (rebuilt.dense().matrix() - state.posterior.dense().matrix()).cwiseAbs().maxCoeff());
      state.max_refresh_discrepancy = std::max(state.max_refresh_discrepancy, gap);
    }

    if (static_cast<double>(skipped) > 0.01 * static_cast<double>(batch.size())) {
      state.aborted = true;
      break;
    }
    if (change < opts.tol) {
      state.converged = true;
      break;
    }
    growth_streak = (state.sweeps > 1 && change > previous) ? growth_streak + 1 : 0;
    previous = change;
    if (growth_streak >= 3) {
      state.diverged = true;
      break;
    }
  }
  return state;
}

}  // namespace ogf::ep
