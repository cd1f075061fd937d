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

#ifndef OGF_EP_HPP_
#define OGF_EP_HPP_

#include "ogf/latent_map.hpp"
#include "ogf/lattice.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

/// Expectation propagation for probit GP classification on the lattice.
///
/// Each measurement's likelihood term cdf(y * m_i) is replaced by an
/// unnormalized Gaussian site eta * N(m_i; mu, sigma2). Sweeps refine one site
/// at a time: remove it from the posterior (cavity), match the first two
/// moments of cavity x likelihood, and fold the resulting site back in with a
/// rank-1 Kalman-form correction. Dense backend only; this module is the
/// reference the streaming filter is checked against.
namespace ogf::ep
{

struct SiteParams
{
  double eta = 1.0;
  double mu = 0.0;
  /// +inf marks a site that has not been updated yet (t_i = 1).
  double sigma2 = std::numeric_limits<double>::infinity();

  bool initialized() const { return sigma2 < std::numeric_limits<double>::infinity(); }
  double precision() const { return initialized() ? 1.0 / sigma2 : 0.0; }
  /// mu / sigma2, zero for an uninitialized site.
  double precision_mean() const { return initialized() ? mu / sigma2 : 0.0; }
};

struct CavityParams
{
  double mu = 0.0;
  double sigma2 = 1.0;
};

struct MomentMatch
{
  double z = 0.0;
  double eta_hat = 0.5;
  double mu_hat = 0.0;
  double sigma2_hat = 1.0;
  /// mu_hat - mu_cav and sigma2_cav - sigma2_hat, computed without cancellation.
  double mean_shift = 0.0;
  double variance_reduction = 0.0;
};

/// EP pathology: a site update that cannot be carried out.
class Pathology : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Leave-one-out marginal from a posterior marginal and the site to remove.
/// Empty when the cavity variance would be non-positive.
std::optional<CavityParams> cavity(double post_mu, double post_sigma2, const SiteParams & site);

/// First two moments of N(m; mu_cav, sigma2_cav) * cdf(y * m), normalized.
MomentMatch moment_match(const CavityParams & cav, int label);

/// Site that turns the cavity into the matched Gaussian. Throws Pathology if
/// the matched variance does not contract.
SiteParams site_from_moments(const CavityParams & cav, const MomentMatch & mm);

/// Kalman measurement update with the linear pseudo-observation
/// m_cell ~ N(site.mu, site.sigma2). An uninitialized site leaves the map unchanged.
void kf_site_update(LatentMap & map, std::size_t cell, const SiteParams & site);

/// Replaces the contribution of `old_site` at `cell` by `new_site` in one
/// rank-1 step, working in natural parameters.
void replace_site(LatentMap & map, std::size_t cell, const SiteParams & old_site,
                  const SiteParams & new_site);

struct Options
{
  double tol = 1e-6;
  int max_sweeps = 100;
  /// Rebuild the posterior from scratch after every sweep and record the discrepancy.
  bool verify_sweeps = false;
};

struct State
{
  LatentMap prior;
  LatentMap posterior;
  std::vector<Measurement> measurements;
  std::vector<SiteParams> sites;
  int sweeps = 0;
  bool converged = false;
  bool diverged = false;
  /// Site updates skipped over the run because of a negative cavity variance.
  std::size_t skipped_updates = 0;
  /// Set when more than 1% of the site updates in one sweep were skipped.
  bool aborted = false;
  /// Largest relative change of (mu, sigma2) over the sites in the last sweep.
  double last_change = std::numeric_limits<double>::infinity();
  /// Largest entrywise gap between the incremental and rebuilt posterior seen
  /// when Options::verify_sweeps is set.
  double max_refresh_discrepancy = 0.0;
};

/// Runs in-order sweeps until the largest relative site change drops below
/// `tol`, the change grows three sweeps in a row (diverged), or `max_sweeps` is hit.
State run(const LatentMap & prior, std::span<const Measurement> batch, const Options & opts = {});

/// Exactly one in-order sweep starting from uninitialized sites.
LatentMap single_sweep(const LatentMap & prior, std::span<const Measurement> batch);

/// Posterior of `prior` combined with every initialized site, computed in one
/// batch Kalman update without using any incremental state.
LatentMap recompute_posterior(
  const LatentMap & prior, std::span<const Measurement> measurements,
  std::span<const SiteParams> sites);

}  // namespace ogf::ep

#endif  // OGF_EP_HPP_
