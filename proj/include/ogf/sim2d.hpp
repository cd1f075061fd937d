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

#ifndef OGF_SIM2D_HPP_
#define OGF_SIM2D_HPP_

#include "ogf/ep.hpp"
#include "ogf/latent_map.hpp"
#include "ogf/lattice.hpp"
#include "ogf/log_odds.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// 2-D simulation: noise-free random sampling of a known map and the
/// comparison of the streaming filter, converged EP and the log-odds grid.
namespace ogf::sim2d
{

/// Fully labeled 2-D map. Row r, column c is lattice cell r * cols + c.
struct GroundTruthMap
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> labels;

  std::size_t size() const { return labels.size(); }
  GridLattice lattice() const;
  double occupied_fraction() const;
};

/// ASCII map: one row per line, '#' occupied, '.' free, blank lines ignored.
GroundTruthMap parse_ground_truth(std::string_view text, const std::string & source = "<memory>");
GroundTruthMap load_ground_truth(const std::string & path);
/// The bundled 25 x 25 indoor map (same content as data/maps/lab25.txt).
GroundTruthMap lab25();
std::string_view lab25_text();

/// `n` distinct cells chosen by a seeded Fisher-Yates shuffle, labeled from `gt`.
std::vector<Measurement> sample_without_repetition(
  const GroundTruthMap & gt, std::size_t n, std::uint64_t seed);

/// |a - b|_2 / |b|_2; NumericalError when |b|_2 is zero.
double map_difference(std::span<const double> estimate, std::span<const double> reference);

/// Fraction of cells whose ternary state equals the true label.
double accuracy(const TernaryMap & est, const GroundTruthMap & gt);

struct ExperimentConfig
{
  std::vector<std::size_t> sample_counts{30, 60, 90, 120, 150, 180, 210, 240, 270, 300};
  std::uint64_t seed = 7;
  double sigma = 1.0;
  Thresholds thresholds;
  int trials = 10;
  ep::Options ep;
  /// Symmetric increments so that a single free observation clears the free threshold.
  LogOddsConfig log_odds{.hit = std::log(0.7 / 0.3), .miss = std::log(0.3 / 0.7)};
  /// When false, wall times are reported as zero so outputs are reproducible byte for byte.
  bool timing = true;
};

/// Everything produced by one (sample count, trial) cell of the experiment.
struct TrialResult
{
  std::size_t n = 0;
  int trial = 0;
  std::vector<Measurement> samples;
  LatentMap ogf;
  ep::State ep;
  LogOddsMap baseline;
  TernaryMap ogf_map;
  TernaryMap ep_map;
  TernaryMap baseline_map;
  double acc_ogf = 0.0;
  double acc_ep = 0.0;
  double acc_baseline = 0.0;
  /// NaN when the EP mean is identically zero.
  double mapdiff = 0.0;
  double t_ogf_ms = 0.0;
  double t_ep_ms = 0.0;
};

TrialResult run_trial(
  const ExperimentConfig & cfg, const GroundTruthMap & gt, std::size_t n, int trial);

struct ExperimentRow
{
  std::size_t n = 0;
  int trial = 0;
  double acc_ogf = 0.0;
  double acc_ep = 0.0;
  double acc_baseline = 0.0;
  double mapdiff = 0.0;
  double t_ogf_ms = 0.0;
  double t_ep_ms = 0.0;
  /// Fraction of cells where the filter and EP ternary maps agree.
  double agreement = 0.0;
  bool ep_converged = false;
  int ep_sweeps = 0;
};

ExperimentRow summarize(const TrialResult & r);

/// Runs every (sample count, trial) pair; trial k uses seed + k.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig & cfg, const GroundTruthMap & gt);

/// Header `n,trial,acc_ogf,acc_ep,acc_baseline,mapdiff,t_ogf_ms,t_ep_ms`.
void write_results_csv(std::ostream & os, std::span<const ExperimentRow> rows);

/// Rows whose latent maps differ while their classifications coincide exactly.
std::size_t count_identical_classification_with_mapdiff(std::span<const ExperimentRow> rows);

}  // namespace ogf::sim2d

#endif  // OGF_SIM2D_HPP_
