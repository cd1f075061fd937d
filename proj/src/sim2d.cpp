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

#include "ogf/sim2d.hpp"

#include "ogf/error.hpp"
#include "ogf/filter.hpp"
#include "ogf/kernel.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ogf::sim2d
{
namespace
{

constexpr std::string_view kLab25 = R"(.........................
.........................
..########.......######..
..########.......######..
..########.......######..
..########.......######..
..########.......######..
..########...............
..########...............
.........................
.........................
.........................
..............#########..
..............#########..
..######......#########..
..######......#########..
..######......#########..
..######......#########..
..######.................
..######.................
..######.................
..............######.....
..............######.....
..............######.....
.........................
)";

// Uniform draw in [0, bound) that does not depend on the standard library's
// distribution implementation.
std::uint64_t bounded(std::mt19937_64 & rng, std::uint64_t bound)
{
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r = rng();
  while (r >= limit) {
    r = rng();
  }
  return r % bound;
}

double elapsed_ms(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
    .count();
}

std::string format_double(double v)
{
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

GridLattice GroundTruthMap::lattice() const { return GridLattice({rows, cols}, 1.0); }

double GroundTruthMap::occupied_fraction() const
{
  if (labels.empty()) {
    return 0.0;
  }
  std::size_t occupied = 0;
  for (const auto l : labels) {
    occupied += l > 0 ? 1 : 0;
  }
  return static_cast<double>(occupied) / static_cast<double>(labels.size());
}

GroundTruthMap parse_ground_truth(std::string_view text, const std::string & source)
{
  GroundTruthMap gt;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      if (end == text.size()) {
        break;
      }
      continue;
    }
    if (gt.cols == 0) {
      gt.cols = line.size();
    } else if (line.size() != gt.cols) {
      throw IoError(source, line_no, "row length " + std::to_string(line.size()) + " != " +
                                       std::to_string(gt.cols));
    }
    for (const char ch : line) {
      if (ch == '#') {
        gt.labels.push_back(1);
      } else if (ch == '.') {
        gt.labels.push_back(-1);
      } else {
        throw IoError(source, line_no, std::string("unexpected character '") + ch + "'");
      }
    }
    ++gt.rows;
    if (end == text.size()) {
      break;
    }
  }
  if (gt.rows == 0) {
    throw IoError(source, 0, "map has no rows");
  }
  return gt;
}

GroundTruthMap load_ground_truth(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError(path, 0, "cannot open ground-truth map");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ground_truth(ss.str(), path);
}

std::string_view lab25_text() { return kLab25; }

GroundTruthMap lab25() { return parse_ground_truth(kLab25, "lab25"); }

std::vector<Measurement> sample_without_repetition(
  const GroundTruthMap & gt, std::size_t n, std::uint64_t seed)
{
  const std::size_t total = gt.size();
  if (n > total) {
    throw std::invalid_argument(
      "cannot draw " + std::to_string(n) + " distinct samples from " + std::to_string(total) +
      " cells");
  }
  std::vector<std::size_t> cells(total);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::vector<Measurement> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(bounded(rng, total - k));
    std::swap(cells[k], cells[pick]);
    out.push_back({cells[k], gt.labels[cells[k]], k});
  }
  return out;
}

double map_difference(std::span<const double> estimate, std::span<const double> reference)
{
  if (estimate.size() != reference.size()) {
    throw std::invalid_argument("map difference needs equal-length mean vectors");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate[i] - reference[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  if (!(den > 0.0)) {
    throw NumericalError("map difference undefined for an all-zero reference map");
  }
  return std::sqrt(num) / std::sqrt(den);
}

double accuracy(const TernaryMap & est, const GroundTruthMap & gt)
{
  if (est.size() != gt.size()) {
    throw std::invalid_argument("accuracy needs maps with equal cell counts");
  }
  if (gt.size() == 0) {
    return 0.0;
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    hits += est.states[i] == gt.labels[i] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(gt.size());
}

TrialResult run_trial(
  const ExperimentConfig & cfg, const GroundTruthMap & gt, std::size_t n, int trial)
{
  const GridLattice lattice = gt.lattice();
  const LatentMap prior = build_prior(lattice, KernelConfig{cfg.sigma});
  auto samples = sample_without_repetition(gt, n, cfg.seed + static_cast<std::uint64_t>(trial));

  LatentMap ogf = prior;
  auto start = std::chrono::steady_clock::now();
  filter::process(ogf, samples);
  const double t_ogf = elapsed_ms(start);

  start = std::chrono::steady_clock::now();
  ep::State ep_state = ep::run(prior, samples, cfg.ep);
  const double t_ep = elapsed_ms(start);

  LogOddsMap baseline(gt.size(), cfg.log_odds);
  baseline.process(samples);

  TrialResult r{
    n,
    trial,
    std::move(samples),
    std::move(ogf),
    std::move(ep_state),
    std::move(baseline),
    {},
    {},
    {},
  };
  r.ogf_map = classify(r.ogf, cfg.thresholds);
  r.ep_map = classify(r.ep.posterior, cfg.thresholds);
  r.baseline_map = r.baseline.classify(cfg.thresholds);
  r.acc_ogf = accuracy(r.ogf_map, gt);
  r.acc_ep = accuracy(r.ep_map, gt);
  r.acc_baseline = accuracy(r.baseline_map, gt);
  try {
    r.mapdiff = map_difference(
      std::span<const double>(r.ogf.mean().data(), r.ogf.size()),
      std::span<const double>(r.ep.posterior.mean().data(), r.ep.posterior.size()));
  } catch (const NumericalError &) {
    r.mapdiff = std::numeric_limits<double>::quiet_NaN();
  }
  r.t_ogf_ms = cfg.timing ? t_ogf : 0.0;
  r.t_ep_ms = cfg.timing ? t_ep : 0.0;
  return r;
}

ExperimentRow summarize(const TrialResult & r)
{
  return ExperimentRow{
    r.n,
    r.trial,
    r.acc_ogf,
    r.acc_ep,
    r.acc_baseline,
    r.mapdiff,
    r.t_ogf_ms,
    r.t_ep_ms,
    agreement(r.ogf_map, r.ep_map),
    r.ep.converged,
    r.ep.sweeps};
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig & cfg, const GroundTruthMap & gt)
{
  if (cfg.trials < 1) {
    throw std::invalid_argument("experiment needs at least one trial");
  }
  for (const auto n : cfg.sample_counts) {
    if (n > gt.size()) {
      throw std::invalid_argument(
        "sample count " + std::to_string(n) + " exceeds cell count " + std::to_string(gt.size()));
    }
  }
  std::vector<ExperimentRow> rows;
  for (const auto n : cfg.sample_counts) {
    for (int trial = 0; trial < cfg.trials; ++trial) {
      rows.push_back(summarize(run_trial(cfg, gt, n, trial)));
    }
  }
  return rows;
}

void write_results_csv(std::ostream & os, std::span<const ExperimentRow> rows)
{
  os << "n,trial,acc_ogf,acc_ep,acc_baseline,mapdiff,t_ogf_ms,t_ep_ms\n";
  for (const auto & r : rows) {
    os << r.n << ',' << r.trial << ',' << format_double(r.acc_ogf) << ','
       << format_double(r.acc_ep) << ',' << format_double(r.acc_baseline) << ','
       << format_double(r.mapdiff) << ',' << format_double(r.t_ogf_ms) << ','
       << format_double(r.t_ep_ms) << '\n';
  }
}

std::size_t count_identical_classification_with_mapdiff(std::span<const ExperimentRow> rows)
{
  std::size_t n = 0;
  for (const auto & r : rows) {
    if (r.agreement == 1.0 && r.mapdiff > 0.0) {
      ++n;
    }
  }
  return n;
}

}  // namespace ogf::sim2d
