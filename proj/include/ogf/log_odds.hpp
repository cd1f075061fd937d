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

#ifndef OGF_LOG_ODDS_HPP_
#define OGF_LOG_ODDS_HPP_

#include "ogf/lattice.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ogf
{

struct LogOddsConfig
{
  double hit = std::log(0.7 / 0.3);
  double miss = std::log(0.4 / 0.6);
  double min = -3.5;
  double max = 3.5;
};

/// Independent-cell occupancy grid with the classic log-odds recursion.
class LogOddsMap
{
public:
  explicit LogOddsMap(std::size_t n_cells, const LogOddsConfig & cfg = {});

  std::size_t size() const { return logodds_.size(); }
  const LogOddsConfig & config() const { return cfg_; }
  double logodds(std::size_t cell) const { return logodds_.at(cell); }
  std::span<const double> values() const { return logodds_; }

  /// Adds the hit or miss increment to the measured cell and clamps it.
  void update(const Measurement & meas);
  void process(std::span<const Measurement> batch);

  TernaryMap classify(const Thresholds & th) const;

private:
  LogOddsConfig cfg_;
  std::vector<double> logodds_;
};

}  // namespace ogf

#endif  // OGF_LOG_ODDS_HPP_
