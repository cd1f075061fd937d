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

#include "ogf/log_odds.hpp"

#include <algorithm>
#include <stdexcept>

namespace ogf
{

LogOddsMap::LogOddsMap(std::size_t n_cells, const LogOddsConfig & cfg)
: cfg_(cfg), logodds_(n_cells, 0.0)
{
  if (!(cfg.min <= 0.0 && cfg.max >= 0.0 && cfg.min < cfg.max)) {
    throw std::invalid_argument("log-odds clamp bounds must bracket zero");
  }
}

void LogOddsMap::update(const Measurement & meas)
{
  validate(meas, logodds_.size());
  double & l = logodds_[meas.cell];
  l = std::clamp(l + (meas.label > 0 ? cfg_.hit : cfg_.miss), cfg_.min, cfg_.max);
}

void LogOddsMap::process(std::span<const Measurement> batch)
{
  for (const auto & meas : batch) {
    update(meas);
  }
}

TernaryMap LogOddsMap::classify(const Thresholds & th) const
{
  TernaryMap out;
  out.states.reserve(logodds_.size());
  for (const double l : logodds_) {
    out.states.push_back(decide(1.0 / (1.0 + std::exp(-l)), th));
  }
  return out;
}

}  // namespace ogf
