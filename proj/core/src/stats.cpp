// Copyright 2026 The mesolead Authors
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

#include "mesolead/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mesolead {

void RunningStats::add(double x) {
  if (n_ == 0) {
    min_ = max_ = x;
  } else {
    min_ = std::min(min_, x);
    max_ = std::max(max_, x);
  }
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double nt = na + nb;
  const double delta = other.mean_ - mean_;
  m2_ += other.m2_ + delta * delta * na * nb / nt;
  mean_ += delta * nb / nt;
  n_ += other.n_;
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
}

double RunningStats::variance() const { return n_ < 2 ? 0.0 : std::max(m2_, 0.0) / static_cast<double>(n_ - 1); }

double RunningStats::standard_error() const {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

std::uint64_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

namespace {

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

}  // namespace

std::size_t freedman_diaconis_bins(const std::vector<double>& values) {
  if (values.size() < 2) return 1;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double span = sorted.back() - sorted.front();
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  if (!(span > 0.0) || !(iqr > 0.0)) return 1;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(values.size()));
  const double bins = std::ceil(span / width);
  return static_cast<std::size_t>(std::clamp(bins, 1.0, 100000.0));
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  Histogram h;
  if (values.empty()) return h;
  if (bins == 0) bins = freedman_diaconis_bins(values);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    h.counts[std::min(idx, bins - 1)] += 1;
  }
  return h;
}

void SampleSeries::add(double x) {
  values_.push_back(x);
  stats_.add(x);
}

void SampleSeries::merge(const SampleSeries& other) {
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  stats_.merge(other.stats_);
}

void EnsembleStats::merge(const EnsembleStats& other) {
  for (const auto& [name, series] : other.quantities) quantities[name].merge(series);
  trajectories += other.trajectories;
  floored += other.floored;
  jumps += other.jumps;
}

}  // namespace mesolead
