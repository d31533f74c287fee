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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mesolead {

/// Streaming mean and variance (Welford), mergeable (Chan et al.).
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero below two samples.
  double variance() const;
  double standard_error() const;
  double min() const { return min_; }
  double max() const { return max_; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
};

/// Freedman-Diaconis bin count (at least one bin).
std::size_t freedman_diaconis_bins(const std::vector<double>& values);

/// Equal-width histogram over [min, max]; bins == 0 selects Freedman-Diaconis.
Histogram make_histogram(const std::vector<double>& values, std::size_t bins = 0);

/// One scalar observable sampled once per trajectory, kept in trajectory order.
class SampleSeries {
 public:
  void add(double x);
  void merge(const SampleSeries& other);

  const std::vector<double>& values() const { return values_; }
  const RunningStats& stats() const { return stats_; }

 private:
  std::vector<double> values_;
  RunningStats stats_;
};

/// Per-quantity samples plus counters for one ensemble.
struct EnsembleStats {
  std::map<std::string, SampleSeries> quantities;
  std::uint64_t trajectories = 0;
  std::uint64_t floored = 0;
  std::uint64_t jumps = 0;

  void add(const std::string& name, double value) { quantities[name].add(value); }
  void merge(const EnsembleStats& other);
};

}  // namespace mesolead
