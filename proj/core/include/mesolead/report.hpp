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
#include <filesystem>
#include <string>
#include <vector>

#include "mesolead/experiments.hpp"

namespace mesolead {

struct ConvergencePoint {
  std::uint64_t n = 0;
  double estimator = 0.0;
  double se = 0.0;
};

/// Running estimator after n samples at roughly `points` evenly spaced n.
/// With `exponential` the estimator is <exp(-x)>, otherwise <x>.
std::vector<ConvergencePoint> convergence_trace(const std::vector<double>& values, bool exponential,
                                                std::size_t points = 200);

void write_histogram_csv(const std::filesystem::path& path, const Histogram& histogram);
void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergencePoint>& trace);
void write_events_csv(const std::filesystem::path& path, const MeasurementRecord& record);

/// summary.json, hist_<q>.csv, convergence_<q>.csv and events_<index>.csv
/// when records were kept. `bins == 0` selects Freedman-Diaconis.
void write_report(const SteadyFtResult& result, const std::filesystem::path& out, std::size_t bins);
void write_report(const ErasureResult& result, const std::filesystem::path& out, std::size_t bins);
void write_report(const ExperimentConfig& config, const SteadyStateSummary& summary, const std::filesystem::path& out);
void write_report(const ExperimentConfig& config, const std::vector<ErasurePoint>& points,
                  const std::filesystem::path& out);
void write_report(const OracleCheckResult& result, const std::filesystem::path& out);

}  // namespace mesolead
