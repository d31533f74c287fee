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

#include "mesolead/config.hpp"
#include "mesolead/ode.hpp"
#include "mesolead/stats.hpp"
#include "mesolead/tpm_entropy.hpp"
#include "mesolead/trajectory.hpp"
#include "mesolead/unconditional.hpp"

namespace mesolead {

struct RunOptions {
  std::uint64_t seed = 1;
  std::uint64_t trajectories = 1000;
  unsigned workers = 1;
  bool keep_records = false;
  OdeOptions ode{1e-8, 1e-10};
};

/// Run options taken from the [run] section of a config.
RunOptions run_options(const ExperimentConfig& config);

/// Entropy productions tracked with fluctuation-theorem estimators.
inline const std::vector<std::string> kEntropyQuantities{"S_tot", "S_unc", "S_mart", "S_tot_modified"};

struct SteadyFtResult {
  ExperimentConfig config;
  RunOptions options;
  EnsembleStats stats;
  std::map<std::string, IftEstimator> ift;
  std::vector<MeasurementRecord> records;
  Matrix steady_covariance;
  double measurement_energy_rate = 0.0;
};

/// Steady-state fluctuation-theorem experiment: starts every trajectory from a
/// sampled eigenstate of the steady state, monitors it for tau and closes with
/// the final projective measurement.
SteadyFtResult run_steady_ft(const ExperimentConfig& config, const RunOptions& options);

struct ErasurePoint {
  ErasureProtocol protocol;
  EnsembleStats stats;
  std::vector<MeasurementRecord> records;
  double fidelity = 0.0;
  double external_heat = 0.0;
  double internal_heat = 0.0;

  double heat_mismatch() const;
};

struct ErasureResult {
  ExperimentConfig config;
  RunOptions options;
  std::vector<ErasurePoint> points;
  double landauer_bound = 0.0;
};

/// Erasure sweep over every tau in the config; heats are counted up to
/// tau + tau_eq.
ErasureResult run_erasure(const ExperimentConfig& config, const RunOptions& options);

struct LeadCurrentSummary {
  double particle = 0.0;
  double energy = 0.0;
  double measurement_energy = 0.0;
  double internal_particle = 0.0;
  double internal_energy = 0.0;
};

struct SteadyStateSummary {
  Matrix covariance;
  double dot_occupation = 0.0;
  std::vector<LeadCurrentSummary> leads;
  double finite_band_occupation = 0.0;
  double wide_band_occupation = 0.0;
};

SteadyStateSummary steady_state_summary(const ExperimentConfig& config);

/// Averaged erasure heats from the Lyapunov evolution alone.
std::vector<ErasurePoint> unconditional_erasure(const ExperimentConfig& config, const OdeOptions& ode = {});

/// Level occupation for a single level coupled to a flat continuum of
/// half-width omega_max, including the real part of the self-energy.
double finite_band_occupation(double epsilon, double gamma, double omega_max, double temperature, double mu);

/// Same without band edges: Lorentzian of full width gamma.
double wide_band_occupation(double epsilon, double gamma, double temperature, double mu);

struct OracleCheckResult {
  int modes = 0;
  std::uint64_t seeds = 0;
  std::uint64_t record_mismatches = 0;
  double first_divergence_time = -1.0;
  std::uint64_t total_jumps = 0;
  double max_covariance_error = 0.0;
  double max_wick_residual = 0.0;
  double max_purity_residual = 0.0;
  double max_unconditional_error = 0.0;
};

/// Seed-locked comparison of the covariance engine against the dense
/// many-body oracle on a dot with min(L, max_lead_modes) lead modes, started
/// from diag(1/2, f).
OracleCheckResult run_oracle_check(const ExperimentConfig& config, const RunOptions& options, double t_span,
                                   int max_lead_modes = 3);

}  // namespace mesolead
