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
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mesolead/protocols.hpp"

namespace mesolead {

/// INI-style experiment description:
///
///   [system]   epsilon
///   [lead]     T, mu, omega_max, Gamma, L, Lambda_plus, Lambda_minus
///   [protocol] tau (comma-separated list for erasure), tau_eq, epsilon_tau
///   [run]      trajectories, seed, workers, bins, rtol, atol
struct ExperimentConfig {
  double epsilon = 0.25;
  LeadParams lead;
  std::vector<double> tau{400.0};
  double tau_eq = 0.0;
  std::optional<double> epsilon_tau;
  std::uint64_t trajectories = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t bins = 0;
  double rtol = 1e-8;
  double atol = 1e-10;

  bool is_erasure() const { return epsilon_tau.has_value(); }
  ErasureProtocol erasure(std::size_t tau_index) const;
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace mesolead
