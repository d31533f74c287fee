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

#include "mesolead/lead_model.hpp"

namespace mesolead {

/// Bit-erasure drive: the dot level is ramped from mu to epsilon_tau while
/// the coupling is switched on and off again over [0, tau], followed by an
/// equilibration stretch of length tau_eq with the dot decoupled.
struct ErasureProtocol {
  double tau = 1.0;
  double epsilon_tau = 0.8;
  double mu = 0.0;
  double tau_eq = 0.0;

  double gamma_max() const;
  double end() const { return tau + tau_eq; }
  void validate() const;
};

struct ErasureDrive {
  double epsilon = 0.0;
  double gamma = 0.0;
};

/// epsilon(t) = mu + (epsilon_tau - mu)(t/tau - sin(2 pi t/tau)/(2 pi)),
/// Gamma(t) = (epsilon_tau/pi) sin^2(pi t/tau); constant epsilon_tau and
/// zero coupling after tau. Throws std::out_of_range outside [0, tau + tau_eq].
ErasureDrive erasure_drive(double t, const ErasureProtocol& protocol);

/// Flat lead attached to site 0.
struct LeadParams {
  double temperature = 1.0;
  double mu = 0.0;
  double omega_max = 1.0;
  double gamma = 0.125;
  int modes = 10;
  double lambda_plus = 1.0;
  double lambda_minus = 1.0;
};

/// Single level at `epsilon` coupled to one flat lead.
ExtendedSystem make_dot_system(double epsilon, const LeadParams& lead);

/// Single level driven by `protocol`; the lead's gamma is replaced by the
/// protocol's peak coupling and scaled by sqrt(Gamma(t) / Gamma_max).
ExtendedSystem make_erasure_system(const ErasureProtocol& protocol, const LeadParams& lead);

/// diag(1/2, f_1, ..., f_L).
Matrix erasure_initial_state(const ExtendedSystem& sys);

/// diag(0, f_1, ..., f_L).
Matrix erasure_target_state(const ExtendedSystem& sys);

}  // namespace mesolead
