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

#include <vector>

#include "mesolead/lead_model.hpp"
#include "mesolead/ode.hpp"

namespace mesolead {

/// dC/dt = -(W C + C W^dagger) + F with W = iH(t) + Gamma/2.
Matrix lyapunov_rhs(const Matrix& c, double t, const ExtendedSystem& sys);

/// Covariance samples at each requested time; `times` must be ascending and
/// start at or after t0.
std::vector<Matrix> evolve(const Matrix& c0, double t0, const std::vector<double>& times, const ExtendedSystem& sys,
                           const OdeOptions& options = {});

Matrix evolve_to(const Matrix& c0, double t0, double t1, const ExtendedSystem& sys, const OdeOptions& options = {});

/// Solves W C + C W^dagger = F at time t via a Schur decomposition of W.
/// Throws std::runtime_error if W is not strictly stable.
Matrix steady_state(const ExtendedSystem& sys, double t = 0.0);

/// I_N = Tr[F_a - Gamma_a C]: particles entering the extended system from
/// the residual reservoir of lead a.
double avg_particle_current(const Matrix& c, const ExtendedSystem& sys, int lead);

/// I_E = Tr[F_a H - Gamma_a (C H + H C) / 2].
double avg_energy_current(const Matrix& c, const ExtendedSystem& sys, int lead, double t = 0.0);

/// -Tr[Gamma_a (H_int C + C H_int)] / 2; summed over all leads when lead < 0.
double avg_measurement_energy_current(const Matrix& c, const ExtendedSystem& sys, double t = 0.0, int lead = -1);

/// Currents from lead a into the central system.
struct InternalCurrents {
  double particle = 0.0;
  double energy = 0.0;
};

/// J^N = i Tr([P_a, H_SLa] C),
/// J^E = i Tr([H_La, H_SLa] C) - Tr[(H_SLa Gamma_a + Gamma_a H_SLa) C] / 2,
/// with P_a the projector on the modes of lead a.
InternalCurrents internal_currents(const Matrix& c, const ExtendedSystem& sys, int lead, double t = 0.0);

/// Time integrals of all averaged currents along an unconditional evolution.
struct LeadIntegrals {
  double particles = 0.0;
  double energy = 0.0;
  double measurement_energy = 0.0;
  double internal_particles = 0.0;
  double internal_energy = 0.0;
};

struct UnconditionalIntegrals {
  Matrix covariance;
  std::vector<LeadIntegrals> leads;
};

UnconditionalIntegrals integrate_currents(const Matrix& c0, double t0, double t1, const ExtendedSystem& sys,
                                          const OdeOptions& options = {});

}  // namespace mesolead
