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

#include "mesolead/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mesolead {

double ErasureProtocol::gamma_max() const { return epsilon_tau / std::numbers::pi; }

void ErasureProtocol::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("erasure protocol needs tau > 0");
  if (!(tau_eq >= 0.0)) throw std::invalid_argument("erasure protocol needs tau_eq >= 0");
  if (!(epsilon_tau > 0.0)) throw std::invalid_argument("erasure protocol needs epsilon_tau > 0");
}

ErasureDrive erasure_drive(double t, const ErasureProtocol& p) {
  const double slack = 1e-12 * std::max(1.0, p.end());
  if (t < -slack || t > p.end() + slack) throw std::out_of_range("erasure_drive: t outside protocol range");
  if (t >= p.tau) return {p.epsilon_tau, 0.0};
  const double pi = std::numbers::pi;
  const double x = std::max(t, 0.0) / p.tau;
  const double s = std::sin(pi * x);
  return {p.mu + (p.epsilon_tau - p.mu) * (x - std::sin(2.0 * pi * x) / (2.0 * pi)), p.gamma_max() * s * s};
}

namespace {

ReservoirSpec reservoir_of(const LeadParams& lead, double gamma) {
  ReservoirSpec r;
  r.temperature = lead.temperature;
  r.chemical_potential = lead.mu;
  r.spectral_density = FlatSpectralDensity{gamma, lead.omega_max};
  r.mode_count = lead.modes;
  r.coupling_site = 0;
  return r;
}

void apply_efficiency(ExtendedSystem& sys, const LeadParams& lead) {
  sys.set_efficiency(EfficiencyMap::uniform(sys.dim(), lead.lambda_plus, lead.lambda_minus));
}

}  // namespace

ExtendedSystem make_dot_system(double epsilon, const LeadParams& lead) {
  ExtendedSystem sys = assemble(single_dot(epsilon), {reservoir_of(lead, lead.gamma)});
  apply_efficiency(sys, lead);
  return sys;
}

ExtendedSystem make_erasure_system(const ErasureProtocol& protocol, const LeadParams& lead) {
  protocol.validate();
  SystemSpec spec;
  spec.sites = 1;
  spec.time_dependent = true;
  spec.hamiltonian = [protocol](double t) {
    return Matrix::Constant(1, 1, Complex(erasure_drive(std::clamp(t, 0.0, protocol.end()), protocol).epsilon, 0.0));
  };
  spec.coupling_scale = [protocol](double t) {
    return std::sqrt(erasure_drive(std::clamp(t, 0.0, protocol.end()), protocol).gamma / protocol.gamma_max());
  };
  ExtendedSystem sys = assemble(spec, {reservoir_of(lead, protocol.gamma_max())});
  apply_efficiency(sys, lead);
  return sys;
}

Matrix erasure_initial_state(const ExtendedSystem& sys) {
  Matrix c = Matrix::Zero(sys.dim(), sys.dim());
  for (Index i = 0; i < sys.dim(); ++i) c(i, i) = sys.is_system_site(i) ? 0.5 : sys.occupation()(i);
  return c;
}

Matrix erasure_target_state(const ExtendedSystem& sys) {
  Matrix c = Matrix::Zero(sys.dim(), sys.dim());
  for (Index i = 0; i < sys.dim(); ++i) c(i, i) = sys.is_system_site(i) ? 0.0 : sys.occupation()(i);
  return c;
}

}  // namespace mesolead
