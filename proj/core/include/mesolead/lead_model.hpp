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

#include <functional>
#include <variant>
#include <vector>

#include "mesolead/linalg.hpp"

namespace mesolead {

/// J(w) = gamma on [-omega_max, omega_max], zero outside.
struct FlatSpectralDensity {
  double gamma = 0.0;
  double omega_max = 1.0;
};

/// J(w) tabulated on an ascending grid and linearly interpolated; zero
/// outside the table.
struct TabulatedSpectralDensity {
  std::vector<double> omega;
  std::vector<double> value;
};

using SpectralDensity = std::variant<FlatSpectralDensity, TabulatedSpectralDensity>;

double evaluate(const SpectralDensity& density, double omega);

/// One macroscopic reservoir before discretization.
struct ReservoirSpec {
  double temperature = 1.0;
  double chemical_potential = 0.0;
  SpectralDensity spectral_density = FlatSpectralDensity{};
  int mode_count = 1;
  int coupling_site = 0;
};

/// A discretized lead: per-mode energy, damping rate, coupling to the system
/// site and thermal occupation.
struct LeadSpec {
  std::vector<double> energy;
  std::vector<double> damping;
  std::vector<double> coupling;
  std::vector<double> occupation;

  std::size_t size() const { return energy.size(); }
};

/// 1 / (exp((energy - mu) / T) + 1). Throws std::invalid_argument for T <= 0.
double fermi_dirac(double energy, double temperature, double chemical_potential);

/// Linear mid-bin discretization of a flat band into l modes:
/// dw = 2 w_max / l, e_k = -w_max + (k - 1/2) dw, gamma_k = dw,
/// kappa_k = sqrt(J dw / 2 pi).
LeadSpec discretize_flat_lead(const ReservoirSpec& reservoir);

/// Same construction for either spectral-density kind. Tabulated densities
/// are binned over the span of their grid.
LeadSpec discretize_lead(const ReservoirSpec& reservoir);

/// Per-mode detection efficiencies for the absorption (+) and emission (-)
/// channels. Entries on system sites are ignored (those sites have no jumps).
struct EfficiencyMap {
  RealVector plus;
  RealVector minus;

  static EfficiencyMap uniform(Index dim, double plus, double minus);
  static EfficiencyMap perfect(Index dim) { return uniform(dim, 1.0, 1.0); }
  void validate(Index dim) const;
};

struct ReservoirParams {
  double temperature = 1.0;
  double chemical_potential = 0.0;
};

/// Central system plus all lead modes. Modes are ordered as (system sites,
/// lead 0 modes, lead 1 modes, ...). Immutable after construction and safe to
/// share across threads as long as the Hamiltonian generator is pure.
class ExtendedSystem {
 public:
  using Generator = std::function<Matrix(double)>;

  struct Layout {
    int system_sites = 0;
    RealVector damping;          // Gamma diagonal, zero on system sites
    RealVector occupation;       // f diagonal, zero on system sites
    RealVector mode_energy;      // lead-mode energies, zero on system sites
    std::vector<int> lead_of_mode;  // -1 on system sites
    std::vector<ReservoirParams> reservoirs;
  };

  ExtendedSystem(Layout layout, Generator hamiltonian, bool time_dependent);

  Index dim() const { return damping_.size(); }
  int system_sites() const { return layout_.system_sites; }
  int num_leads() const { return static_cast<int>(layout_.reservoirs.size()); }
  bool time_dependent() const { return time_dependent_; }

  /// Full single-particle Hamiltonian H(t).
  Matrix hamiltonian(double t) const;
  /// H(t) without copying when the system is static; otherwise fills
  /// `scratch` and returns it.
  const Matrix& hamiltonian(double t, Matrix& scratch) const;

  /// H_0 = H_S + H_L (everything except system-lead blocks).
  Matrix bare_hamiltonian(double t) const;
  /// H_int = H_SL (system-lead blocks only).
  Matrix interaction_hamiltonian(double t) const;

  const RealVector& damping() const { return damping_; }
  const RealVector& occupation() const { return layout_.occupation; }
  /// F = Gamma f.
  const RealVector& feed() const { return feed_; }
  const RealVector& mode_energy() const { return layout_.mode_energy; }

  int lead_of(Index mode) const { return layout_.lead_of_mode[static_cast<std::size_t>(mode)]; }
  bool is_system_site(Index mode) const { return lead_of(mode) < 0; }
  const std::vector<Index>& modes_of(int lead) const { return lead_modes_.at(static_cast<std::size_t>(lead)); }
  const ReservoirParams& reservoir(int lead) const { return layout_.reservoirs.at(static_cast<std::size_t>(lead)); }

  /// Diagonal matrices restricted to the modes of one lead.
  RealVector damping_of(int lead) const;
  RealVector feed_of(int lead) const;

  const EfficiencyMap& efficiency() const { return efficiency_; }
  void set_efficiency(EfficiencyMap efficiency);

 private:
  Layout layout_;
  Generator generator_;
  bool time_dependent_;
  RealVector damping_;
  RealVector feed_;
  std::vector<std::vector<Index>> lead_modes_;
  EfficiencyMap efficiency_;
  Matrix static_h_;
};

/// Central system description fed to `assemble`.
struct SystemSpec {
  int sites = 1;
  std::function<Matrix(double)> hamiltonian;  // sites x sites
  bool time_dependent = false;
  /// Global multiplier on all system-lead couplings; empty means 1.
  std::function<double(double)> coupling_scale;
};

/// Builds the extended system: system block, lead diagonals e_k, and coupling
/// kappa_k between each lead's coupling site and its modes.
ExtendedSystem assemble(const SystemSpec& system, const std::vector<ReservoirSpec>& reservoirs);

/// Convenience for the single dot: H_S = epsilon.
SystemSpec single_dot(double epsilon);

}  // namespace mesolead
