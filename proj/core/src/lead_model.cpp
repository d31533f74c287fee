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

#include "mesolead/lead_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mesolead {

namespace {

double interpolate(const TabulatedSpectralDensity& table, double omega) {
  const auto& x = table.omega;
  const auto& y = table.value;
  if (x.empty() || omega < x.front() || omega > x.back()) return 0.0;
  auto it = std::upper_bound(x.begin(), x.end(), omega);
  if (it == x.end()) return y.back();
  const auto hi = static_cast<std::size_t>(it - x.begin());
  if (hi == 0) return y.front();
  const std::size_t lo = hi - 1;
  const double w = (omega - x[lo]) / (x[hi] - x[lo]);
  return (1.0 - w) * y[lo] + w * y[hi];
}

void validate_reservoir(const ReservoirSpec& r) {
  if (!(r.temperature > 0.0)) throw std::invalid_argument("reservoir temperature must be positive");
  if (r.mode_count < 1) throw std::invalid_argument("reservoir needs at least one lead mode");
}

LeadSpec discretize_band(const ReservoirSpec& r, double lo, double hi) {
  LeadSpec lead;
  const auto l = static_cast<std::size_t>(r.mode_count);
  const double dw = (hi - lo) / static_cast<double>(l);
  lead.energy.resize(l);
  lead.damping.assign(l, dw);
  lead.coupling.resize(l);
  lead.occupation.resize(l);
  for (std::size_t k = 0; k < l; ++k) {
    const double e = lo + (static_cast<double>(k) + 0.5) * dw;
    lead.energy[k] = e;
    lead.coupling[k] = std::sqrt(evaluate(r.spectral_density, e) * dw / (2.0 * std::numbers::pi));
    lead.occupation[k] = fermi_dirac(e, r.temperature, r.chemical_potential);
  }
  return lead;
}

}  // namespace

double evaluate(const SpectralDensity& density, double omega) {
  if (const auto* flat = std::get_if<FlatSpectralDensity>(&density)) {
    return std::abs(omega) <= flat->omega_max ? flat->gamma : 0.0;
  }
  return interpolate(std::get<TabulatedSpectralDensity>(density), omega);
}

double fermi_dirac(double energy, double temperature, double chemical_potential) {
  if (!(temperature > 0.0)) throw std::invalid_argument("fermi_dirac: temperature must be positive");
  const double x = (energy - chemical_potential) / temperature;
  // exp(-|x|) never overflows
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

LeadSpec discretize_flat_lead(const ReservoirSpec& reservoir) {
  validate_reservoir(reservoir);
  const auto* flat = std::get_if<FlatSpectralDensity>(&reservoir.spectral_density);
  if (flat == nullptr) throw std::invalid_argument("discretize_flat_lead: spectral density is not flat");
  if (flat->gamma < 0.0) throw std::invalid_argument("flat spectral density needs gamma >= 0");
  if (!(flat->omega_max > 0.0)) throw std::invalid_argument("flat spectral density needs omega_max > 0");
  return discretize_band(reservoir, -flat->omega_max, flat->omega_max);
}

LeadSpec discretize_lead(const ReservoirSpec& reservoir) {
  if (std::holds_alternative<FlatSpectralDensity>(reservoir.spectral_density)) {
    return discretize_flat_lead(reservoir);
  }
  validate_reservoir(reservoir);
  const auto& table = std::get<TabulatedSpectralDensity>(reservoir.spectral_density);
  if (table.omega.size() < 2 || table.omega.size() != table.value.size()) {
    throw std::invalid_argument("tabulated spectral density needs >= 2 matching samples");
  }
  if (!std::is_sorted(table.omega.begin(), table.omega.end()) || table.omega.front() == table.omega.back()) {
    throw std::invalid_argument("tabulated spectral density grid must be ascending");
  }
  if (std::any_of(table.value.begin(), table.value.end(), [](double v) { return v < 0.0; })) {
    throw std::invalid_argument("tabulated spectral density must be nonnegative");
  }
  return discretize_band(reservoir, table.omega.front(), table.omega.back());
}

EfficiencyMap EfficiencyMap::uniform(Index dim, double plus, double minus) {
  EfficiencyMap map{RealVector::Constant(dim, plus), RealVector::Constant(dim, minus)};
  map.validate(dim);
  return map;
}

void EfficiencyMap::validate(Index dim) const {
  if (plus.size() != dim || minus.size() != dim) throw std::invalid_argument("efficiency map has wrong dimension");
  auto in_unit = [](const RealVector& v) { return v.size() == 0 || (v.minCoeff() >= 0.0 && v.maxCoeff() <= 1.0); };
  if (!in_unit(plus) || !in_unit(minus)) throw std::invalid_argument("efficiencies must lie in [0, 1]");
}

ExtendedSystem::ExtendedSystem(Layout layout, Generator hamiltonian, bool time_dependent)
    : layout_(std::move(layout)), generator_(std::move(hamiltonian)), time_dependent_(time_dependent) {
  const Index n = layout_.damping.size();
  if (layout_.occupation.size() != n || layout_.mode_energy.size() != n ||
      static_cast<Index>(layout_.lead_of_mode.size()) != n) {
    throw std::invalid_argument("extended system layout vectors disagree in size");
  }
  if (layout_.system_sites < 1 || layout_.system_sites > n) throw std::invalid_argument("invalid system size");
  if (!generator_) throw std::invalid_argument("extended system needs a Hamiltonian generator");

  damping_ = layout_.damping;
  lead_modes_.assign(layout_.reservoirs.size(), {});
  for (Index i = 0; i < n; ++i) {
    const int lead = layout_.lead_of_mode[static_cast<std::size_t>(i)];
    if (damping_(i) < 0.0) throw std::invalid_argument("damping rates must be nonnegative");
    const double f = layout_.occupation(i);
    if (f < 0.0 || f > 1.0) throw std::invalid_argument("occupations must lie in [0, 1]");
    if (lead < 0) {
      if (i >= layout_.system_sites) throw std::invalid_argument("system sites must come first");
      if (damping_(i) != 0.0 || f != 0.0) throw std::invalid_argument("system sites carry no damping");
    } else {
      if (i < layout_.system_sites) throw std::invalid_argument("lead mode inside system block");
      if (lead >= num_leads()) throw std::out_of_range("lead index out of range");
      if (!lead_modes_[static_cast<std::size_t>(lead)].empty() &&
          lead_modes_[static_cast<std::size_t>(lead)].back() != i - 1) {
        throw std::invalid_argument("lead modes must be contiguous");
      }
      lead_modes_[static_cast<std::size_t>(lead)].push_back(i);
    }
  }
  feed_ = damping_.cwiseProduct(layout_.occupation);
  efficiency_ = EfficiencyMap::perfect(n);

  const Matrix h0 = generator_(0.0);
  if (h0.rows() != n || h0.cols() != n) throw std::invalid_argument("Hamiltonian generator has wrong dimension");
  if (hermiticity_drift(h0) > 1e-12) throw std::invalid_argument("Hamiltonian is not Hermitian");
  if (!time_dependent_) static_h_ = h0;
}

Matrix ExtendedSystem::hamiltonian(double t) const { return time_dependent_ ? generator_(t) : static_h_; }

const Matrix& ExtendedSystem::hamiltonian(double t, Matrix& scratch) const {
  if (!time_dependent_) return static_h_;
  scratch = generator_(t);
  return scratch;
}

Matrix ExtendedSystem::interaction_hamiltonian(double t) const {
  Matrix h = hamiltonian(t);
  const Index n = dim();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (is_system_site(i) == is_system_site(j)) h(i, j) = 0.0;
  return h;
}

Matrix ExtendedSystem::bare_hamiltonian(double t) const { return hamiltonian(t) - interaction_hamiltonian(t); }

RealVector ExtendedSystem::damping_of(int lead) const {
  RealVector out = RealVector::Zero(dim());
  for (Index k : modes_of(lead)) out(k) = damping_(k);
  return out;
}

RealVector ExtendedSystem::feed_of(int lead) const {
  RealVector out = RealVector::Zero(dim());
  for (Index k : modes_of(lead)) out(k) = feed_(k);
  return out;
}

void ExtendedSystem::set_efficiency(EfficiencyMap efficiency) {
  efficiency.validate(dim());
  efficiency_ = std::move(efficiency);
}

ExtendedSystem assemble(const SystemSpec& system, const std::vector<ReservoirSpec>& reservoirs) {
  if (system.sites < 1) throw std::invalid_argument("system needs at least one site");
  if (!system.hamiltonian) throw std::invalid_argument("system Hamiltonian missing");

  std::vector<LeadSpec> leads;
  leads.reserve(reservoirs.size());
  Index total = system.sites;
  for (const auto& r : reservoirs) {
    if (r.coupling_site < 0 || r.coupling_site >= system.sites) {
      throw std::out_of_range("coupling site " + std::to_string(r.coupling_site) + " outside system");
    }
    leads.push_back(discretize_lead(r));
    total += static_cast<Index>(leads.back().size());
  }

  ExtendedSystem::Layout layout;
  layout.system_sites = system.sites;
  layout.damping = RealVector::Zero(total);
  layout.occupation = RealVector::Zero(total);
  layout.mode_energy = RealVector::Zero(total);
  layout.lead_of_mode.assign(static_cast<std::size_t>(total), -1);

  Matrix lead_diagonal = Matrix::Zero(total, total);
  Matrix coupling = Matrix::Zero(total, total);
  Index offset = system.sites;
  for (std::size_t a = 0; a < leads.size(); ++a) {
    const auto& lead = leads[a];
    const Index site = reservoirs[a].coupling_site;
    layout.reservoirs.push_back({reservoirs[a].temperature, reservoirs[a].chemical_potential});
    for (std::size_t k = 0; k < lead.size(); ++k) {
      const Index m = offset + static_cast<Index>(k);
      layout.damping(m) = lead.damping[k];
      layout.occupation(m) = lead.occupation[k];
      layout.mode_energy(m) = lead.energy[k];
      layout.lead_of_mode[static_cast<std::size_t>(m)] = static_cast<int>(a);
      lead_diagonal(m, m) = lead.energy[k];
      coupling(site, m) = lead.coupling[k];
      coupling(m, site) = lead.coupling[k];
    }
    offset += static_cast<Index>(lead.size());
  }

  const Index ns = system.sites;
  auto system_h = system.hamiltonian;
  auto scale = system.coupling_scale;
  auto generator = [ns, system_h, scale, lead_diagonal, coupling](double t) {
    Matrix h = lead_diagonal;
    const Matrix hs = system_h(t);
    if (hs.rows() != ns || hs.cols() != ns) throw std::invalid_argument("system Hamiltonian has wrong size");
    h.topLeftCorner(ns, ns) = hs;
    h += (scale ? scale(t) : 1.0) * coupling;
    return h;
  };
  const bool td = system.time_dependent || static_cast<bool>(system.coupling_scale);
  return ExtendedSystem(std::move(layout), std::move(generator), td);
}

SystemSpec single_dot(double epsilon) {
  SystemSpec spec;
  spec.sites = 1;
  spec.hamiltonian = [epsilon](double) { return Matrix::Constant(1, 1, Complex(epsilon, 0.0)); };
  return spec;
}

}  // namespace mesolead
