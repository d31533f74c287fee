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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mesolead/lead_model.hpp"
#include "mesolead/protocols.hpp"
#include "test_support.hpp"

namespace mesolead {
namespace {

TEST(FermiDirac, SymmetryPointAndClosedForm) {
  EXPECT_DOUBLE_EQ(fermi_dirac(0.3, 0.7, 0.3), 0.5);
  EXPECT_NEAR(fermi_dirac(1.5, 1.0, 0.5), 1.0 / (1.0 + std::numbers::e), 1e-15);
  EXPECT_NEAR(fermi_dirac(1.5, 1.0, 0.5), 0.268941, 1e-6);
  EXPECT_LT(fermi_dirac(50.0, 1.0, 0.0), 1e-21);
  EXPECT_GT(fermi_dirac(50.0, 1.0, 0.0), 0.0);
  EXPECT_NEAR(fermi_dirac(-800.0, 1.0, 0.0), 1.0, 1e-300);
  EXPECT_EQ(fermi_dirac(800.0, 1.0, 0.0), 0.0);
}

TEST(FermiDirac, MonotoneDecreasing) {
  double last = 1.0;
  for (double e = -5.0; e <= 5.0; e += 0.01) {
    const double f = fermi_dirac(e, 0.3, 0.1);
    EXPECT_LE(f, last);
    last = f;
  }
}

TEST(FermiDirac, RejectsNonpositiveTemperature) {
  EXPECT_THROW(fermi_dirac(0.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(fermi_dirac(0.0, -1.0, 0.0), std::invalid_argument);
}

ReservoirSpec flat(double gamma, double omega_max, int modes) {
  ReservoirSpec r;
  r.spectral_density = FlatSpectralDensity{gamma, omega_max};
  r.mode_count = modes;
  return r;
}

TEST(DiscretizeFlatLead, TwoModes) {
  const LeadSpec lead = discretize_flat_lead(flat(1.0, 1.0, 2));
  ASSERT_EQ(lead.size(), 2u);
  EXPECT_DOUBLE_EQ(lead.energy[0], -0.5);
  EXPECT_DOUBLE_EQ(lead.energy[1], 0.5);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_DOUBLE_EQ(lead.damping[k], 1.0);
    EXPECT_NEAR(lead.coupling[k], std::sqrt(1.0 / (2.0 * std::numbers::pi)), 1e-15);
  }
}

TEST(DiscretizeFlatLead, SpacingAndMidBinPlacement) {
  const LeadSpec lead = discretize_flat_lead(flat(0.125, 1.0, 10));
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_NEAR(lead.damping[k], 0.2, 1e-15);
    EXPECT_NEAR(lead.energy[k], -1.0 + (static_cast<double>(k) + 0.5) * 0.2, 1e-15);
  }
  for (std::size_t k = 0; k + 1 < 10; ++k) EXPECT_NEAR(lead.energy[k + 1] - lead.energy[k], 0.2, 1e-14);
}

TEST(DiscretizeFlatLead, DecoupledLead) {
  const LeadSpec lead = discretize_flat_lead(flat(0.0, 2.0, 7));
  for (double kappa : lead.coupling) EXPECT_EQ(kappa, 0.0);
}

TEST(DiscretizeFlatLead, CouplingSumRule) {
  for (int l : {10, 100}) {
    const double gamma = 0.3;
    const double omega_max = 1.7;
    const LeadSpec lead = discretize_flat_lead(flat(gamma, omega_max, l));
    double sum = 0.0;
    for (double kappa : lead.coupling) sum += kappa * kappa;
    const double integral = gamma * omega_max / std::numbers::pi;
    EXPECT_NEAR(sum, integral, integral / l);
  }
}

TEST(DiscretizeFlatLead, Errors) {
  EXPECT_THROW(discretize_flat_lead(flat(1.0, 1.0, 0)), std::invalid_argument);
  EXPECT_THROW(discretize_flat_lead(flat(-0.1, 1.0, 4)), std::invalid_argument);
  EXPECT_THROW(discretize_flat_lead(flat(1.0, 0.0, 4)), std::invalid_argument);
}

TEST(DiscretizeLead, TabulatedInterpolatesLinearly) {
  ReservoirSpec r;
  r.spectral_density = TabulatedSpectralDensity{{-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0}};
  r.mode_count = 4;
  const LeadSpec lead = discretize_lead(r);
  // Energies -0.75, -0.25, 0.25, 0.75; J = 0.5, 1.5, 1.5, 0.5.
  const double dw = 0.5;
  const double expected[] = {0.5, 1.5, 1.5, 0.5};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(lead.coupling[k], std::sqrt(expected[k] * dw / (2.0 * std::numbers::pi)), 1e-15);
  }
  r.spectral_density = TabulatedSpectralDensity{{0.0, -1.0}, {1.0, 1.0}};
  EXPECT_THROW(discretize_lead(r), std::invalid_argument);
  r.spectral_density = TabulatedSpectralDensity{{-1.0, 1.0}, {1.0, -1.0}};
  EXPECT_THROW(discretize_lead(r), std::invalid_argument);
}

TEST(Assemble, SmallestCase) {
  ReservoirSpec r = flat(1.0, 1.0, 1);
  const ExtendedSystem sys = assemble(single_dot(0.4), {r});
  ASSERT_EQ(sys.dim(), 2);
  const Matrix h = sys.hamiltonian(0.0);
  const double kappa = std::sqrt(2.0 / (2.0 * std::numbers::pi));
  EXPECT_NEAR(h(0, 0).real(), 0.4, 1e-15);
  EXPECT_NEAR(h(1, 1).real(), 0.0, 1e-15);
  EXPECT_NEAR(h(0, 1).real(), kappa, 1e-15);
  EXPECT_NEAR(h(1, 0).real(), kappa, 1e-15);
  EXPECT_EQ(sys.damping()(0), 0.0);
  EXPECT_TRUE(sys.is_system_site(0));
  EXPECT_EQ(sys.lead_of(1), 0);
}

TEST(Assemble, DecoupledIsBlockDiagonal) {
  const ExtendedSystem sys = assemble(single_dot(0.4), {flat(0.0, 1.0, 5)});
  const Matrix hi = sys.interaction_hamiltonian(0.0);
  EXPECT_EQ(max_abs(hi), 0.0);
  EXPECT_EQ(max_abs(sys.hamiltonian(0.0) - sys.bare_hamiltonian(0.0)), 0.0);
}

TEST(Assemble, BenchmarkLayout) {
  const ExtendedSystem sys = testing::benchmark_dot(10);
  ASSERT_EQ(sys.dim(), 11);
  EXPECT_EQ(sys.damping()(0), 0.0);
  for (Index k = 1; k < 11; ++k) EXPECT_NEAR(sys.damping()(k), 0.2, 1e-15);
  const Matrix h = sys.hamiltonian(0.0);
  EXPECT_LT(hermiticity_drift(h), 1e-12);
  EXPECT_EQ(max_abs(sys.bare_hamiltonian(0.0) + sys.interaction_hamiltonian(0.0) - h), 0.0);
  for (Index k = 0; k < 11; ++k) {
    EXPECT_GE(sys.feed()(k), 0.0);
    EXPECT_LE(sys.feed()(k), sys.damping()(k));
  }
}

TEST(Assemble, TwoLeadsOrderedBySite) {
  SystemSpec spec;
  spec.sites = 2;
  spec.hamiltonian = [](double) {
    Matrix h(2, 2);
    h << 0.1, 0.05, 0.05, -0.1;
    return h;
  };
  ReservoirSpec left = flat(0.2, 1.0, 3);
  ReservoirSpec right = flat(0.3, 1.0, 2);
  right.coupling_site = 1;
  right.temperature = 0.5;
  const ExtendedSystem sys = assemble(spec, {left, right});
  ASSERT_EQ(sys.dim(), 7);
  EXPECT_EQ(sys.num_leads(), 2);
  EXPECT_EQ(sys.modes_of(0), (std::vector<Index>{2, 3, 4}));
  EXPECT_EQ(sys.modes_of(1), (std::vector<Index>{5, 6}));
  const Matrix h = sys.hamiltonian(0.0);
  for (Index k : sys.modes_of(0)) {
    EXPECT_NE(h(0, k), Complex(0.0));
    EXPECT_EQ(h(1, k), Complex(0.0));
  }
  for (Index k : sys.modes_of(1)) {
    EXPECT_EQ(h(0, k), Complex(0.0));
    EXPECT_NE(h(1, k), Complex(0.0));
  }
  EXPECT_DOUBLE_EQ(sys.reservoir(1).temperature, 0.5);
}

TEST(Assemble, Errors) {
  ReservoirSpec r = flat(0.2, 1.0, 3);
  r.coupling_site = 1;
  EXPECT_THROW(assemble(single_dot(0.0), {r}), std::out_of_range);
  SystemSpec bad;
  bad.sites = 1;
  bad.hamiltonian = [](double) { return Matrix::Constant(1, 1, Complex(0.0, 1.0)); };
  EXPECT_THROW(assemble(bad, {flat(0.2, 1.0, 3)}), std::invalid_argument);
}

TEST(ExtendedSystem, RejectsBadLayouts) {
  auto h = [](double) { return Matrix::Zero(2, 2).eval(); };
  ExtendedSystem::Layout layout;
  layout.system_sites = 1;
  layout.damping = RealVector::Zero(2);
  layout.damping(1) = 1.0;
  layout.occupation = RealVector::Zero(2);
  layout.mode_energy = RealVector::Zero(2);
  layout.lead_of_mode = {-1, 0};
  layout.reservoirs = {ReservoirParams{}};
  EXPECT_NO_THROW(ExtendedSystem(layout, h, false));

  auto bad = layout;
  bad.occupation(1) = 1.5;
  EXPECT_THROW(ExtendedSystem(bad, h, false), std::invalid_argument);
  bad = layout;
  bad.damping(0) = 0.5;
  EXPECT_THROW(ExtendedSystem(bad, h, false), std::invalid_argument);
  bad = layout;
  bad.lead_of_mode = {0, -1};
  EXPECT_THROW(ExtendedSystem(bad, h, false), std::invalid_argument);
  bad = layout;
  bad.lead_of_mode = {-1, 3};
  EXPECT_THROW(ExtendedSystem(bad, h, false), std::out_of_range);
}

TEST(ExtendedSystem, EfficiencyValidation) {
  ExtendedSystem sys = testing::benchmark_dot(4);
  EXPECT_THROW(sys.set_efficiency(EfficiencyMap::uniform(6, 1.0, 1.0)), std::invalid_argument);
  EXPECT_THROW(EfficiencyMap::uniform(5, 1.2, 1.0), std::invalid_argument);
  sys.set_efficiency(EfficiencyMap::uniform(5, 0.5, 0.25));
  EXPECT_DOUBLE_EQ(sys.efficiency().minus(3), 0.25);
}

TEST(ErasureSystem, HermitianAlongProtocol) {
  ErasureProtocol p;
  p.tau = 20.0;
  p.epsilon_tau = 0.8;
  p.mu = -0.8;
  p.tau_eq = 5.0;
  const ExtendedSystem sys = make_erasure_system(p, testing::lead_params(0.1, 1.0, 6, 0.1, -0.8));
  EXPECT_TRUE(sys.time_dependent());
  for (double t = 0.0; t <= p.end(); t += 0.37) {
    const Matrix h = sys.hamiltonian(t);
    EXPECT_LT(hermiticity_drift(h), 1e-12);
    const ErasureDrive d = erasure_drive(t, p);
    EXPECT_NEAR(h(0, 0).real(), d.epsilon, 1e-14);
  }
  // Coupling vanishes at both ends of the drive.
  EXPECT_LT(max_abs(sys.interaction_hamiltonian(0.0)), 1e-15);
  EXPECT_LT(max_abs(sys.interaction_hamiltonian(p.tau)), 1e-12);
  EXPECT_LT(max_abs(sys.interaction_hamiltonian(p.tau + 1.0)), 1e-15);
}

}  // namespace
}  // namespace mesolead
