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

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mesolead/errors.hpp"
#include "mesolead/gaussian.hpp"
#include "mesolead/oracle.hpp"
#include "mesolead/protocols.hpp"
#include "mesolead/trajectory.hpp"
#include "mesolead/unconditional.hpp"
#include "reference_values.hpp"
#include "test_support.hpp"

namespace mesolead {
namespace {

using testing::diagonal;
namespace ref = testing::reference;

// Dot plus one decoupled lead mode at energy 0 with damping 2.
ExtendedSystem lone_mode(double mu, double lambda = 1.0) {
  LeadParams p = testing::lead_params(0.0, 1.0, 1, 1.0, mu);
  p.lambda_plus = lambda;
  p.lambda_minus = lambda;
  return make_dot_system(0.0, p);
}

ExtendedSystem with_efficiency(ExtendedSystem sys, double plus, double minus) {
  sys.set_efficiency(EfficiencyMap::uniform(sys.dim(), plus, minus));
  return sys;
}

// Written out directly from the conditional master equation.
Matrix riccati_reference(const Matrix& c, const ExtendedSystem& sys) {
  const Index n = sys.dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix gamma = sys.damping().cast<Complex>().asDiagonal();
  const Matrix feed = sys.feed().cast<Complex>().asDiagonal();
  const Matrix b = gamma - 2.0 * feed;
  const Matrix v = Complex(0.0, 1.0) * sys.hamiltonian(0.0) + 0.5 * b;
  const Matrix lp = (RealVector::Ones(n) - sys.efficiency().plus).cast<Complex>().asDiagonal();
  const Matrix lm = (RealVector::Ones(n) - sys.efficiency().minus).cast<Complex>().asDiagonal();
  const Matrix cbar = id - c;
  return -(v * c + c * v.adjoint()) + c * b * c + cbar * feed * lp * cbar - c * (gamma - feed) * lm * c;
}

TEST(NoJumpRhs, MatchesConditionalMasterEquation) {
  for (double plus : {1.0, 0.3, 0.0}) {
    for (double minus : {1.0, 0.6, 0.0}) {
      const ExtendedSystem sys = with_efficiency(testing::benchmark_dot(4), plus, minus);
      const Matrix c = testing::random_covariance(5, 17);
      EXPECT_LT(max_abs(no_jump_rhs(c, 0.0, sys) - riccati_reference(c, sys)), 1e-14);
    }
  }
}

TEST(NoJumpRhs, UnmonitoredIsLyapunov) {
  const ExtendedSystem sys = with_efficiency(testing::benchmark_dot(6), 0.0, 0.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix c = testing::random_covariance(7, seed);
    EXPECT_LT(max_abs(no_jump_rhs(c, 0.0, sys) - lyapunov_rhs(c, 0.0, sys)), 1e-14);
  }
}

TEST(NoJumpRhs, EmptyingModeClosedForm) {
  const ExtendedSystem sys = lone_mode(-60.0);
  const double gamma = sys.damping()(1);
  const double c0 = 0.8;
  const Matrix start = diagonal({0.0, c0});
  TrajectoryOptions opts;
  opts.ode = {1e-11, 1e-13};
  for (double t : {0.3, 1.0, 2.5}) {
    const WaitingTime w = sample_waiting_time(sys, start, 0.0, 1e-300, t, opts);
    ASSERT_FALSE(w.jumped);
    const double e = std::exp(-gamma * t);
    EXPECT_NEAR(w.covariance(1, 1).real(), c0 * e / (1.0 - c0 + c0 * e), 1e-9);
  }
}

TEST(NoJumpRhs, DenseReferencePropagation) {
  const ExtendedSystem sys = testing::small_dot();
  TrajectoryOptions opts;
  opts.ode = {1e-11, 1e-13};
  const WaitingTime survived = sample_waiting_time(sys, testing::small_dot_initial(), 0.0, 1e-300, 1.0, opts);
  ASSERT_FALSE(survived.jumped);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      EXPECT_LT(std::abs(survived.covariance(i, j) - ref::kNoJumpT1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]),
                1e-8);
  // Drawing R1 equal to the survival probability puts the jump at t = 1.
  const WaitingTime w = sample_waiting_time(sys, testing::small_dot_initial(), 0.0, ref::kNoJumpSurvivalT1, 5.0, opts);
  ASSERT_TRUE(w.jumped);
  EXPECT_NEAR(w.time, 1.0, 1e-8);
}

TEST(SurvivalDecayRate, SingleChannels) {
  const ExtendedSystem filling = lone_mode(60.0);
  EXPECT_NEAR(survival_decay_rate(diagonal({0.0, 0.0}), filling), filling.damping()(1), 1e-12);
  const ExtendedSystem emptying = lone_mode(-60.0);
  EXPECT_NEAR(survival_decay_rate(diagonal({0.0, 1.0}), emptying), emptying.damping()(1), 1e-12);
  const ExtendedSystem blind = lone_mode(0.0, 0.0);
  EXPECT_EQ(survival_decay_rate(diagonal({0.3, 0.6}), blind), 0.0);
  const ExtendedSystem sys = testing::benchmark_dot(5);
  EXPECT_GE(survival_decay_rate(testing::random_covariance(6, 3), sys), 0.0);
}

TEST(JumpUpdate, DiagonalAbsorption) {
  const Matrix c = diagonal({0.3, 0.6, 0.2});
  const Matrix after = jump_update(c, 1, Direction::Plus);
  EXPECT_NEAR(after(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(after(0, 0).real(), 0.3, 1e-15);
  EXPECT_NEAR(after(2, 2).real(), 0.2, 1e-15);
  EXPECT_NEAR(max_abs(after - diagonal({0.3, 1.0, 0.2})), 0.0, 1e-15);
}

TEST(JumpUpdate, EmissionThenAbsorption) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix c = testing::random_covariance(4, seed);
    const Matrix emptied = jump_update(c, 2, Direction::Minus);
    EXPECT_LT(std::abs(emptied(2, 2)), 1e-10);
    const Matrix refilled = jump_update(emptied, 2, Direction::Plus);
    EXPECT_LT(std::abs(refilled(2, 2) - 1.0), 1e-10);
    for (const Matrix& m : {emptied, refilled}) {
      const RealVector l = eigenbasis(m).values;
      EXPECT_GT(l.minCoeff(), -1e-10);
      EXPECT_LT(l.maxCoeff(), 1.0 + 1e-10);
      EXPECT_LT(hermiticity_drift(m), 1e-15);
    }
  }
}

TEST(JumpUpdate, MatchesDenseCollapse) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::Lindbladian lindblad(sys);
  const oracle::FockSpace& space = lindblad.space();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix c = testing::random_covariance(3, seed);
    const Matrix rho = oracle::dense_state(space, c);
    for (Index k : {Index{1}, Index{2}}) {
      for (Direction d : {Direction::Plus, Direction::Minus}) {
        const Matrix dense = oracle::dense_covariance(space, lindblad.jump(rho, k, d));
        EXPECT_LT(max_abs(jump_update(c, k, d) - dense), 1e-10);
      }
    }
  }
}

TEST(JumpUpdate, ImpossibleJumps) {
  EXPECT_THROW(jump_update(diagonal({0.5, 1.0}), 1, Direction::Plus), ImpossibleJumpError);
  EXPECT_THROW(jump_update(diagonal({0.5, 0.0}), 1, Direction::Minus), ImpossibleJumpError);
  EXPECT_THROW(jump_update(diagonal({0.5, 0.5}), 2, Direction::Minus), std::out_of_range);
}

TEST(WaitingTime, ExponentialForPureEmission) {
  const ExtendedSystem sys = lone_mode(-60.0);
  const double gamma = sys.damping()(1);
  for (double r1 : {0.9, 0.5, 0.1, 1e-3}) {
    const WaitingTime w = sample_waiting_time(sys, diagonal({0.0, 1.0}), 0.25, r1, 100.0);
    ASSERT_TRUE(w.jumped);
    EXPECT_NEAR(w.time, 0.25 - std::log(r1) / gamma, 1e-9);
  }
}

TEST(WaitingTime, BlindDetectorSurvives) {
  const ExtendedSystem sys = with_efficiency(testing::benchmark_dot(4), 0.0, 0.0);
  const WaitingTime w = sample_waiting_time(sys, testing::random_covariance(5, 1), 0.0, 0.999999, 50.0);
  EXPECT_FALSE(w.jumped);
  EXPECT_DOUBLE_EQ(w.time, 50.0);
  EXPECT_THROW(sample_waiting_time(sys, testing::random_covariance(5, 1), 0.0, 1.0, 50.0), std::invalid_argument);
}

struct FirstJump {
  double time;
};

class StopAtFirstJump : public oracle::DenseObserver {
 public:
  void on_jump(const JumpEvent& event, const Matrix&) override { throw FirstJump{event.time}; }
};

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

TEST(WaitingTime, DistributionMatchesDenseEngine) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::FockSpace space(3);
  const Matrix c0 = testing::small_dot_initial();
  const Matrix rho0 = oracle::dense_state(space, c0);
  constexpr int kSamples = 5000;
  constexpr double kHorizon = 60.0;
  std::vector<double> engine;
  std::vector<double> dense;
  oracle::DenseTrajectoryOptions dopts;
  dopts.ode = {1e-8, 1e-10};
  dopts.crossing_tolerance = 1e-10;
  for (int i = 0; i < kSamples; ++i) {
    RandomStream a(101, static_cast<std::uint64_t>(i));
    const WaitingTime w = sample_waiting_time(sys, c0, 0.0, a.uniform(), kHorizon);
    ASSERT_TRUE(w.jumped);
    engine.push_back(w.time);
    RandomStream b(202, static_cast<std::uint64_t>(i));
    StopAtFirstJump stop;
    try {
      oracle::dense_trajectory(rho0, 0.0, kHorizon, sys, b, dopts, &stop);
      FAIL() << "dense trajectory survived the horizon";
    } catch (const FirstJump& j) {
      dense.push_back(j.time);
    }
  }
  const double critical = 1.628 * std::sqrt(2.0 / kSamples);
  EXPECT_LT(ks_statistic(engine, dense), critical);
}

TEST(SelectChannel, SingleOpenChannel) {
  const ExtendedSystem sys = lone_mode(-60.0);
  for (double r2 : {1e-9, 0.5, 0.999999}) {
    const Channel ch = select_channel(diagonal({0.3, 1.0}), sys, sys.efficiency(), r2);
    EXPECT_EQ(ch.mode, 1);
    EXPECT_EQ(ch.direction, Direction::Minus);
  }
  const ExtendedSystem blind = with_efficiency(sys, 0.0, 0.0);
  EXPECT_THROW(select_channel(diagonal({0.3, 0.5}), blind, blind.efficiency(), 0.5), ImpossibleJumpError);
  EXPECT_THROW(select_channel(diagonal({0.3, 1.0}), sys, sys.efficiency(), 1.0), std::invalid_argument);
}

TEST(SelectChannel, SymmetricTieGoesToFirst) {
  // Lead mode at the chemical potential, half filled: both channels weigh the same.
  const ExtendedSystem sys = lone_mode(0.0);
  const Matrix c = diagonal({0.0, 0.5});
  EXPECT_EQ(select_channel(c, sys, sys.efficiency(), 0.5).direction, Direction::Plus);
  EXPECT_EQ(select_channel(c, sys, sys.efficiency(), 0.5000001).direction, Direction::Minus);
  EXPECT_EQ(select_channel(c, sys, sys.efficiency(), 0.1).direction, Direction::Plus);
}

TEST(SelectChannel, FrequenciesFollowWeights) {
  const ExtendedSystem sys = testing::benchmark_dot(3);
  const Matrix c = testing::random_covariance(4, 12);
  const auto weights = channel_weights(c, sys, sys.efficiency());
  double total = 0.0;
  for (const auto& w : weights) total += w.weight;
  std::map<std::pair<Index, int>, int> counts;
  constexpr int kDraws = 10000;
  RandomStream rng(5, 0);
  for (int i = 0; i < kDraws; ++i) {
    const Channel ch = select_channel(c, sys, sys.efficiency(), rng.uniform());
    ++counts[{ch.mode, sign(ch.direction)}];
  }
  for (const auto& w : weights) {
    const double p = w.weight / total;
    const double sigma = std::sqrt(kDraws * p * (1.0 - p));
    EXPECT_NEAR((counts[{w.mode, sign(w.direction)}]), kDraws * p, 3.0 * sigma + 1.0);
  }
}

TEST(Increments, DiagonalJumps) {
  const ExtendedSystem sys = make_dot_system(0.1, testing::lead_params(0.0, 1.0, 2, 1.0, 0.0));
  const Matrix c = diagonal({0.4, 0.3, 0.8});
  const double e1 = sys.mode_energy()(1);
  const CurrentIncrements plus = jump_increments(c, 0.0, sys, 1, Direction::Plus);
  EXPECT_NEAR(plus.particles, 0.7, 1e-15);
  EXPECT_NEAR(plus.energy, 0.7 * e1, 1e-15);
  const CurrentIncrements minus = jump_increments(c, 0.0, sys, 2, Direction::Minus);
  EXPECT_NEAR(minus.particles, -0.8, 1e-15);
  EXPECT_NEAR(minus.energy, -0.8 * sys.mode_energy()(2), 1e-15);
  // Each increment is the jump's change of N and of <H>.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ExtendedSystem coupled = testing::benchmark_dot(2);
    const Matrix r = testing::random_covariance(3, seed);
    const Matrix hc = coupled.hamiltonian(0.0);
    for (Direction d : {Direction::Plus, Direction::Minus}) {
      const Matrix after = jump_update(r, 2, d);
      const CurrentIncrements inc = jump_increments(r, 0.0, coupled, 2, d);
      EXPECT_NEAR(inc.particles, (after - r).trace().real(), 1e-12);
      EXPECT_NEAR(inc.energy, (hc * (after - r)).trace().real(), 1e-12);
    }
  }
  EXPECT_THROW(jump_increments(c, 0.0, sys, 0, Direction::Plus), std::invalid_argument);
}

TEST(Increments, StationaryThermalLeadHasNoDrift) {
  const ExtendedSystem sys = with_efficiency(make_dot_system(0.1, testing::lead_params(0.0, 1.0, 3, 0.7, 0.2)), 0.0, 0.0);
  Matrix c = diagonal({0.5, 0.0, 0.0, 0.0});
  for (Index k = 1; k < 4; ++k) c(k, k) = sys.occupation()(k);
  const auto drift = current_drifts(c, 0.0, sys, sys.efficiency());
  EXPECT_NEAR(drift[0].particles, 0.0, 1e-15);
  EXPECT_NEAR(drift[0].energy, 0.0, 1e-15);
  EXPECT_NEAR(drift[0].measurement_energy, 0.0, 1e-15);
}

TEST(Increments, MeasurementEnergyWithoutCoupling) {
  const ExtendedSystem sys = make_dot_system(0.1, testing::lead_params(0.0, 1.0, 3, 0.7, 0.2));
  const Matrix c = testing::random_covariance(4, 21);
  const auto drift = current_drifts(c, 0.0, sys, sys.efficiency());
  EXPECT_NEAR(drift[0].measurement_energy, drift[0].energy, 1e-14);
}

// drift + sum over channels of rate * increment must equal the unconditional
// current for every state and every efficiency.
TEST(Increments, ItoIdentityHoldsExactly) {
  for (double plus : {1.0, 0.4, 0.0}) {
    for (double minus : {1.0, 0.7, 0.0}) {
      const ExtendedSystem sys = with_efficiency(testing::benchmark_dot(5), plus, minus);
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Matrix c = testing::random_covariance(6, seed);
        CurrentIncrements total = current_drifts(c, 0.0, sys, sys.efficiency())[0];
        for (const Channel& ch : channel_weights(c, sys, sys.efficiency())) {
          if (ch.weight <= 0.0) continue;
          const CurrentIncrements inc = jump_increments(c, 0.0, sys, ch.mode, ch.direction);
          total.particles += ch.weight * inc.particles;
          total.energy += ch.weight * inc.energy;
          total.measurement_energy += ch.weight * inc.measurement_energy;
        }
        EXPECT_NEAR(total.particles, avg_particle_current(c, sys, 0), 1e-13);
        EXPECT_NEAR(total.energy, avg_energy_current(c, sys, 0), 1e-13);
        EXPECT_NEAR(total.measurement_energy, avg_measurement_energy_current(c, sys), 1e-13);
        // The Riccati flow plus jumps reproduces the Lyapunov flow.
        Matrix dc = no_jump_rhs(c, 0.0, sys);
        for (const Channel& ch : channel_weights(c, sys, sys.efficiency())) {
          if (ch.weight > 0.0) dc += ch.weight * (jump_update(c, ch.mode, ch.direction) - c);
        }
        EXPECT_LT(max_abs(dc - lyapunov_rhs(c, 0.0, sys)), 1e-13);
      }
    }
  }
}

TEST(EntropyFlux, Conventions) {
  const ExtendedSystem sys = make_dot_system(0.0, testing::lead_params(0.1, 1.0, 4, 0.5, 0.25));
  // Mode energies are -0.75, -0.25, 0.25, 0.75.
  EXPECT_NEAR(entropy_flux_increment({0.0, 3, Direction::Minus}, sys), 0.0, 1e-15);
  EXPECT_NEAR(entropy_flux_increment({0.0, 4, Direction::Minus}, sys), 1.0, 1e-15);
  EXPECT_NEAR(entropy_flux_increment({0.0, 4, Direction::Plus}, sys), -1.0, 1e-15);
  EXPECT_THROW(entropy_flux_increment({0.0, 0, Direction::Plus}, sys), std::invalid_argument);
  EXPECT_THROW(entropy_flux_increment({0.0, 9, Direction::Plus}, sys), std::out_of_range);
}

TEST(EntropyFlux, LocalDetailedBalance) {
  const ExtendedSystem sys = make_dot_system(0.0, testing::lead_params(0.1, 1.0, 6, 0.5, 0.1));
  Matrix c = Matrix::Identity(7, 7) * 0.5;
  const auto weights = channel_weights(c, sys, sys.efficiency());
  for (std::size_t i = 0; i < weights.size(); i += 2) {
    const Index k = weights[i].mode;
    const double f = sys.occupation()(k);
    EXPECT_NEAR(weights[i].weight / weights[i + 1].weight, f / (1.0 - f), 1e-12);
    EXPECT_NEAR(std::log(weights[i].weight / weights[i + 1].weight),
                entropy_flux_increment({0.0, k, Direction::Plus}, sys), 1e-12);
  }
}

class StepRecorder : public TrajectoryObserver {
 public:
  void on_step(double t, const Matrix& c) override {
    times.push_back(t);
    const RealVector l = eigenbasis(c).values;
    min_eig = std::min(min_eig, l.minCoeff());
    max_eig = std::max(max_eig, l.maxCoeff());
  }
  void on_jump(const JumpEvent& e, const Matrix& before, const Matrix& after) override {
    const double target = e.direction == Direction::Plus ? 1.0 : 0.0;
    pin_error = std::max(pin_error, std::abs(after(e.mode, e.mode) - target));
    energy_jumps += (h * (after - before)).trace().real();
    ++jumps;
  }
  Matrix h;
  std::vector<double> times;
  double min_eig = 1.0;
  double max_eig = 0.0;
  double pin_error = 0.0;
  double energy_jumps = 0.0;
  int jumps = 0;
};

TEST(Trajectory, InvariantsAlongRun) {
  const ExtendedSystem sys = testing::benchmark_dot(6);
  const Matrix c0 = steady_state(sys);
  const TrajectoryEngine engine(sys);
  for (std::uint64_t i = 0; i < 5; ++i) {
    RandomStream rng(9, i);
    StepRecorder rec;
    rec.h = sys.hamiltonian(0.0);
    const TrajectoryResult r = engine.run(c0, 0.0, 100.0, rng, i, &rec);
    EXPECT_GT(rec.jumps, 10);
    EXPECT_EQ(static_cast<std::size_t>(rec.jumps), r.record.size());
    EXPECT_LT(rec.pin_error, 1e-10);
    EXPECT_GT(rec.min_eig, -1e-7);
    EXPECT_LT(rec.max_eig, 1.0 + 1e-7);
    // Energy and particle balance along the whole record.
    const Matrix h = sys.hamiltonian(0.0);
    EXPECT_NEAR(r.leads[0].energy, (h * (r.final_covariance - c0)).trace().real(), 1e-6);
    EXPECT_NEAR(r.leads[0].particles, (r.final_covariance - c0).trace().real(), 1e-6);
    EXPECT_NEAR(r.leads[0].heat(0.0625), r.leads[0].energy - 0.0625 * r.leads[0].particles, 1e-12);
    EXPECT_NEAR(r.heat(sys), r.leads[0].heat(0.0625), 1e-12);
    double flux = 0.0;
    for (const JumpEvent& e : r.record) {
      EXPECT_GE(e.time, 0.0);
      EXPECT_LE(e.time, 100.0);
      EXPECT_FALSE(sys.is_system_site(e.mode));
      flux += entropy_flux_increment(e, sys);
    }
    EXPECT_NEAR(r.entropy_flux(), flux, 1e-10);
    EXPECT_DOUBLE_EQ(r.t_end, 100.0);
  }
}

TEST(Trajectory, NoJumpSegmentsConserveEnergyBookkeeping) {
  const ExtendedSystem sys = testing::benchmark_dot(4);
  const Matrix c0 = testing::random_covariance(5, 4);
  TrajectoryOptions opts;
  opts.ode = {1e-10, 1e-12};
  const TrajectoryEngine engine(sys, opts);
  RandomStream rng(3, 3);
  StepRecorder rec;
  rec.h = sys.hamiltonian(0.0);
  const TrajectoryResult r = engine.run(c0, 0.0, 40.0, rng, 3, &rec);
  const Matrix h = sys.hamiltonian(0.0);
  const double total = (h * (r.final_covariance - c0)).trace().real();
  EXPECT_NEAR(r.leads[0].energy, total, 1e-8);
  EXPECT_GT(rec.jumps, 0);
}

TEST(Trajectory, BlindDetectorFollowsUnconditionalFlow) {
  const ExtendedSystem sys = with_efficiency(testing::benchmark_dot(5), 0.0, 0.0);
  const Matrix c0 = testing::random_covariance(6, 8);
  TrajectoryOptions opts;
  opts.ode = {1e-10, 1e-12};
  const TrajectoryEngine engine(sys, opts);
  RandomStream rng(1, 0);
  const TrajectoryResult r = engine.run(c0, 0.0, 30.0, rng);
  EXPECT_TRUE(r.record.empty());
  EXPECT_LT(max_abs(r.final_covariance - evolve_to(c0, 0.0, 30.0, sys, {1e-10, 1e-12})), 1e-8);
  const UnconditionalIntegrals u = integrate_currents(c0, 0.0, 30.0, sys, {1e-10, 1e-12});
  EXPECT_NEAR(r.leads[0].particles, u.leads[0].particles, 1e-8);
  EXPECT_NEAR(r.leads[0].energy, u.leads[0].energy, 1e-8);
  EXPECT_NEAR(r.leads[0].measurement_energy, u.leads[0].measurement_energy, 1e-8);
}

TEST(Trajectory, SeedDeterminism) {
  const ExtendedSystem sys = testing::benchmark_dot(4);
  const Matrix c0 = steady_state(sys);
  const TrajectoryEngine engine(sys);
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  const TrajectoryResult ra = engine.run(c0, 0.0, 50.0, a, 7);
  const TrajectoryResult rb = engine.run(c0, 0.0, 50.0, b, 7);
  EXPECT_EQ(ra.record, rb.record);
  EXPECT_EQ(ra.leads[0].energy, rb.leads[0].energy);
  EXPECT_EQ(a.draws(), 1 + 2 * ra.record.size());
  RandomStream c(42, 8);
  EXPECT_NE(engine.run(c0, 0.0, 50.0, c, 8).record, ra.record);
}

TEST(Trajectory, LandsOnBreakpoints) {
  ErasureProtocol p;
  p.tau = 10.0;
  p.epsilon_tau = 0.8;
  p.mu = -0.8;
  p.tau_eq = 5.0;
  const ExtendedSystem sys = make_erasure_system(p, testing::lead_params(0.1, 1.0, 4, 0.1, -0.8));
  TrajectoryOptions opts;
  opts.breakpoints = {p.tau};
  const TrajectoryEngine engine(sys, opts);
  RandomStream rng(1, 1);
  StepRecorder rec;
  rec.h = sys.hamiltonian(0.0);
  engine.run(erasure_initial_state(sys), 0.0, p.end(), rng, 1, &rec);
  EXPECT_NE(std::find(rec.times.begin(), rec.times.end(), p.tau), rec.times.end());
}

TEST(Trajectory, ErrorsCarryContext) {
  const ExtendedSystem sys = testing::benchmark_dot(3);
  const TrajectoryEngine engine(sys);
  RandomStream rng(1, 0);
  EXPECT_THROW(engine.run(Matrix::Zero(2, 2), 0.0, 1.0, rng), std::invalid_argument);
  EXPECT_THROW(engine.run(testing::random_covariance(4, 1), 1.0, 0.0, rng), std::invalid_argument);
  Matrix bad = testing::random_covariance(4, 1);
  bad(0, 1) += 0.1;
  EXPECT_THROW(engine.run(bad, 0.0, 1.0, rng, 17), std::invalid_argument);
}

}  // namespace
}  // namespace mesolead
