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

#include "mesolead/gaussian.hpp"
#include "mesolead/oracle.hpp"
#include "mesolead/trajectory.hpp"
#include "mesolead/unconditional.hpp"
#include "reference_values.hpp"
#include "test_support.hpp"

namespace mesolead {
namespace {

using testing::diagonal;
using testing::random_covariance;

TEST(FockSpace, CanonicalAnticommutators) {
  const oracle::FockSpace space(3);
  ASSERT_EQ(space.dim(), 8);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      const Matrix cc = Matrix(space.annihilation(i) * space.annihilation(j) +
                               space.annihilation(j) * space.annihilation(i));
      const Matrix ccd = Matrix(space.annihilation(i) * space.creation(j) + space.creation(j) * space.annihilation(i));
      EXPECT_LT(cc.cwiseAbs().maxCoeff(), 1e-15);
      const Matrix expected = (i == j ? 1.0 : 0.0) * space.identity();
      EXPECT_LT((ccd - expected).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
  EXPECT_THROW(oracle::FockSpace(oracle::kMaxModes + 1), std::invalid_argument);
}

TEST(DenseCovariance, VacuumFullAndThermal) {
  const oracle::FockSpace space(2);
  Matrix vacuum = Matrix::Zero(4, 4);
  vacuum(0, 0) = 1.0;
  EXPECT_LT(max_abs(oracle::dense_covariance(space, vacuum)), 1e-15);
  Matrix full = Matrix::Zero(4, 4);
  full(3, 3) = 1.0;
  EXPECT_LT(max_abs(oracle::dense_covariance(space, full) - Matrix::Identity(2, 2)), 1e-15);
  const Matrix c = random_covariance(2, 9);
  EXPECT_LT(max_abs(oracle::dense_covariance(space, oracle::dense_state(space, c)) - c), 1e-12);
}

TEST(DenseState, GaussianPropertiesHold) {
  const oracle::FockSpace space(4);
  const Matrix rho = oracle::dense_state(space, random_covariance(4, 13));
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_LT(max_abs(rho - rho.adjoint()), 1e-14);
  EXPECT_GT(oracle::spectrum(rho).minCoeff(), 0.0);
  EXPECT_LT(oracle::wick_residual(space, rho), 1e-12);
  EXPECT_LT(oracle::purity_residual(space, rho), 1e-12);
}

TEST(Lindbladian, PreservesTraceAndHermiticity) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::Lindbladian lindblad(sys);
  const Matrix rho = oracle::dense_state(lindblad.space(), testing::small_dot_initial());
  const Matrix d = lindblad.apply(0.0, rho);
  EXPECT_LT(std::abs(d.trace()), 1e-13);
  EXPECT_LT(max_abs(d - d.adjoint()), 1e-13);
}

TEST(Lindbladian, NoJumpTraceLossIsChannelTotal) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::Lindbladian lindblad(sys);
  const Matrix rho = oracle::dense_state(lindblad.space(), testing::small_dot_initial());
  double total = 0.0;
  for (const Channel& ch : lindblad.channel_weights(rho)) total += ch.weight;
  EXPECT_NEAR(lindblad.apply_no_jump(0.0, rho).trace().real(), -total, 1e-13);
}

TEST(Lindbladian, CovarianceFollowsLyapunov) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::Lindbladian lindblad(sys);
  const Matrix c = testing::small_dot_initial();
  const Matrix rho = oracle::dense_state(lindblad.space(), c);
  const Matrix dc = oracle::dense_covariance(lindblad.space(), lindblad.apply(0.0, rho));
  EXPECT_LT(max_abs(dc - lyapunov_rhs(c, 0.0, sys)), 1e-12);
}

TEST(DenseEvolve, MatchesReferenceValues) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::Lindbladian lindblad(sys);
  const Matrix rho0 = oracle::dense_state(lindblad.space(), testing::small_dot_initial());
  const Matrix c1 = oracle::dense_covariance(lindblad.space(), oracle::evolve(rho0, 0.0, 1.0, sys, {1e-11, 1e-13}));
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      EXPECT_LT(std::abs(c1(i, j) - testing::reference::kEvolvedT1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]),
                1e-9);
}

TEST(DenseNoJump, SurvivalMatchesReference) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::FockSpace space(3);
  const Matrix rho0 = oracle::dense_state(space, testing::small_dot_initial());
  const oracle::DenseTrajectoryResult r = oracle::no_jump_evolve(rho0, 0.0, 1.0, sys);
  EXPECT_NEAR(std::exp(r.log_survival), testing::reference::kNoJumpSurvivalT1, 1e-9);
  EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-12);
  EXPECT_TRUE(r.record.empty());
}

TEST(DenseTrajectory, BlindDetectorRecordsNothing) {
  ExtendedSystem sys = testing::small_dot();
  sys.set_efficiency(EfficiencyMap::uniform(sys.dim(), 0.0, 0.0));
  const oracle::FockSpace space(3);
  const Matrix rho0 = oracle::dense_state(space, testing::small_dot_initial());
  RandomStream rng(3, 0);
  const oracle::DenseTrajectoryResult r = oracle::dense_trajectory(rho0, 0.0, 5.0, sys, rng);
  EXPECT_TRUE(r.record.empty());
  const Matrix expected = oracle::evolve(rho0, 0.0, 5.0, sys);
  EXPECT_LT(max_abs(r.rho - expected), 1e-8);
}

class WickChecker : public oracle::DenseObserver {
 public:
  explicit WickChecker(const oracle::FockSpace& space) : space_(space) {}
  void on_step(double, const Matrix& rho) override { worst = std::max(worst, oracle::wick_residual(space_, rho)); }
  void on_jump(const JumpEvent&, const Matrix& rho) override { on_step(0.0, rho); }
  double worst = 0.0;

 private:
  const oracle::FockSpace& space_;
};

TEST(DenseTrajectory, RecordsMatchCovarianceEngine) {
  const ExtendedSystem sys = testing::small_dot();
  const oracle::FockSpace space(3);
  const Matrix c0 = testing::small_dot_initial();
  const Matrix rho0 = oracle::dense_state(space, c0);
  const double t1 = 5.0 / 0.7;
  TrajectoryOptions topts;
  topts.ode = {1e-10, 1e-12};
  topts.crossing_tolerance = 1e-12;
  const TrajectoryEngine engine(sys, topts);
  std::size_t total_jumps = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomStream a(17, seed);
    RandomStream b(17, seed);
    const TrajectoryResult fast = engine.run(c0, 0.0, t1, a, seed);
    WickChecker wick(space);
    const oracle::DenseTrajectoryResult dense = oracle::dense_trajectory(rho0, 0.0, t1, sys, b, {}, &wick);
    ASSERT_EQ(fast.record.size(), dense.record.size()) << "seed " << seed;
    for (std::size_t i = 0; i < fast.record.size(); ++i) {
      EXPECT_EQ(fast.record[i].mode, dense.record[i].mode);
      EXPECT_EQ(fast.record[i].direction, dense.record[i].direction);
      EXPECT_NEAR(fast.record[i].time, dense.record[i].time, 1e-6);
    }
    EXPECT_LT(max_abs(fast.final_covariance - oracle::dense_covariance(space, dense.rho)), 1e-6);
    EXPECT_LT(wick.worst, 1e-8);
    EXPECT_EQ(a.draws(), b.draws());
    total_jumps += fast.jumps;
  }
  EXPECT_GT(total_jumps, 10u);
}

TEST(DenseHelpers, TraceFunctionals) {
  const oracle::FockSpace space(2);
  const Matrix rho = oracle::dense_state(space, diagonal({0.5, 0.5}));
  EXPECT_NEAR(oracle::trace_product(rho, rho), 0.25, 1e-14);
  EXPECT_NEAR(oracle::sqrt_overlap(rho, rho), 1.0, 1e-12);
  EXPECT_NEAR(oracle::trace_sqrt_product(rho, rho), 1.0, 1e-12);
  const Matrix s = oracle::psd_sqrt(rho);
  EXPECT_LT(max_abs(s * s - rho), 1e-14);
}

}  // namespace
}  // namespace mesolead
