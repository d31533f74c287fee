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
#include <vector>

#include "mesolead/gaussian.hpp"
#include "mesolead/lead_model.hpp"
#include "mesolead/ode.hpp"
#include "mesolead/rng.hpp"

namespace mesolead {

/// + : a particle enters lead mode k from its residual reservoir.
/// - : a particle leaves lead mode k into its residual reservoir.
enum class Direction : int { Plus = 1, Minus = -1 };

inline int sign(Direction d) { return static_cast<int>(d); }
inline char symbol(Direction d) { return d == Direction::Plus ? '+' : '-'; }

struct JumpEvent {
  double time = 0.0;
  Index mode = 0;
  Direction direction = Direction::Plus;

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

using MeasurementRecord = std::vector<JumpEvent>;

/// Conditional no-jump evolution with detection efficiencies:
/// -(V C + C V^dagger) + C B C + Cbar F(1 - L+) Cbar - C (Gamma - F)(1 - L-) C,
/// B = Gamma - 2F, V = iH + B/2, Cbar = 1 - C.
Matrix no_jump_rhs(const Matrix& c, double t, const ExtendedSystem& sys, const EfficiencyMap& efficiency);
Matrix no_jump_rhs(const Matrix& c, double t, const ExtendedSystem& sys);

/// K = Tr[L+ F Cbar] + Tr[L- (Gamma - F) C]; d(log p)/dt = -K.
double survival_decay_rate(const Matrix& c, const ExtendedSystem& sys, const EfficiencyMap& efficiency);
double survival_decay_rate(const Matrix& c, const ExtendedSystem& sys);

/// Post-jump covariance. Throws ImpossibleJumpError if the channel is blocked.
Matrix jump_update(const Matrix& c, Index mode, Direction direction, double eta = kSpectrumClamp);

struct Channel {
  Index mode = 0;
  Direction direction = Direction::Plus;
  double weight = 0.0;
};

/// Registered jump rates, ordered by ascending mode with + before -.
std::vector<Channel> channel_weights(const Matrix& c, const ExtendedSystem& sys, const EfficiencyMap& efficiency);

/// First channel whose normalized cumulative weight reaches r2.
Channel select_channel(const Matrix& c, const ExtendedSystem& sys, const EfficiencyMap& efficiency, double r2);

struct CurrentIncrements {
  double particles = 0.0;
  double energy = 0.0;
  double measurement_energy = 0.0;
};

/// Deterministic current rates per lead (drift plus undetected-channel terms).
std::vector<CurrentIncrements> current_drifts(const Matrix& c, double t, const ExtendedSystem& sys,
                                              const EfficiencyMap& efficiency);

/// Current increments carried by a detected jump, evaluated on the pre-jump
/// covariance. They belong to lead sys.lead_of(mode).
CurrentIncrements jump_increments(const Matrix& c, double t, const ExtendedSystem& sys, Index mode,
                                  Direction direction);

/// -sign(direction) (e_k - mu) / T for the reservoir attached to the mode.
double entropy_flux_increment(const JumpEvent& event, const ExtendedSystem& sys);

struct LeadTally {
  double particles = 0.0;
  double energy = 0.0;
  double measurement_energy = 0.0;
  double entropy_flux = 0.0;
  std::size_t jumps = 0;

  double heat(double chemical_potential) const { return energy - chemical_potential * particles; }
};

struct TrajectoryOptions {
  OdeOptions ode{1e-8, 1e-10};
  /// Times where the integrator must land exactly (protocol kinks).
  std::vector<double> breakpoints;
  /// Relative tolerance on the located jump time.
  double crossing_tolerance = 1e-10;
  bool keep_record = true;
};

class TrajectoryObserver {
 public:
  virtual ~TrajectoryObserver() = default;
  virtual void on_step(double /*t*/, const Matrix& /*c*/) {}
  virtual void on_jump(const JumpEvent& /*event*/, const Matrix& /*before*/, const Matrix& /*after*/) {}
};

struct TrajectoryResult {
  std::uint64_t seed_index = 0;
  MeasurementRecord record;
  std::size_t jumps = 0;
  std::vector<LeadTally> leads;
  Matrix final_covariance;
  double t_end = 0.0;
  long ode_steps = 0;

  double entropy_flux() const;
  double heat(const ExtendedSystem& sys) const;
  double measurement_entropy(const ExtendedSystem& sys) const;
};

struct WaitingTime {
  bool jumped = false;
  double time = 0.0;
  Matrix covariance;
};

/// Integrates (C, log p) from t0 until p = r1 or t_max.
WaitingTime sample_waiting_time(const ExtendedSystem& sys, const Matrix& c, double t0, double r1, double t_max,
                                const TrajectoryOptions& options = {});

/// Quantum-jump sampler. Holds a reference to the system; the system must
/// outlive the engine. `run` is const and may be called concurrently.
class TrajectoryEngine {
 public:
  explicit TrajectoryEngine(const ExtendedSystem& sys, TrajectoryOptions options = {});

  TrajectoryResult run(const Matrix& c0, double t0, double t1, RandomStream& rng, std::uint64_t seed_index = 0,
                       TrajectoryObserver* observer = nullptr) const;

  const ExtendedSystem& system() const { return sys_; }
  const TrajectoryOptions& options() const { return options_; }

 private:
  const ExtendedSystem& sys_;
  TrajectoryOptions options_;
};

}  // namespace mesolead
