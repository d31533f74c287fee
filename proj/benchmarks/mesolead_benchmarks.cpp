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


#include <benchmark/benchmark.h>

#include "mesolead/gaussian.hpp"
#include "mesolead/protocols.hpp"
#include "mesolead/trajectory.hpp"
#include "mesolead/unconditional.hpp"

namespace mesolead {
namespace {

LeadParams lead(int modes) {
  LeadParams p;
  p.temperature = 1.0;
  p.mu = 0.0625;
  p.gamma = 0.125;
  p.modes = modes;
  return p;
}

void BM_NoJumpRhs(benchmark::State& state) {
  const ExtendedSystem sys = make_dot_system(0.25, lead(static_cast<int>(state.range(0))));
  const Matrix c = steady_state(sys);
  for (auto _ : state) benchmark::DoNotOptimize(no_jump_rhs(c, 0.0, sys));
}
BENCHMARK(BM_NoJumpRhs)->Arg(6)->Arg(10)->Arg(20)->Arg(40);

void BM_JumpUpdate(benchmark::State& state) {
  const ExtendedSystem sys = make_dot_system(0.25, lead(static_cast<int>(state.range(0))));
  const Matrix c = steady_state(sys);
  for (auto _ : state) benchmark::DoNotOptimize(jump_update(c, 1, Direction::Minus));
}
BENCHMARK(BM_JumpUpdate)->Arg(10)->Arg(40);

void BM_SteadyState(benchmark::State& state) {
  const ExtendedSystem sys = make_dot_system(0.25, lead(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(sys));
}
BENCHMARK(BM_SteadyState)->Arg(10)->Arg(40)->Arg(100);

void BM_LogOverlap(benchmark::State& state) {
  const ExtendedSystem sys = make_dot_system(0.25, lead(static_cast<int>(state.range(0))));
  const Matrix a = steady_state(sys);
  const Matrix b = evolve_to(erasure_initial_state(sys), 0.0, 5.0, sys);
  for (auto _ : state) benchmark::DoNotOptimize(log_overlap(a, b));
}
BENCHMARK(BM_LogOverlap)->Arg(10)->Arg(40);

void BM_Trajectory(benchmark::State& state) {
  const ExtendedSystem sys = make_dot_system(0.25, lead(static_cast<int>(state.range(0))));
  const Matrix c0 = steady_state(sys);
  TrajectoryOptions opts;
  opts.keep_record = false;
  const TrajectoryEngine engine(sys, opts);
  std::uint64_t i = 0;
  for (auto _ : state) {
    RandomStream rng(1, i++);
    benchmark::DoNotOptimize(engine.run(c0, 0.0, 50.0, rng, i));
  }
}
BENCHMARK(BM_Trajectory)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace mesolead

BENCHMARK_MAIN();
