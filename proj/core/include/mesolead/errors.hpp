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
#include <stdexcept>
#include <string>

namespace mesolead {

/// The ODE integrator could not make progress (step size underflow or
/// non-finite state).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A jump was requested into a channel whose rate is numerically zero. This
/// signals rate bookkeeping bugs, never a legitimate trajectory.
class ImpossibleJumpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside one trajectory of an ensemble, tagged with its stream index.
class TrajectoryError : public std::runtime_error {
 public:
  TrajectoryError(std::uint64_t seed_index, double time, const std::string& what)
      : std::runtime_error("trajectory " + std::to_string(seed_index) + " failed at t=" +
                           std::to_string(time) + ": " + what),
        seed_index_(seed_index),
        time_(time) {}
  std::uint64_t seed_index() const noexcept { return seed_index_; }
  double time() const noexcept { return time_; }

 private:
  std::uint64_t seed_index_;
  double time_;
};

}  // namespace mesolead
