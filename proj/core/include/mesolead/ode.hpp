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
#include <limits>

#include "mesolead/linalg.hpp"

namespace mesolead {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  /// Initial step; nonpositive selects one automatically.
  double first_step = 0.0;
  long max_steps = 50'000'000;
};

/// Explicit Dormand-Prince 5(4) integrator on complex state vectors with
/// elementwise max-norm error control and quartic dense output.
class DormandPrince {
 public:
  using Rhs = std::function<void(double t, const Vector& y, Vector& dydt)>;

  DormandPrince(Rhs rhs, OdeOptions options = {});

  /// Starts a new integration at (t0, y0). A positive `step_hint` replaces the
  /// automatic initial-step selection.
  void reset(double t0, const Vector& y0, double step_hint = 0.0);

  /// Takes one accepted adaptive step, never passing `t_bound`.
  /// Throws IntegrationError when the step size underflows.
  void step(double t_bound);

  /// Takes one step of exactly `h` without error control.
  void step_fixed(double h);

  /// Advances with adaptive steps until t == t_end.
  void integrate_to(double t_end);

  double t() const { return t_; }
  const Vector& y() const { return y_; }
  double t_prev() const { return t_prev_; }
  const Vector& y_prev() const { return y_prev_; }
  double step_size() const { return h_; }
  long steps_taken() const { return steps_; }
  long rhs_evaluations() const { return evaluations_; }

  /// Interpolant over the last accepted step, t in [t_prev, t].
  void dense(double t, Vector& out) const;
  Complex dense_component(double t, Index i) const;

 private:
  void evaluate(double t, const Vector& y, Vector& out);
  double error_norm(const Vector& y_new) const;
  void attempt(double h);
  void select_initial_step();

  Rhs rhs_;
  OdeOptions options_;
  double t_ = 0.0;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  double h_last_ = 0.0;
  long steps_ = 0;
  long evaluations_ = 0;
  Vector y_;
  Vector y_prev_;
  Vector y_new_;
  Vector f_;
  Vector scratch_;
  Vector stage_;
  Matrix k_;  // stages as columns
};

}  // namespace mesolead
