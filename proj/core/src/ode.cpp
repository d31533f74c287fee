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

#include "mesolead/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mesolead/errors.hpp"

namespace mesolead {

namespace {

constexpr std::array<double, 6> kC{1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr std::array<std::array<double, 5>, 5> kA{{
    {1.0 / 5, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
}};
constexpr std::array<double, 6> kB{35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
// fifth-order minus embedded fourth-order weights, including the FSAL stage
constexpr std::array<double, 7> kE{-71.0 / 57600, 0, 71.0 / 16695, -71.0 / 1920, 17253.0 / 339200, -22.0 / 525,
                                   1.0 / 40};
constexpr std::array<std::array<double, 4>, 7> kP{{
    {1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432},
    {0, 0, 0, 0},
    {0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799},
    {0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072},
    {0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632},
    {0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844},
    {0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423},
}};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

std::array<double, 7> dense_weights(double theta) {
  std::array<double, 7> w{};
  const std::array<double, 4> powers{theta, theta * theta, theta * theta * theta, theta * theta * theta * theta};
  for (std::size_t j = 0; j < 7; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < 4; ++r) acc += kP[j][r] * powers[r];
    w[j] = acc;
  }
  return w;
}

// std::abs on complex goes through hypot, which is slow
inline double magnitude(const Complex& z) { return std::sqrt(std::norm(z)); }

}  // namespace

DormandPrince::DormandPrince(Rhs rhs, OdeOptions options) : rhs_(std::move(rhs)), options_(options) {
  if (!rhs_) throw std::invalid_argument("DormandPrince: empty right-hand side");
  if (!(options_.rtol > 0.0) || !(options_.atol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (!(options_.max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
}

void DormandPrince::evaluate(double t, const Vector& y, Vector& out) {
  rhs_(t, y, out);
  ++evaluations_;
}

void DormandPrince::reset(double t0, const Vector& y0, double step_hint) {
  const Index n = y0.size();
  t_ = t_prev_ = t0;
  y_ = y0;
  y_prev_ = y0;
  if (k_.rows() != n) {
    k_.resize(n, 7);
    y_new_.resize(n);
    scratch_.resize(n);
    stage_.resize(n);
    f_.resize(n);
  }
  evaluate(t_, y_, f_);
  h_last_ = 0.0;
  if (step_hint > 0.0) {
    h_ = std::min(step_hint, options_.max_step);
  } else if (options_.first_step > 0.0) {
    h_ = std::min(options_.first_step, options_.max_step);
  } else {
    select_initial_step();
  }
}

void DormandPrince::select_initial_step() {
  double d0 = 0.0;
  double d1 = 0.0;
  for (Index i = 0; i < y_.size(); ++i) {
    const double scale = options_.atol + magnitude(y_(i)) * options_.rtol;
    d0 = std::max(d0, magnitude(y_(i)) / scale);
    d1 = std::max(d1, magnitude(f_(i)) / scale);
  }
  const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  scratch_ = y_ + h0 * f_;
  Vector f1(y_.size());
  evaluate(t_ + h0, scratch_, f1);
  double d2 = 0.0;
  for (Index i = 0; i < y_.size(); ++i) {
    const double scale = options_.atol + magnitude(y_(i)) * options_.rtol;
    d2 = std::max(d2, magnitude(f1(i) - f_(i)) / scale);
  }
  d2 /= h0;
  const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
  h_ = std::min({100.0 * h0, h1, options_.max_step});
}

void DormandPrince::attempt(double h) {
  k_.col(0) = f_;
  for (std::size_t s = 0; s < 5; ++s) {
    scratch_ = y_;
    for (std::size_t j = 0; j <= s; ++j) {
      if (kA[s][j] != 0.0) scratch_.noalias() += (h * kA[s][j]) * k_.col(static_cast<Index>(j));
    }
    evaluate(t_ + kC[s] * h, scratch_, stage_);
    k_.col(static_cast<Index>(s + 1)) = stage_;
  }
  y_new_ = y_;
  for (std::size_t j = 0; j < 6; ++j) {
    if (kB[j] != 0.0) y_new_.noalias() += (h * kB[j]) * k_.col(static_cast<Index>(j));
  }
  evaluate(t_ + h, y_new_, stage_);
  k_.col(6) = stage_;
}

double DormandPrince::error_norm(const Vector& y_new) const {
  double norm = 0.0;
  for (Index i = 0; i < y_.size(); ++i) {
    Complex err{0.0, 0.0};
    for (Index j = 0; j < 7; ++j) err += kE[static_cast<std::size_t>(j)] * k_(i, j);
    const double scale = options_.atol + options_.rtol * std::max(magnitude(y_(i)), magnitude(y_new(i)));
    norm = std::max(norm, magnitude(err) * h_last_ / scale);
  }
  return norm;
}

void DormandPrince::step(double t_bound) {
  if (t_bound <= t_) throw std::invalid_argument("DormandPrince::step: bound not ahead of current time");
  const double min_step = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_));
  double h = std::min({h_, options_.max_step, t_bound - t_});
  for (;;) {
    if (h < min_step) throw IntegrationError("step size underflow", t_);
    attempt(h);
    h_last_ = h;
    const double err = error_norm(y_new_);
    if (err <= 1.0) {
      const double factor = err == 0.0 ? kMaxFactor : std::min(kMaxFactor, kSafety * std::pow(err, -0.2));
      t_prev_ = t_;
      y_prev_.swap(y_);
      y_.swap(y_new_);
      t_ = (t_bound - (t_ + h) <= min_step) ? t_bound : t_ + h;
      f_ = k_.col(6);
      h_ = std::max(h * factor, min_step);
      ++steps_;
      if (steps_ > options_.max_steps) throw IntegrationError("step budget exhausted", t_);
      return;
    }
    h *= std::max(kMinFactor, kSafety * std::pow(err, -0.2));
  }
}

void DormandPrince::step_fixed(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step_fixed: step must be positive");
  attempt(h);
  h_last_ = h;
  t_prev_ = t_;
  y_prev_.swap(y_);
  y_.swap(y_new_);
  t_ += h;
  f_ = k_.col(6);
  ++steps_;
}

void DormandPrince::integrate_to(double t_end) {
  while (t_ < t_end) step(t_end);
}

void DormandPrince::dense(double t, Vector& out) const {
  const double h = t_ - t_prev_;
  if (h <= 0.0) {
    out = y_;
    return;
  }
  const auto w = dense_weights((t - t_prev_) / h);
  out = y_prev_;
  for (std::size_t j = 0; j < 7; ++j) {
    if (w[j] != 0.0) out.noalias() += (h * w[j]) * k_.col(static_cast<Index>(j));
  }
}

Complex DormandPrince::dense_component(double t, Index i) const {
  const double h = t_ - t_prev_;
  if (h <= 0.0) return y_(i);
  const auto w = dense_weights((t - t_prev_) / h);
  Complex acc = y_prev_(i);
  for (std::size_t j = 0; j < 7; ++j) acc += (h * w[j]) * k_(i, static_cast<Index>(j));
  return acc;
}

}  // namespace mesolead
