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

#include "mesolead/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mesolead/errors.hpp"

namespace mesolead {

namespace {

struct Coefficients {
  RealVector b;        // Gamma - 2F
  RealVector a;        // F (1 - L+)
  RealVector bm;       // (Gamma - F)(1 - L-)
  RealVector g;        // B - bm + a
  RealVector d;        // B/2 + a
  RealVector k_plus;   // L+ F
  RealVector k_minus;  // L- (Gamma - F)
};

Coefficients coefficients(const ExtendedSystem& sys, const EfficiencyMap& eff) {
  eff.validate(sys.dim());
  const RealVector& gamma = sys.damping();
  const RealVector& feed = sys.feed();
  const RealVector ones = RealVector::Ones(sys.dim());
  Coefficients c;
  c.b = gamma - 2.0 * feed;
  c.a = feed.cwiseProduct(ones - eff.plus);
  c.bm = (gamma - feed).cwiseProduct(ones - eff.minus);
  c.g = c.b - c.bm + c.a;
  c.d = 0.5 * c.b + c.a;
  c.k_plus = eff.plus.cwiseProduct(feed);
  c.k_minus = eff.minus.cwiseProduct(gamma - feed);
  return c;
}

Matrix interaction_mask(const ExtendedSystem& sys) {
  const Index n = sys.dim();
  Matrix mask = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (sys.is_system_site(i) != sys.is_system_site(j)) mask(i, j) = 1.0;
  return mask;
}

// Diagonal elements on lead mode k of the products entering the current
// formulas: q = (C^2)_kk, chc = (CHC)_kk, hc = (HC)_kk, chic = (C H_int C)_kk,
// hic = (H_int C)_kk, r0 = Re(Cbar H_0 C)_kk.
struct ModeTerms {
  double c = 0.0;
  double q = 0.0;
  double chc = 0.0;
  double hc = 0.0;
  double h = 0.0;
  double chic = 0.0;
  double cbar_hi_cbar = 0.0;
  double r0 = 0.0;
};

// hc = H C and hic = H_int C, both precomputed.
template <class C>
ModeTerms mode_terms(const C& c, const Matrix& h, const Matrix& hc, const Matrix& hi, const Matrix& hic_all,
                     Index k) {
  ModeTerms m;
  const auto col = c.col(k);
  m.c = c(k, k).real();
  m.q = col.squaredNorm();
  m.chc = col.dot(hc.col(k)).real();
  m.hc = hc(k, k).real();
  m.h = h(k, k).real();
  m.chic = col.dot(hic_all.col(k)).real();
  const double hic = hic_all(k, k).real();
  m.cbar_hi_cbar = hi(k, k).real() - 2.0 * hic + m.chic;
  m.r0 = (m.hc - hic) - (m.chc - m.chic);
  return m;
}

CurrentIncrements drift_of(const ModeTerms& m, double b, double a, double bm) {
  CurrentIncrements out;
  out.particles = b * (m.q - m.c) + a * (1.0 - 2.0 * m.c + m.q) - bm * m.q;
  out.energy = b * (m.chc - m.hc) + a * (m.h - 2.0 * m.hc + m.chc) - bm * m.chc;
  out.measurement_energy = b * (m.chc - m.hc) + a * (m.cbar_hi_cbar - m.r0) + bm * (m.r0 - m.chic);
  return out;
}

// State layout: vec(C) column-major, log p, then (N, E, E_M) per lead.
constexpr Index kPerLead = 3;

class JointRhs {
 public:
  JointRhs(const ExtendedSystem& sys, const EfficiencyMap& eff)
      : sys_(sys), coef_(coefficients(sys, eff)), n_(sys.dim()), mask_(interaction_mask(sys)) {
    hc_.resize(n_, n_);
    cg_.resize(n_, n_);
    out_.resize(n_, n_);
    hi_.resize(n_, n_);
    hic_.resize(n_, n_);
  }

  Index size() const { return n_ * n_ + 1 + kPerLead * sys_.num_leads(); }
  Index log_p_index() const { return n_ * n_; }
  Index lead_index(int lead) const { return n_ * n_ + 1 + kPerLead * lead; }

  void operator()(double t, const Vector& y, Vector& dydt) {
    const Eigen::Map<const Matrix> c(y.data(), n_, n_);
    const Matrix& h = sys_.hamiltonian(t, h_scratch_);
    hc_.noalias() = h * c;
    cg_.noalias() = c * coef_.g.cast<Complex>().asDiagonal();
    out_.noalias() = cg_ * c;
    out_ += Complex(0.0, -1.0) * (hc_ - hc_.adjoint());
    out_.noalias() -= coef_.d.cast<Complex>().asDiagonal() * c;
    out_.noalias() -= c * coef_.d.cast<Complex>().asDiagonal();
    out_.diagonal() += coef_.a.cast<Complex>();

    dydt.resize(size());
    dydt.head(n_ * n_) = Eigen::Map<const Vector>(out_.data(), n_ * n_);

    hi_ = h.cwiseProduct(mask_);
    hic_.noalias() = hi_ * c;
    double decay = 0.0;
    for (int lead = 0; lead < sys_.num_leads(); ++lead) {
      CurrentIncrements acc;
      for (Index k : sys_.modes_of(lead)) {
        const double ckk = c(k, k).real();
        decay += coef_.k_plus(k) * (1.0 - ckk) + coef_.k_minus(k) * ckk;
        const ModeTerms m = mode_terms(c, h, hc_, hi_, hic_, k);
        const CurrentIncrements inc = drift_of(m, coef_.b(k), coef_.a(k), coef_.bm(k));
        acc.particles += inc.particles;
        acc.energy += inc.energy;
        acc.measurement_energy += inc.measurement_energy;
      }
      const Index base = lead_index(lead);
      dydt(base) = acc.particles;
      dydt(base + 1) = acc.energy;
      dydt(base + 2) = acc.measurement_energy;
    }
    dydt(log_p_index()) = -decay;
  }

 private:
  const ExtendedSystem& sys_;
  Coefficients coef_;
  Index n_;
  Matrix mask_;
  Matrix h_scratch_;
  Matrix hc_;
  Matrix cg_;
  Matrix out_;
  Matrix hi_;
  Matrix hic_;
};

class ConditionalIntegrator {
 public:
  ConditionalIntegrator(const ExtendedSystem& sys, const TrajectoryOptions& options)
      : sys_(sys),
        options_(options),
        rhs_(sys, sys.efficiency()),
        solver_([this](double t, const Vector& y, Vector& dydt) { rhs_(t, y, dydt); }, options.ode) {}

  ConditionalIntegrator(const ConditionalIntegrator&) = delete;
  ConditionalIntegrator& operator=(const ConditionalIntegrator&) = delete;

  const JointRhs& rhs() const { return rhs_; }
  DormandPrince& solver() { return solver_; }

  void reset(double t, const Vector& y, double hint) { solver_.reset(t, y, hint); }

  Matrix covariance(const Vector& y) const {
    const Index n = sys_.dim();
    return hermitize(Eigen::Map<const Matrix>(y.data(), n, n));
  }

  /// Integrates until log p drops to `log_target` (returns true, state at the
  /// crossing in `crossing_`) or until t_max.
  bool advance(double t_max, double log_target, TrajectoryObserver* observer) {
    const Index lp = rhs_.log_p_index();
    while (solver_.t() < t_max) {
      double bound = t_max;
      for (double b : options_.breakpoints) {
        if (b > solver_.t() && b < bound) bound = b;
      }
      solver_.step(bound);
      if (observer != nullptr) observer->on_step(solver_.t(), covariance(solver_.y()));
      if (solver_.y()(lp).real() <= log_target) {
        double lo = solver_.t_prev();
        double hi = solver_.t();
        while (hi - lo > options_.crossing_tolerance * std::max(1.0, std::abs(hi))) {
          const double mid = 0.5 * (lo + hi);
          if (solver_.dense_component(mid, lp).real() <= log_target) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        crossing_time_ = hi;
        solver_.dense(hi, crossing_);
        return true;
      }
    }
    return false;
  }

  double crossing_time() const { return crossing_time_; }
  Vector& crossing() { return crossing_; }

 private:
  const ExtendedSystem& sys_;
  const TrajectoryOptions& options_;
  JointRhs rhs_;
  DormandPrince solver_;
  double crossing_time_ = 0.0;
  Vector crossing_;
};

void check_square(const Matrix& c, const ExtendedSystem& sys) {
  if (c.rows() != sys.dim() || c.cols() != sys.dim()) throw std::invalid_argument("covariance has wrong dimension");
}

void check_lead_mode(const ExtendedSystem& sys, Index mode) {
  if (mode < 0 || mode >= sys.dim()) throw std::out_of_range("mode index out of range");
  if (sys.is_system_site(mode)) throw std::invalid_argument("jump channel on a system site");
}

}  // namespace

Matrix no_jump_rhs(const Matrix& c, double t, const ExtendedSystem& sys, const EfficiencyMap& efficiency) {
  check_square(c, sys);
  const Coefficients coef = coefficients(sys, efficiency);
  const Matrix h = sys.hamiltonian(t);
  const Matrix hc = h * c;
  Matrix out = c * coef.g.cast<Complex>().asDiagonal() * c;
  out += Complex(0.0, -1.0) * (hc - hc.adjoint());
  out -= coef.d.cast<Complex>().asDiagonal() * c;
  out -= c * coef.d.cast<Complex>().asDiagonal();
  out.diagonal() += coef.a.cast<Complex>();
  return out;
}

Matrix no_jump_rhs(const Matrix& c, double t, const ExtendedSystem& sys) {
  return no_jump_rhs(c, t, sys, sys.efficiency());
}

double survival_decay_rate(const Matrix& c, const ExtendedSystem& sys, const EfficiencyMap& efficiency) {
  check_square(c, sys);
  efficiency.validate(sys.dim());
  double k = 0.0;
  for (Index i = 0; i < sys.dim(); ++i) {
    const double f = sys.feed()(i);
    const double ckk = c(i, i).real();
    k += efficiency.plus(i) * f * (1.0 - ckk) + efficiency.minus(i) * (sys.damping()(i) - f) * ckk;
  }
  return k;
}

double survival_decay_rate(const Matrix& c, const ExtendedSystem& sys) {
  return survival_decay_rate(c, sys, sys.efficiency());
}

Matrix jump_update(const Matrix& c, Index mode, Direction direction, double eta) {
  if (mode < 0 || mode >= c.rows()) throw std::out_of_range("jump_update: mode index out of range");
  Matrix out = c;
  if (direction == Direction::Plus) {
    const double denom = 1.0 - c(mode, mode).real();
    if (!(denom > eta)) {
      throw ImpossibleJumpError("absorption into filled mode " + std::to_string(mode));
    }
    Vector v = -c.col(mode);
    v(mode) += 1.0;
    out.noalias() += (v * v.adjoint()) / denom;
    out.row(mode).setZero();
    out.col(mode).setZero();
    out(mode, mode) = 1.0;
  } else {
    const double denom = c(mode, mode).real();
    if (!(denom > eta)) {
      throw ImpossibleJumpError("emission from empty mode " + std::to_string(mode));
    }
    const Vector v = c.col(mode);
    out.noalias() -= (v * v.adjoint()) / denom;
    out.row(mode).setZero();
    out.col(mode).setZero();
  }
  return hermitize(out);
}

std::vector<Channel> channel_weights(const Matrix& c, const ExtendedSystem& sys, const EfficiencyMap& efficiency) {
  check_square(c, sys);
  efficiency.validate(sys.dim());
  std::vector<Channel> channels;
  for (Index k = 0; k < sys.dim(); ++k) {
    if (sys.is_system_site(k)) continue;
    const double ckk = std::clamp(c(k, k).real(), 0.0, 1.0);
    const double f = sys.feed()(k);
    channels.push_back({k, Direction::Plus, efficiency.plus(k) * f * (1.0 - ckk)});
    channels.push_back({k, Direction::Minus, efficiency.minus(k) * (sys.damping()(k) - f) * ckk});
  }
  return channels;
}

Channel select_channel(const Matrix& c, const ExtendedSystem& sys, const EfficiencyMap& efficiency, double r2) {
  if (!(r2 > 0.0 && r2 < 1.0)) throw std::invalid_argument("select_channel: r2 must lie in (0, 1)");
  const auto channels = channel_weights(c, sys, efficiency);
  double total = 0.0;
  for (const auto& ch : channels) total += ch.weight;
  if (!(total > 0.0)) throw ImpossibleJumpError("select_channel: all channel weights vanish");
  double cumulative = 0.0;
  const Channel* last_open = nullptr;
  for (const auto& ch : channels) {
    if (ch.weight <= 0.0) continue;
    last_open = &ch;
    cumulative += ch.weight;
    if (cumulative / total >= r2) return ch;
  }
  return *last_open;
}

std::vector<CurrentIncrements> current_drifts(const Matrix& c, double t, const ExtendedSystem& sys,
                                              const EfficiencyMap& efficiency) {
  check_square(c, sys);
  const Coefficients coef = coefficients(sys, efficiency);
  const Matrix h = sys.hamiltonian(t);
  const Matrix hc = h * c;
  const Matrix hi = h.cwiseProduct(interaction_mask(sys));
  const Matrix hic = hi * c;
  std::vector<CurrentIncrements> out(static_cast<std::size_t>(sys.num_leads()));
  for (int lead = 0; lead < sys.num_leads(); ++lead) {
    auto& acc = out[static_cast<std::size_t>(lead)];
    for (Index k : sys.modes_of(lead)) {
      const CurrentIncrements inc =
          drift_of(mode_terms(c, h, hc, hi, hic, k), coef.b(k), coef.a(k), coef.bm(k));
      acc.particles += inc.particles;
      acc.energy += inc.energy;
      acc.measurement_energy += inc.measurement_energy;
    }
  }
  return out;
}

CurrentIncrements jump_increments(const Matrix& c, double t, const ExtendedSystem& sys, Index mode,
                                  Direction direction) {
  check_square(c, sys);
  check_lead_mode(sys, mode);
  const Matrix h = sys.hamiltonian(t);
  const Matrix hc = h * c;
  const Matrix hi = h.cwiseProduct(interaction_mask(sys));
  const Matrix hic = hi * c;
  const ModeTerms m = mode_terms(c, h, hc, hi, hic, mode);
  CurrentIncrements out;
  if (direction == Direction::Plus) {
    const double cbar = 1.0 - m.c;
    out.particles = (1.0 - 2.0 * m.c + m.q) / cbar;
    out.energy = (m.h - 2.0 * m.hc + m.chc) / cbar;
    out.measurement_energy = (m.cbar_hi_cbar - m.r0) / cbar;
  } else {
    out.particles = -m.q / m.c;
    out.energy = -m.chc / m.c;
    out.measurement_energy = (m.r0 - m.chic) / m.c;
  }
  return out;
}

double entropy_flux_increment(const JumpEvent& event, const ExtendedSystem& sys) {
  if (event.mode < 0 || event.mode >= sys.dim()) throw std::out_of_range("event mode out of range");
  const int lead = sys.lead_of(event.mode);
  if (lead < 0) throw std::invalid_argument("jump channel without reservoir");
  const ReservoirParams& r = sys.reservoir(lead);
  return -sign(event.direction) * (sys.mode_energy()(event.mode) - r.chemical_potential) / r.temperature;
}

double TrajectoryResult::entropy_flux() const {
  double acc = 0.0;
  for (const auto& l : leads) acc += l.entropy_flux;
  return acc;
}

double TrajectoryResult::heat(const ExtendedSystem& sys) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < leads.size(); ++a) acc += leads[a].heat(sys.reservoir(static_cast<int>(a)).chemical_potential);
  return acc;
}

double TrajectoryResult::measurement_entropy(const ExtendedSystem& sys) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < leads.size(); ++a) {
    acc += leads[a].measurement_energy / sys.reservoir(static_cast<int>(a)).temperature;
  }
  return acc;
}

WaitingTime sample_waiting_time(const ExtendedSystem& sys, const Matrix& c, double t0, double r1, double t_max,
                                const TrajectoryOptions& options) {
  check_square(c, sys);
  if (!(r1 > 0.0 && r1 < 1.0)) throw std::invalid_argument("sample_waiting_time: r1 must lie in (0, 1)");
  ConditionalIntegrator integ(sys, options);
  Vector y0 = Vector::Zero(integ.rhs().size());
  y0.head(c.size()) = Eigen::Map<const Vector>(hermitize(c).eval().data(), c.size());
  integ.reset(t0, y0, 0.0);
  WaitingTime out;
  if (t_max > t0 && integ.advance(t_max, std::log(r1), nullptr)) {
    out.jumped = true;
    out.time = integ.crossing_time();
    out.covariance = integ.covariance(integ.crossing());
  } else {
    out.time = integ.solver().t();
    out.covariance = integ.covariance(integ.solver().y());
  }
  return out;
}

TrajectoryEngine::TrajectoryEngine(const ExtendedSystem& sys, TrajectoryOptions options)
    : sys_(sys), options_(std::move(options)) {
  if (!(options_.crossing_tolerance > 0.0)) throw std::invalid_argument("crossing tolerance must be positive");
}

TrajectoryResult TrajectoryEngine::run(const Matrix& c0, double t0, double t1, RandomStream& rng,
                                       std::uint64_t seed_index, TrajectoryObserver* observer) const {
  check_square(c0, sys_);
  if (t1 < t0) throw std::invalid_argument("trajectory end before start");
  const Index n = sys_.dim();
  const int leads = sys_.num_leads();
  ConditionalIntegrator integ(sys_, options_);
  const JointRhs& rhs = integ.rhs();

  TrajectoryResult result;
  result.seed_index = seed_index;
  result.leads.assign(static_cast<std::size_t>(leads), {});

  Vector y = Vector::Zero(rhs.size());
  y.head(n * n) = Eigen::Map<const Vector>(checked_hermitize(c0).eval().data(), n * n);
  double t = t0;
  try {
    integ.reset(t0, y, 0.0);
    double log_target = std::log(rng.uniform());
    while (t1 > integ.solver().t() && integ.advance(t1, log_target, observer)) {
      t = integ.crossing_time();
      Vector& yj = integ.crossing();
      const Matrix before = integ.covariance(yj);
      const Channel ch = select_channel(before, sys_, sys_.efficiency(), rng.uniform());
      const CurrentIncrements inc = jump_increments(before, t, sys_, ch.mode, ch.direction);
      const Matrix after = jump_update(before, ch.mode, ch.direction);
      const JumpEvent event{t, ch.mode, ch.direction};
      const int lead = sys_.lead_of(ch.mode);
      const Index base = rhs.lead_index(lead);
      yj(base) += inc.particles;
      yj(base + 1) += inc.energy;
      yj(base + 2) += inc.measurement_energy;
      auto& tally = result.leads[static_cast<std::size_t>(lead)];
      tally.entropy_flux += entropy_flux_increment(event, sys_);
      ++tally.jumps;
      ++result.jumps;
      if (options_.keep_record) result.record.push_back(event);
      if (observer != nullptr) observer->on_jump(event, before, after);
      yj.head(n * n) = Eigen::Map<const Vector>(after.data(), n * n);
      yj(rhs.log_p_index()) = 0.0;
      integ.reset(t, yj, integ.solver().step_size());
      log_target = std::log(rng.uniform());
    }
    t = integ.solver().t();
  } catch (const TrajectoryError&) {
    throw;
  } catch (const std::exception& e) {
    throw TrajectoryError(seed_index, std::max(t, integ.solver().t()), e.what());
  }

  const Vector& yf = integ.solver().y();
  result.final_covariance = integ.covariance(yf);
  for (int lead = 0; lead < leads; ++lead) {
    const Index base = rhs.lead_index(lead);
    auto& tally = result.leads[static_cast<std::size_t>(lead)];
    tally.particles = yf(base).real();
    tally.energy = yf(base + 1).real();
    tally.measurement_energy = yf(base + 2).real();
  }
  result.t_end = integ.solver().t();
  result.ode_steps = integ.solver().steps_taken();
  return result;
}

}  // namespace mesolead
