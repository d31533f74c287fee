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

#include "mesolead/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mesolead/ensemble.hpp"
#include "mesolead/gaussian.hpp"
#include "mesolead/oracle.hpp"
#include "mesolead/protocols.hpp"

namespace mesolead {

RunOptions run_options(const ExperimentConfig& config) {
  RunOptions o;
  o.seed = config.seed;
  o.trajectories = config.trajectories;
  o.workers = config.workers;
  o.ode = OdeOptions{config.rtol, config.atol};
  return o;
}

namespace {

struct FtSample {
  TpmSample tpm;
  double heat = 0.0;
  double particles = 0.0;
  double energy = 0.0;
  double measurement_energy = 0.0;
  std::size_t jumps = 0;
  MeasurementRecord record;
};

struct LeadTotals {
  double heat = 0.0;
  double particles = 0.0;
  double energy = 0.0;
  double measurement_energy = 0.0;
};

LeadTotals totals(const TrajectoryResult& r, const ExtendedSystem& sys) {
  LeadTotals t;
  for (std::size_t a = 0; a < r.leads.size(); ++a) {
    const auto& l = r.leads[a];
    t.heat += l.heat(sys.reservoir(static_cast<int>(a)).chemical_potential);
    t.particles += l.particles;
    t.energy += l.energy;
    t.measurement_energy += l.measurement_energy;
  }
  return t;
}

}  // namespace

SteadyFtResult run_steady_ft(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const ExtendedSystem sys = make_dot_system(config.epsilon, config.lead);
  const double tau = config.tau.front();

  SteadyFtResult result;
  result.config = config;
  result.options = options;
  result.steady_covariance = steady_state(sys);
  result.measurement_energy_rate = avg_measurement_energy_current(result.steady_covariance, sys);
  const Matrix c_tau = evolve_to(result.steady_covariance, 0.0, tau, sys, OdeOptions{1e-11, 1e-13});
  const Eigenbasis basis_tau = eigenbasis(c_tau);

  TrajectoryOptions topts;
  topts.ode = options.ode;
  topts.keep_record = options.keep_records;
  const TrajectoryEngine engine(sys, topts);

  const std::function<FtSample(std::uint64_t)> task = [&](std::uint64_t i) {
    RandomStream rng(options.seed, i);
    const InitialSample init = sample_initial(result.steady_covariance, rng);
    TrajectoryResult traj = engine.run(init.covariance, 0.0, tau, rng, i);
    const FinalSample fin = sample_final(traj.final_covariance, basis_tau, rng);
    FtSample s;
    s.tpm.initial_bits = init.bits;
    s.tpm.final_bits = fin.bits;
    s.tpm.log_p0 = init.log_probability;
    s.tpm.log_pm_conditional = fin.log_conditional;
    s.tpm.log_pm = fin.log_unconditional;
    s.tpm.log_overlap = log_overlap(traj.final_covariance, c_tau);
    s.tpm.entropy_flux = traj.entropy_flux();
    s.tpm.measurement_entropy = traj.measurement_entropy(sys);
    s.tpm.floored = init.floored || fin.floored;
    const LeadTotals t = totals(traj, sys);
    s.heat = t.heat;
    s.particles = t.particles;
    s.energy = t.energy;
    s.measurement_energy = t.measurement_energy;
    s.jumps = traj.jumps;
    s.record = std::move(traj.record);
    return s;
  };
  std::vector<FtSample> samples = run_ensemble(options.trajectories, options.workers, task);

  for (const auto& name : kEntropyQuantities) result.ift[name];
  for (auto& s : samples) {
    auto& st = result.stats;
    ++st.trajectories;
    st.jumps += s.jumps;
    st.add("heat", s.heat);
    st.add("particles", s.particles);
    st.add("energy", s.energy);
    st.add("measurement_energy", s.measurement_energy);
    st.add("entropy_flux", s.tpm.entropy_flux);
    st.add("jumps", static_cast<double>(s.jumps));
    if (s.tpm.floored) {
      ++st.floored;
    } else {
      const EntropyProductions p = s.tpm.productions();
      const std::map<std::string, double> values{
          {"S_tot", p.total}, {"S_unc", p.uncertainty}, {"S_mart", p.martingale}, {"S_tot_modified", p.total_modified}};
      for (const auto& [name, v] : values) {
        st.add(name, v);
        result.ift[name].add(v);
      }
    }
    if (options.keep_records) result.records.push_back(std::move(s.record));
  }
  return result;
}

double ErasurePoint::heat_mismatch() const {
  const double scale = std::max(std::abs(external_heat), 1e-300);
  return std::abs(external_heat - internal_heat) / scale;
}

std::vector<ErasurePoint> unconditional_erasure(const ExperimentConfig& config, const OdeOptions& ode) {
  config.validate();
  std::vector<ErasurePoint> points;
  for (std::size_t j = 0; j < config.tau.size(); ++j) {
    ErasurePoint p;
    p.protocol = config.erasure(j);
    const ExtendedSystem sys = make_erasure_system(p.protocol, config.lead);
    const Matrix c0 = erasure_initial_state(sys);
    // integrate each smooth piece separately
    UnconditionalIntegrals first = integrate_currents(c0, 0.0, p.protocol.tau, sys, ode);
    UnconditionalIntegrals second = integrate_currents(first.covariance, p.protocol.tau, p.protocol.end(), sys, ode);
    const double mu = config.lead.mu;
    for (std::size_t a = 0; a < first.leads.size(); ++a) {
      const auto& x = first.leads[a];
      const auto& y = second.leads[a];
      p.external_heat += (x.energy + y.energy) - mu * (x.particles + y.particles);
      p.internal_heat += (x.internal_energy + y.internal_energy) - mu * (x.internal_particles + y.internal_particles);
    }
    p.fidelity = fidelity(second.covariance, erasure_target_state(sys));
    points.push_back(std::move(p));
  }
  return points;
}

ErasureResult run_erasure(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  ErasureResult result;
  result.config = config;
  result.options = options;
  result.landauer_bound = config.lead.temperature * std::numbers::ln2;
  result.points = unconditional_erasure(config);

  for (std::size_t j = 0; j < config.tau.size(); ++j) {
    ErasurePoint& point = result.points[j];
    const ExtendedSystem sys = make_erasure_system(point.protocol, config.lead);
    const Matrix c0 = erasure_initial_state(sys);
    TrajectoryOptions topts;
    topts.ode = options.ode;
    topts.keep_record = options.keep_records;
    topts.breakpoints = {point.protocol.tau};
    const TrajectoryEngine engine(sys, topts);
    const double t_end = point.protocol.end();
    // streams of different taus must not coincide
    const std::uint64_t offset = static_cast<std::uint64_t>(j) << 40;
    const std::function<TrajectoryResult(std::uint64_t)> task = [&](std::uint64_t i) {
      RandomStream rng(options.seed, offset + i);
      TrajectoryResult r = engine.run(c0, 0.0, t_end, rng, i);
      r.final_covariance.resize(0, 0);
      return r;
    };
    std::vector<TrajectoryResult> runs = run_ensemble(options.trajectories, options.workers, task);
    for (auto& r : runs) {
      const LeadTotals t = totals(r, sys);
      auto& st = point.stats;
      ++st.trajectories;
      st.jumps += r.jumps;
      st.add("dissipated_heat", -t.heat);
      st.add("heat", t.heat);
      st.add("particles", t.particles);
      st.add("energy", t.energy);
      st.add("measurement_energy", t.measurement_energy);
      st.add("jumps", static_cast<double>(r.jumps));
      if (options.keep_records) point.records.push_back(std::move(r.record));
    }
  }
  return result;
}

double finite_band_occupation(double epsilon, double gamma, double omega_max, double temperature, double mu) {
  const double pi = std::numbers::pi;
  auto integrand = [=](double w) {
    const double shift = gamma / (2.0 * pi) * std::log(std::abs((w + omega_max) / (w - omega_max)));
    const double d = w - epsilon - shift;
    return gamma * fermi_dirac(w, temperature, mu) / (d * d + 0.25 * gamma * gamma) / (2.0 * pi);
  };
  using boost::math::quadrature::gauss_kronrod;
  const double lo = -omega_max;
  const double hi = omega_max;
  const double mid = std::clamp(epsilon, lo, hi);
  double acc = 0.0;
  if (mid > lo) acc += gauss_kronrod<double, 61>::integrate(integrand, lo, mid, 20, 1e-13);
  if (hi > mid) acc += gauss_kronrod<double, 61>::integrate(integrand, mid, hi, 20, 1e-13);
  return acc;
}

double wide_band_occupation(double epsilon, double gamma, double temperature, double mu) {
  const double pi = std::numbers::pi;
  auto integrand = [=](double w) {
    const double d = w - epsilon;
    return gamma * fermi_dirac(w, temperature, mu) / (d * d + 0.25 * gamma * gamma) / (2.0 * pi);
  };
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  return gauss_kronrod<double, 61>::integrate(integrand, -inf, epsilon, 20, 1e-13) +
         gauss_kronrod<double, 61>::integrate(integrand, epsilon, inf, 20, 1e-13);
}

SteadyStateSummary steady_state_summary(const ExperimentConfig& config) {
  config.validate();
  const ExtendedSystem sys = make_dot_system(config.epsilon, config.lead);
  SteadyStateSummary s;
  s.covariance = steady_state(sys);
  s.dot_occupation = s.covariance(0, 0).real();
  for (int a = 0; a < sys.num_leads(); ++a) {
    const InternalCurrents internal = internal_currents(s.covariance, sys, a);
    s.leads.push_back({avg_particle_current(s.covariance, sys, a), avg_energy_current(s.covariance, sys, a),
                       avg_measurement_energy_current(s.covariance, sys, 0.0, a), internal.particle,
                       internal.energy});
  }
  const auto& l = config.lead;
  s.finite_band_occupation = finite_band_occupation(config.epsilon, l.gamma, l.omega_max, l.temperature, l.mu);
  s.wide_band_occupation = wide_band_occupation(config.epsilon, l.gamma, l.temperature, l.mu);
  return s;
}

namespace {

class EngineRecorder : public TrajectoryObserver {
 public:
  void on_jump(const JumpEvent& /*event*/, const Matrix& /*before*/, const Matrix& after) override {
    post_jump.push_back(after);
  }
  std::vector<Matrix> post_jump;
};

class DenseRecorder : public oracle::DenseObserver {
 public:
  explicit DenseRecorder(const oracle::FockSpace& space) : space_(space) {}
  void on_step(double /*t*/, const Matrix& rho) override { check(rho); }
  void on_jump(const JumpEvent& /*event*/, const Matrix& rho) override {
    check(rho);
    post_jump.push_back(oracle::dense_covariance(space_, rho));
  }
  std::vector<Matrix> post_jump;
  double wick = 0.0;
  double purity = 0.0;

 private:
  void check(const Matrix& rho) {
    wick = std::max(wick, oracle::wick_residual(space_, rho));
    purity = std::max(purity, oracle::purity_residual(space_, rho));
  }
  const oracle::FockSpace& space_;
};

}  // namespace

OracleCheckResult run_oracle_check(const ExperimentConfig& config, const RunOptions& options, double t_span,
                                   int max_lead_modes) {
  config.validate();
  LeadParams lead = config.lead;
  lead.modes = std::min(lead.modes, max_lead_modes);
  const ExtendedSystem sys = make_dot_system(config.epsilon, lead);
  const oracle::FockSpace space(static_cast<int>(sys.dim()));
  const Matrix c0 = erasure_initial_state(sys);
  const Matrix rho0 = oracle::dense_state(space, c0);

  OracleCheckResult out;
  out.modes = static_cast<int>(sys.dim());
  out.seeds = options.trajectories;

  const OdeOptions tight{1e-11, 1e-13};
  for (int s = 1; s <= 10; ++s) {
    const double t = t_span * s / 10.0;
    const Matrix engine = evolve_to(c0, 0.0, t, sys, tight);
    const Matrix dense = oracle::dense_covariance(space, oracle::evolve(rho0, 0.0, t, sys, tight));
    out.max_unconditional_error = std::max(out.max_unconditional_error, max_abs(engine - dense));
  }

  TrajectoryOptions topts;
  topts.ode = options.ode;
  const TrajectoryEngine engine(sys, topts);
  oracle::DenseTrajectoryOptions dopts;
  for (std::uint64_t i = 0; i < options.trajectories; ++i) {
    RandomStream rng_engine(options.seed, i);
    RandomStream rng_dense(options.seed, i);
    EngineRecorder er;
    DenseRecorder dr(space);
    const TrajectoryResult a = engine.run(c0, 0.0, t_span, rng_engine, i, &er);
    const oracle::DenseTrajectoryResult b = oracle::dense_trajectory(rho0, 0.0, t_span, sys, rng_dense, dopts, &dr);
    out.total_jumps += a.record.size();
    out.max_wick_residual = std::max(out.max_wick_residual, dr.wick);
    out.max_purity_residual = std::max(out.max_purity_residual, dr.purity);

    bool identical = a.record.size() == b.record.size();
    double diverged_at = -1.0;
    const std::size_t common = std::min(a.record.size(), b.record.size());
    for (std::size_t k = 0; k < common; ++k) {
      const auto& x = a.record[k];
      const auto& y = b.record[k];
      if (x.mode != y.mode || x.direction != y.direction || std::abs(x.time - y.time) > 1e-6 * std::max(1.0, x.time)) {
        identical = false;
        diverged_at = std::min(x.time, y.time);
        break;
      }
      out.max_covariance_error = std::max(out.max_covariance_error, max_abs(er.post_jump[k] - dr.post_jump[k]));
    }
    if (!identical && diverged_at < 0.0) {
      diverged_at = a.record.size() > common ? a.record[common].time : b.record[common].time;
    }
    if (!identical) {
      if (out.first_divergence_time < 0.0 || diverged_at < out.first_divergence_time) {
        out.first_divergence_time = diverged_at;
      }
      ++out.record_mismatches;
      continue;
    }
    out.max_covariance_error =
        std::max(out.max_covariance_error, max_abs(a.final_covariance - oracle::dense_covariance(space, b.rho)));
  }
  return out;
}

}  // namespace mesolead
