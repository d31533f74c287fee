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

#include "mesolead/unconditional.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mesolead {

namespace {

void check_lead(const ExtendedSystem& sys, int lead) {
  if (lead < 0 || lead >= sys.num_leads()) throw std::out_of_range("lead index out of range");
}

void check_covariance(const Matrix& c, const ExtendedSystem& sys) {
  if (c.rows() != sys.dim() || c.cols() != sys.dim()) throw std::invalid_argument("covariance has wrong dimension");
}

// C is Hermitian, so C H = (H C)^dagger and one product suffices.
void lyapunov_into(const Matrix& c, const Matrix& h, const RealVector& gamma, const RealVector& feed, Matrix& hc,
                   Matrix& out) {
  hc.noalias() = h * c;
  const Complex minus_i(0.0, -1.0);
  out = minus_i * (hc - hc.adjoint());
  out.noalias() -= 0.5 * (gamma.cast<Complex>().asDiagonal() * c);
  out.noalias() -= 0.5 * (c * gamma.cast<Complex>().asDiagonal());
  out.diagonal() += feed.cast<Complex>();
}

Matrix as_matrix(const Vector& y, Index n) { return Eigen::Map<const Matrix>(y.data(), n, n); }

Vector as_vector(const Matrix& c) { return Eigen::Map<const Vector>(c.data(), c.size()); }

}  // namespace

Matrix lyapunov_rhs(const Matrix& c, double t, const ExtendedSystem& sys) {
  check_covariance(c, sys);
  Matrix scratch;
  Matrix hc;
  Matrix out;
  lyapunov_into(c, sys.hamiltonian(t, scratch), sys.damping(), sys.feed(), hc, out);
  return out;
}

std::vector<Matrix> evolve(const Matrix& c0, double t0, const std::vector<double>& times, const ExtendedSystem& sys,
                           const OdeOptions& options) {
  check_covariance(c0, sys);
  const Index n = sys.dim();
  Matrix scratch;
  Matrix hc;
  Matrix out;
  DormandPrince solver(
      [&](double t, const Vector& y, Vector& dydt) {
        lyapunov_into(Eigen::Map<const Matrix>(y.data(), n, n), sys.hamiltonian(t, scratch), sys.damping(),
                      sys.feed(), hc, out);
        dydt = Eigen::Map<const Vector>(out.data(), out.size());
      },
      options);
  solver.reset(t0, as_vector(hermitize(c0)));
  std::vector<Matrix> samples;
  samples.reserve(times.size());
  double last = t0;
  for (double t : times) {
    if (t < last) throw std::invalid_argument("evolve: sample times must be ascending and >= t0");
    last = t;
    if (t > solver.t()) solver.integrate_to(t);
    samples.push_back(hermitize(as_matrix(solver.y(), n)));
  }
  return samples;
}

Matrix evolve_to(const Matrix& c0, double t0, double t1, const ExtendedSystem& sys, const OdeOptions& options) {
  return evolve(c0, t0, {t1}, sys, options).front();
}

Matrix steady_state(const ExtendedSystem& sys, double t) {
  const Index n = sys.dim();
  const Matrix w = Complex(0.0, 1.0) * sys.hamiltonian(t) + 0.5 * Matrix(sys.damping().cast<Complex>().asDiagonal());
  Eigen::ComplexSchur<Matrix> schur(w);
  if (schur.info() != Eigen::Success) throw std::runtime_error("steady_state: Schur decomposition failed");
  const Matrix& u = schur.matrixU();
  const Matrix& tri = schur.matrixT();
  double margin = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) margin = std::min(margin, tri(i, i).real());
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if (!(margin > 1e-12 * scale)) {
    throw std::runtime_error("steady_state: W is not strictly stable (min Re eigenvalue " + std::to_string(margin) +
                             ")");
  }
  // T X + X T^dagger = G, X = U^dagger C U, solved column by column from the right.
  const Matrix g = u.adjoint() * sys.feed().cast<Complex>().asDiagonal() * u;
  Matrix x = Matrix::Zero(n, n);
  for (Index j = n - 1; j >= 0; --j) {
    Vector rhs = g.col(j);
    for (Index k = j + 1; k < n; ++k) rhs -= std::conj(tri(j, k)) * x.col(k);
    Matrix shifted = tri;
    shifted.diagonal().array() += std::conj(tri(j, j));
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return hermitize(u * x * u.adjoint());
}

double avg_particle_current(const Matrix& c, const ExtendedSystem& sys, int lead) {
  check_lead(sys, lead);
  check_covariance(c, sys);
  double acc = 0.0;
  for (Index k : sys.modes_of(lead)) acc += sys.feed()(k) - sys.damping()(k) * c(k, k).real();
  return acc;
}

double avg_energy_current(const Matrix& c, const ExtendedSystem& sys, int lead, double t) {
  check_lead(sys, lead);
  check_covariance(c, sys);
  Matrix scratch;
  const Matrix& h = sys.hamiltonian(t, scratch);
  double acc = 0.0;
  for (Index k : sys.modes_of(lead)) {
    const Complex hc_kk = (h.row(k) * c.col(k)).value();
    acc += sys.feed()(k) * h(k, k).real() - sys.damping()(k) * hc_kk.real();
  }
  return acc;
}

double avg_measurement_energy_current(const Matrix& c, const ExtendedSystem& sys, double t, int lead) {
  check_covariance(c, sys);
  if (lead >= 0) check_lead(sys, lead);
  const Matrix hint = sys.interaction_hamiltonian(t);
  double acc = 0.0;
  for (Index k = 0; k < sys.dim(); ++k) {
    if (sys.is_system_site(k) || (lead >= 0 && sys.lead_of(k) != lead)) continue;
    const Complex v = (hint.row(k) * c.col(k)).value();
    acc -= sys.damping()(k) * v.real();
  }
  return acc;
}

InternalCurrents internal_currents(const Matrix& c, const ExtendedSystem& sys, int lead, double t) {
  check_lead(sys, lead);
  check_covariance(c, sys);
  const Index n = sys.dim();
  const Matrix h = sys.hamiltonian(t);
  Matrix projector = Matrix::Zero(n, n);
  Matrix h_lead = Matrix::Zero(n, n);
  Matrix h_coupling = Matrix::Zero(n, n);
  for (Index k : sys.modes_of(lead)) {
    projector(k, k) = 1.0;
    for (Index j : sys.modes_of(lead)) h_lead(k, j) = h(k, j);
    for (Index s = 0; s < sys.system_sites(); ++s) {
      h_coupling(s, k) = h(s, k);
      h_coupling(k, s) = h(k, s);
    }
  }
  const Complex i(0.0, 1.0);
  const Matrix gamma = sys.damping_of(lead).cast<Complex>().asDiagonal();
  const Complex jn = i * ((projector * h_coupling - h_coupling * projector) * c).trace();
  const Complex je = i * ((h_lead * h_coupling - h_coupling * h_lead) * c).trace() -
                     0.5 * ((h_coupling * gamma + gamma * h_coupling) * c).trace();
  return {jn.real(), je.real()};
}

UnconditionalIntegrals integrate_currents(const Matrix& c0, double t0, double t1, const ExtendedSystem& sys,
                                          const OdeOptions& options) {
  check_covariance(c0, sys);
  if (t1 < t0) throw std::invalid_argument("integrate_currents: t1 < t0");
  const Index n = sys.dim();
  const int leads = sys.num_leads();
  constexpr Index kPerLead = 5;
  const Index total = n * n + kPerLead * leads;

  Matrix scratch;
  Matrix hc;
  Matrix out;
  DormandPrince solver(
      [&](double t, const Vector& y, Vector& dydt) {
        const Eigen::Map<const Matrix> c(y.data(), n, n);
        const Matrix& h = sys.hamiltonian(t, scratch);
        lyapunov_into(c, h, sys.damping(), sys.feed(), hc, out);
        dydt.resize(total);
        dydt.head(n * n) = Eigen::Map<const Vector>(out.data(), out.size());
        const Matrix cm = c;
        for (int a = 0; a < leads; ++a) {
          const InternalCurrents internal = internal_currents(cm, sys, a, t);
          double in = 0.0;
          double ie = 0.0;
          double iem = 0.0;
          for (Index k : sys.modes_of(a)) {
            const double g = sys.damping()(k);
            in += sys.feed()(k) - g * cm(k, k).real();
            ie += sys.feed()(k) * h(k, k).real() - g * hc(k, k).real();
            Complex hint_c{0.0, 0.0};
            for (Index s = 0; s < sys.system_sites(); ++s) hint_c += h(k, s) * cm(s, k);
            iem -= g * hint_c.real();
          }
          const Index base = n * n + kPerLead * a;
          dydt(base) = in;
          dydt(base + 1) = ie;
          dydt(base + 2) = iem;
          dydt(base + 3) = internal.particle;
          dydt(base + 4) = internal.energy;
        }
      },
      options);
  Vector y0 = Vector::Zero(total);
  y0.head(n * n) = as_vector(hermitize(c0));
  solver.reset(t0, y0);
  if (t1 > t0) solver.integrate_to(t1);

  UnconditionalIntegrals result;
  result.covariance = hermitize(as_matrix(solver.y().head(n * n), n));
  for (int a = 0; a < leads; ++a) {
    const Index base = n * n + kPerLead * a;
    const auto& y = solver.y();
    result.leads.push_back(
        {y(base).real(), y(base + 1).real(), y(base + 2).real(), y(base + 3).real(), y(base + 4).real()});
  }
  return result;
}

}  // namespace mesolead
