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

#include "mesolead/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "mesolead/errors.hpp"
#include "mesolead/gaussian.hpp"

namespace mesolead::oracle {

namespace {

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unflatten(const Vector& v, Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

double trace_real(const SparseMatrix& op, const Matrix& rho) {
  Complex acc{0.0, 0.0};
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
  return acc.real();
}

Channel choose(const std::vector<Channel>& channels, double r2) {
  double total = 0.0;
  for (const auto& ch : channels) total += ch.weight;
  if (!(total > 0.0)) throw ImpossibleJumpError("dense oracle: all channel weights vanish");
  double cumulative = 0.0;
  const Channel* last = nullptr;
  for (const auto& ch : channels) {
    if (ch.weight <= 0.0) continue;
    last = &ch;
    cumulative += ch.weight;
    if (cumulative / total >= r2) return ch;
  }
  return *last;
}

}  // namespace

FockSpace::FockSpace(int modes) : modes_(modes) {
  if (modes < 1 || modes > kMaxModes) {
    throw std::invalid_argument("dense oracle supports 1.." + std::to_string(kMaxModes) + " modes, got " +
                                std::to_string(modes));
  }
  const Index d = dim();
  for (int j = 0; j < modes; ++j) {
    std::vector<Eigen::Triplet<Complex>> entries;
    const auto bit = std::uint64_t{1} << j;
    for (Index n = 0; n < d; ++n) {
      const auto state = static_cast<std::uint64_t>(n);
      if ((state & bit) == 0) continue;
      const int parity = std::popcount(state & (bit - 1));
      entries.emplace_back(static_cast<Index>(state ^ bit), n, parity % 2 == 0 ? 1.0 : -1.0);
    }
    SparseMatrix c(d, d);
    c.setFromTriplets(entries.begin(), entries.end());
    c_.push_back(std::move(c));
  }
}

SparseMatrix FockSpace::quadratic(const Matrix& a) const {
  if (a.rows() != modes_ || a.cols() != modes_) throw std::invalid_argument("quadratic: wrong coefficient size");
  SparseMatrix out(dim(), dim());
  for (int i = 0; i < modes_; ++i)
    for (int j = 0; j < modes_; ++j)
      if (a(i, j) != Complex(0.0, 0.0)) out += a(i, j) * SparseMatrix(creation(i) * annihilation(j));
  return out;
}

Matrix dense_covariance(const FockSpace& space, const Matrix& rho) {
  const int n = space.modes();
  Matrix c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const SparseMatrix op = space.creation(j) * space.annihilation(i);
      Complex acc{0.0, 0.0};
      for (int k = 0; k < op.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(op, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
      c(i, j) = acc;
    }
  return c;
}

Matrix dense_state(const FockSpace& space, const Matrix& c, double eta) {
  const GaussianParametrization param = to_parametrization(c, eta);
  const Matrix k = Matrix(space.quadratic(param.m));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(k));
  const RealVector e = solver.eigenvalues();
  const RealVector w = (-(e.array() - e.minCoeff())).exp().matrix();
  const Matrix rho = solver.eigenvectors() * (w / w.sum()).cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
  return hermitize(rho);
}

Vector mode_fock_state(const FockSpace& space, const Matrix& u, const Bitstring& bits) {
  const int n = space.modes();
  if (u.rows() != n || u.cols() != n || static_cast<int>(bits.size()) != n) {
    throw std::invalid_argument("mode_fock_state: dimension mismatch");
  }
  Vector v = Vector::Zero(space.dim());
  v(0) = 1.0;
  for (int i = 0; i < n; ++i) {
    if (bits[static_cast<std::size_t>(i)] == 0) continue;
    Vector next = Vector::Zero(space.dim());
    for (int j = 0; j < n; ++j) next += u(j, i) * (space.creation(j) * v);
    v = next;
  }
  return v;
}

Lindbladian::Lindbladian(const ExtendedSystem& sys) : sys_(sys), space_(static_cast<int>(sys.dim())) {
  const Index d = space_.dim();
  decay_ = SparseMatrix(d, d);
  const auto& eff = sys.efficiency();
  for (Index k = 0; k < sys.dim(); ++k) {
    if (sys.is_system_site(k)) continue;
    const double gamma = sys.damping()(k);
    const double f = sys.occupation()(k);
    const SparseMatrix plus = std::sqrt(gamma * f) * space_.creation(k);
    const SparseMatrix minus = std::sqrt(gamma * (1.0 - f)) * space_.annihilation(k);
    for (const auto& [op, dir, lambda] :
         {std::tuple{plus, Direction::Plus, eff.plus(k)}, std::tuple{minus, Direction::Minus, eff.minus(k)}}) {
      Jump jump{k, dir, lambda, op, SparseMatrix(op.adjoint()), SparseMatrix()};
      jump.number = jump.op_dag * jump.op;
      decay_ += jump.number;
      jumps_.push_back(std::move(jump));
    }
  }
  if (!sys.time_dependent()) static_heff_ = effective_hamiltonian(0.0);
}

Matrix Lindbladian::effective_hamiltonian(double t) const {
  Matrix heff = Matrix(space_.quadratic(sys_.hamiltonian(t)));
  heff -= Complex(0.0, 0.5) * Matrix(decay_);
  return heff;
}

Matrix Lindbladian::apply(double t, const Matrix& rho) const {
  const Matrix heff = sys_.time_dependent() ? effective_hamiltonian(t) : static_heff_;
  const Complex minus_i(0.0, -1.0);
  Matrix out = minus_i * (heff * rho - rho * heff.adjoint());
  for (const auto& j : jumps_) out += j.op * rho * j.op_dag;
  return out;
}

Matrix Lindbladian::apply_no_jump(double t, const Matrix& rho) const {
  const Matrix heff = sys_.time_dependent() ? effective_hamiltonian(t) : static_heff_;
  const Complex minus_i(0.0, -1.0);
  Matrix out = minus_i * (heff * rho - rho * heff.adjoint());
  for (const auto& j : jumps_) {
    if (j.efficiency < 1.0) out += (1.0 - j.efficiency) * (j.op * rho * j.op_dag);
  }
  return out;
}

std::vector<Channel> Lindbladian::channel_weights(const Matrix& rho) const {
  std::vector<Channel> out;
  out.reserve(jumps_.size());
  for (const auto& j : jumps_) out.push_back({j.mode, j.direction, std::max(0.0, j.efficiency * trace_real(j.number, rho))});
  return out;
}

Matrix Lindbladian::jump(const Matrix& rho, Index mode, Direction direction) const {
  for (const auto& j : jumps_) {
    if (j.mode != mode || j.direction != direction) continue;
    const Matrix next = j.op * rho * j.op_dag;
    const double norm = next.trace().real();
    if (!(norm > 0.0)) throw ImpossibleJumpError("dense oracle: jump into blocked channel");
    return hermitize(next / norm);
  }
  throw std::out_of_range("dense oracle: unknown channel");
}

Matrix evolve(const Matrix& rho0, double t0, double t1, const ExtendedSystem& sys, const OdeOptions& options) {
  const Lindbladian lindbladian(sys);
  const Index d = lindbladian.space().dim();
  if (rho0.rows() != d || rho0.cols() != d) throw std::invalid_argument("dense evolve: wrong state dimension");
  DormandPrince solver(
      [&](double t, const Vector& y, Vector& dydt) { dydt = flatten(lindbladian.apply(t, unflatten(y, d))); },
      options);
  solver.reset(t0, flatten(rho0));
  if (t1 > t0) solver.integrate_to(t1);
  return hermitize(unflatten(solver.y(), d));
}

namespace {

class DenseConditional {
 public:
  DenseConditional(const ExtendedSystem& sys, const DenseTrajectoryOptions& options)
      : lindbladian_(sys),
        options_(options),
        d_(lindbladian_.space().dim()),
        solver_(
            [this](double t, const Vector& y, Vector& dydt) {
              const Matrix rho = unflatten(y.head(d_ * d_), d_);
              const Matrix l0 = lindbladian_.apply_no_jump(t, rho);
              const double tr = l0.trace().real();
              dydt.resize(d_ * d_ + 1);
              dydt.head(d_ * d_) = flatten(l0 - tr * rho);
              dydt(d_ * d_) = tr;
            },
            options.ode) {}

  const Lindbladian& lindbladian() const { return lindbladian_; }
  Index dim() const { return d_; }
  DormandPrince& solver() { return solver_; }

  void reset(double t, const Matrix& rho, double hint) {
    Vector y(d_ * d_ + 1);
    y.head(d_ * d_) = flatten(rho);
    y(d_ * d_) = 0.0;
    solver_.reset(t, y, hint);
  }

  Matrix rho(const Vector& y) const { return hermitize(unflatten(y.head(d_ * d_), d_)); }

  bool advance(double t_max, double log_target, DenseObserver* observer) {
    const Index lp = d_ * d_;
    while (solver_.t() < t_max) {
      double bound = t_max;
      for (double b : options_.breakpoints)
        if (b > solver_.t() && b < bound) bound = b;
      solver_.step(bound);
      if (observer != nullptr) observer->on_step(solver_.t(), rho(solver_.y()));
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
  const Vector& crossing() const { return crossing_; }

 private:
  Lindbladian lindbladian_;
  const DenseTrajectoryOptions& options_;
  Index d_;
  DormandPrince solver_;
  double crossing_time_ = 0.0;
  Vector crossing_;
};

}  // namespace

DenseTrajectoryResult no_jump_evolve(const Matrix& rho0, double t0, double t1, const ExtendedSystem& sys,
                                     const DenseTrajectoryOptions& options) {
  DenseConditional engine(sys, options);
  engine.reset(t0, rho0, 0.0);
  if (t1 > t0) engine.solver().integrate_to(t1);
  DenseTrajectoryResult out;
  out.rho = engine.rho(engine.solver().y());
  out.log_survival = engine.solver().y()(engine.dim() * engine.dim()).real();
  return out;
}

DenseTrajectoryResult dense_trajectory(const Matrix& rho0, double t0, double t1, const ExtendedSystem& sys,
                                       RandomStream& rng, const DenseTrajectoryOptions& options,
                                       DenseObserver* observer) {
  DenseConditional engine(sys, options);
  const Index d = engine.dim();
  if (rho0.rows() != d || rho0.cols() != d) throw std::invalid_argument("dense trajectory: wrong state dimension");
  DenseTrajectoryResult out;
  engine.reset(t0, rho0, 0.0);
  double log_target = std::log(rng.uniform());
  while (t1 > engine.solver().t() && engine.advance(t1, log_target, observer)) {
    const double t = engine.crossing_time();
    const Matrix before = engine.rho(engine.crossing());
    const Channel ch = choose(engine.lindbladian().channel_weights(before), rng.uniform());
    const Matrix after = engine.lindbladian().jump(before, ch.mode, ch.direction);
    const JumpEvent event{t, ch.mode, ch.direction};
    out.record.push_back(event);
    if (observer != nullptr) observer->on_jump(event, after);
    engine.reset(t, after, engine.solver().step_size());
    log_target = std::log(rng.uniform());
  }
  out.rho = engine.rho(engine.solver().y());
  out.log_survival = engine.solver().y()(d * d).real();
  return out;
}

double wick_residual(const FockSpace& space, const Matrix& rho) {
  const int n = space.modes();
  const Matrix c = dense_covariance(space, rho);
  std::vector<SparseMatrix> pairs(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) pairs[static_cast<std::size_t>(a * n + b)] = space.annihilation(a) * space.annihilation(b);
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Matrix x = pairs[static_cast<std::size_t>(k * n + l)] * rho;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          // <c_i^+ c_j^+ c_k c_l> = Tr[(c_j c_i)^dagger x]
          const SparseMatrix& p = pairs[static_cast<std::size_t>(j * n + i)];
          Complex value{0.0, 0.0};
          for (int o = 0; o < p.outerSize(); ++o)
            for (SparseMatrix::InnerIterator it(p, o); it; ++it) value += std::conj(it.value()) * x(it.row(), it.col());
          const Complex wick = c(l, i) * c(k, j) - c(k, i) * c(l, j);
          worst = std::max(worst, std::abs(value - wick));
        }
    }
  return worst;
}

double purity_residual(const FockSpace& space, const Matrix& rho) {
  const double dense = rho.squaredNorm();
  return std::abs(dense - purity(dense_covariance(space, rho)));
}

RealVector spectrum(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(rho), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_product(const Matrix& rho1, const Matrix& rho2) { return (rho1 * rho2).trace().real(); }

Matrix psd_sqrt(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(rho));
  const RealVector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
}

double sqrt_overlap(const Matrix& rho1, const Matrix& rho2) { return (psd_sqrt(rho1) * psd_sqrt(rho2)).trace().real(); }

double trace_sqrt_product(const Matrix& rho1, const Matrix& rho2) {
  Eigen::ComplexEigenSolver<Matrix> solver(rho1 * rho2, false);
  double acc = 0.0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) acc += std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  return acc;
}

double projection_probability(const FockSpace& space, const Matrix& rho, const Matrix& u, const Bitstring& bits) {
  const Vector v = mode_fock_state(space, u, bits);
  return (v.adjoint() * rho * v).value().real();
}

}  // namespace mesolead::oracle
