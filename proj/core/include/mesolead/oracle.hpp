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

#include <vector>

#include <Eigen/Sparse>

#include "mesolead/lead_model.hpp"
#include "mesolead/ode.hpp"
#include "mesolead/rng.hpp"
#include "mesolead/tpm_entropy.hpp"
#include "mesolead/trajectory.hpp"

namespace mesolead::oracle {

inline constexpr int kMaxModes = 8;

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Fock space of n fermionic modes. Basis index bit j is the occupation of
/// mode j; c_j = (prod_{i<j} Z_i) sigma^-_j.
class FockSpace {
 public:
  explicit FockSpace(int modes);

  int modes() const { return modes_; }
  Index dim() const { return Index{1} << modes_; }
  const SparseMatrix& annihilation(Index j) const { return c_.at(static_cast<std::size_t>(j)); }
  SparseMatrix creation(Index j) const { return annihilation(j).adjoint(); }
  /// sum_ij A_ij c_i^dagger c_j
  SparseMatrix quadratic(const Matrix& a) const;
  Matrix identity() const { return Matrix::Identity(dim(), dim()); }

 private:
  int modes_;
  std::vector<SparseMatrix> c_;
};

/// C_ij = Tr[c_j^dagger c_i rho].
Matrix dense_covariance(const FockSpace& space, const Matrix& rho);

/// Gaussian density matrix exp(-c^dagger M c) / Z for a covariance matrix.
Matrix dense_state(const FockSpace& space, const Matrix& c, double eta = kSpectrumClamp);

/// |s> = prod_{i: s_i = 1} d_i^dagger |0>, d_i^dagger = sum_j U_ji c_j^dagger,
/// applied in ascending i.
Vector mode_fock_state(const FockSpace& space, const Matrix& u, const Bitstring& bits);

/// Many-body GKSL generator of an extended system.
class Lindbladian {
 public:
  explicit Lindbladian(const ExtendedSystem& sys);

  const FockSpace& space() const { return space_; }
  const ExtendedSystem& system() const { return sys_; }

  /// -i[H, rho] + sum D[L] rho.
  Matrix apply(double t, const Matrix& rho) const;
  /// -i(H_eff rho - rho H_eff^dagger) + sum (1 - Lambda) L rho L^dagger.
  Matrix apply_no_jump(double t, const Matrix& rho) const;
  /// Lambda Tr[L^dagger L rho] per channel, ascending mode, + before -.
  std::vector<Channel> channel_weights(const Matrix& rho) const;
  /// L rho L^dagger / Tr[...].
  Matrix jump(const Matrix& rho, Index mode, Direction direction) const;

 private:
  struct Jump {
    Index mode;
    Direction direction;
    double efficiency;
    SparseMatrix op;
    SparseMatrix op_dag;
    SparseMatrix number;  // L^dagger L
  };

  Matrix effective_hamiltonian(double t) const;

  const ExtendedSystem& sys_;
  FockSpace space_;
  std::vector<Jump> jumps_;
  SparseMatrix decay_;  // sum L^dagger L
  Matrix static_heff_;
};

Matrix evolve(const Matrix& rho0, double t0, double t1, const ExtendedSystem& sys, const OdeOptions& options = {});

class DenseObserver {
 public:
  virtual ~DenseObserver() = default;
  virtual void on_step(double /*t*/, const Matrix& /*rho*/) {}
  virtual void on_jump(const JumpEvent& /*event*/, const Matrix& /*rho_after*/) {}
};

struct DenseTrajectoryResult {
  MeasurementRecord record;
  Matrix rho;
  double log_survival = 0.0;  // log p since the last jump
};

struct DenseTrajectoryOptions {
  OdeOptions ode{1e-11, 1e-13};
  double crossing_tolerance = 1e-12;
  std::vector<double> breakpoints;
};

/// Normalized no-jump evolution of rho_r and log p without drawing jumps.
DenseTrajectoryResult no_jump_evolve(const Matrix& rho0, double t0, double t1, const ExtendedSystem& sys,
                                     const DenseTrajectoryOptions& options = {});

/// Quantum-jump trajectory with the same random-number protocol as the
/// covariance engine: R1 per waiting time, R2 per channel choice.
DenseTrajectoryResult dense_trajectory(const Matrix& rho0, double t0, double t1, const ExtendedSystem& sys,
                                       RandomStream& rng, const DenseTrajectoryOptions& options = {},
                                       DenseObserver* observer = nullptr);

/// max over (i, j, k, l) of |<c_i^+ c_j^+ c_k c_l> - (C_li C_kj - C_ki C_lj)|.
double wick_residual(const FockSpace& space, const Matrix& rho);

/// |Tr rho^2 - prod (1 - 2 lambda + 2 lambda^2)|.
double purity_residual(const FockSpace& space, const Matrix& rho);

/// Eigenvalues of a density matrix, ascending.
RealVector spectrum(const Matrix& rho);

double trace_product(const Matrix& rho1, const Matrix& rho2);
/// Tr[sqrt(rho1) sqrt(rho2)].
double sqrt_overlap(const Matrix& rho1, const Matrix& rho2);
/// Tr[sqrt(rho1 rho2)].
double trace_sqrt_product(const Matrix& rho1, const Matrix& rho2);

/// Positive-semidefinite square root.
Matrix psd_sqrt(const Matrix& rho);

/// <s|rho|s> for the mode Fock state |s>.
double projection_probability(const FockSpace& space, const Matrix& rho, const Matrix& u, const Bitstring& bits);

}  // namespace mesolead::oracle
