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

#include "mesolead/tpm_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mesolead {

namespace {

const double kLogFloor = std::log(kProbabilityFloor);

bool apply_floor(double& log_p) {
  if (log_p < kLogFloor) {
    log_p = kLogFloor;
    return true;
  }
  return false;
}

Matrix rotate(const Matrix& cr, const Eigenbasis& basis) {
  if (cr.rows() != basis.vectors.rows()) throw std::invalid_argument("TPM: dimension mismatch");
  return hermitize(basis.vectors.adjoint() * checked_hermitize(cr) * basis.vectors);
}

void check_bits(const Bitstring& bits, Index n) {
  if (static_cast<Index>(bits.size()) != n) throw std::invalid_argument("bitstring length does not match dimension");
}

}  // namespace

InitialSample sample_initial(const Matrix& c0, RandomStream& rng, double eta) {
  const Eigenbasis basis = eigenbasis(checked_hermitize(c0));
  const Index n = basis.values.size();
  InitialSample out;
  out.bits.resize(static_cast<std::size_t>(n));
  RealVector occ = RealVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double lambda = std::clamp(basis.values(i), 0.0, 1.0);
    const bool filled = rng.uniform() < lambda;
    out.bits[static_cast<std::size_t>(i)] = filled ? 1 : 0;
    occ(i) = filled ? 1.0 : 0.0;
  }
  out.log_probability = log_eigen_probability(basis.values, out.bits, eta);
  out.floored = apply_floor(out.log_probability);
  out.covariance = basis.vectors * occ.cast<Complex>().asDiagonal() * basis.vectors.adjoint();
  return out;
}

double log_eigen_probability(const RealVector& eigenvalues, const Bitstring& bits, double eta) {
  check_bits(bits, eigenvalues.size());
  double acc = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = std::clamp(eigenvalues(i), eta, 1.0 - eta);
    acc += bits[static_cast<std::size_t>(i)] != 0 ? std::log(lambda) : std::log1p(-lambda);
  }
  return acc;
}

double log_unconditional_eigen_probability(const Matrix& c, const Bitstring& bits, double eta) {
  return log_eigen_probability(eigenbasis(checked_hermitize(c)).values, bits, eta);
}

double projection_probability(const Matrix& cr, const Eigenbasis& basis, const Bitstring& bits) {
  const Matrix rotated = rotate(cr, basis);
  const Index n = rotated.rows();
  check_bits(bits, n);
  Matrix m = rotated;
  for (Index i = 0; i < n; ++i) {
    if (bits[static_cast<std::size_t>(i)] == 0) {
      m.row(i) = -rotated.row(i);
      m(i, i) += 1.0;
    }
  }
  const Complex det = n == 0 ? Complex(1.0, 0.0) : m.determinant();
  if (std::abs(det.imag()) > 1e-10 * std::max(1.0, std::abs(det.real()))) {
    throw std::runtime_error("projection probability has imaginary part " + std::to_string(det.imag()));
  }
  return std::clamp(det.real(), 0.0, 1.0);
}

double projection_probability(const Matrix& cr, const Matrix& c, const Bitstring& bits) {
  return projection_probability(cr, eigenbasis(checked_hermitize(c)), bits);
}

FinalSample sample_final(const Matrix& cr, const Eigenbasis& basis, RandomStream& rng, double eta) {
  Matrix m = rotate(cr, basis);
  const Index n = m.rows();
  FinalSample out;
  out.bits.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double p1 = std::clamp(m(i, i).real(), 0.0, 1.0);
    const bool filled = rng.uniform() < p1;
    out.bits[static_cast<std::size_t>(i)] = filled ? 1 : 0;
    if (filled) {
      out.log_conditional += std::log(p1);
      const Vector v = m.col(i);
      m.noalias() -= (v * v.adjoint()) / p1;
    } else {
      const double p0 = 1.0 - p1;
      out.log_conditional += std::log(p0);
      Vector v = -m.col(i);
      v(i) += 1.0;
      m.noalias() += (v * v.adjoint()) / p0;
    }
    m.row(i).setZero();
    m.col(i).setZero();
    if (filled) m(i, i) = 1.0;
  }
  out.log_unconditional = log_eigen_probability(basis.values, out.bits, eta);
  const bool a = apply_floor(out.log_conditional);
  const bool b = apply_floor(out.log_unconditional);
  out.floored = a || b;
  return out;
}

FinalSample sample_final(const Matrix& cr, const Matrix& c, RandomStream& rng, double eta) {
  return sample_final(cr, eigenbasis(checked_hermitize(c)), rng, eta);
}

EntropyProductions entropy_productions(const TpmSample& s) {
  EntropyProductions out;
  out.total = s.log_p0 - s.log_pm + s.entropy_flux;
  out.uncertainty = -s.log_pm + s.log_overlap;
  out.martingale = s.log_p0 - s.log_overlap + s.entropy_flux;
  out.total_modified = out.total - s.measurement_entropy;
  return out;
}

EntropyProductions TpmSample::productions() const { return entropy_productions(*this); }

void IftEstimator::add(double s) {
  ++n_;
  const double nd = static_cast<double>(n_);
  const double e = std::exp(-s);
  const double de = e - exp_mean_;
  exp_mean_ += de / nd;
  exp_m2_ += de * (e - exp_mean_);
  const double ds = s - mean_;
  mean_ += ds / nd;
  m2_ += ds * (s - mean_);
}

void IftEstimator::merge(const IftEstimator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double nt = na + nb;
  const double de = other.exp_mean_ - exp_mean_;
  exp_m2_ += other.exp_m2_ + de * de * na * nb / nt;
  exp_mean_ += de * nb / nt;
  const double ds = other.mean_ - mean_;
  m2_ += other.m2_ + ds * ds * na * nb / nt;
  mean_ += ds * nb / nt;
  n_ += other.n_;
}

double IftEstimator::standard_error(double m2, std::uint64_t n) {
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double nd = static_cast<double>(n);
  return std::sqrt(std::max(m2, 0.0) / (nd - 1.0) / nd);
}

double IftEstimator::se_exp() const { return standard_error(exp_m2_, n_); }
double IftEstimator::se() const { return standard_error(m2_, n_); }

std::vector<Bitstring> all_bitstrings(Index n) {
  if (n < 0 || n > 24) throw std::invalid_argument("all_bitstrings: n out of range");
  const std::size_t count = std::size_t{1} << n;
  std::vector<Bitstring> out(count, Bitstring(static_cast<std::size_t>(n), 0));
  for (std::size_t m = 0; m < count; ++m)
    for (Index i = 0; i < n; ++i) out[m][static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((m >> i) & 1U);
  return out;
}

}  // namespace mesolead
