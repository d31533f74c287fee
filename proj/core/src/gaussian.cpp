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

#include "mesolead/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mesolead {

namespace {

RealVector clamped(const RealVector& values, double eta) {
  return values.unaryExpr([eta](double v) { return std::clamp(v, eta, 1.0 - eta); });
}

Matrix rebuild(const Matrix& u, const RealVector& values) {
  return u * values.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace

Eigenbasis eigenbasis(const Matrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(c));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenbasis: eigensolver did not converge");
  return {solver.eigenvectors(), solver.eigenvalues()};
}

Matrix checked_hermitize(const Matrix& c) {
  if (c.rows() != c.cols()) throw std::invalid_argument("covariance matrix must be square");
  const double drift = hermiticity_drift(c);
  if (!(drift <= kHermiticityTolerance)) {
    throw std::invalid_argument("covariance matrix is not Hermitian (drift " + std::to_string(drift) + ")");
  }
  return hermitize(c);
}

Matrix clamp_spectrum(const Matrix& c, double eta) {
  const Eigenbasis basis = eigenbasis(checked_hermitize(c));
  return rebuild(basis.vectors, clamped(basis.values, eta));
}

GaussianParametrization to_parametrization(const Matrix& c, double eta) {
  const Eigenbasis basis = eigenbasis(checked_hermitize(c));
  const RealVector lambda = clamped(basis.values, eta);
  RealVector m(lambda.size());
  double log_z = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    m(i) = std::log1p(-lambda(i)) - std::log(lambda(i));
    log_z -= std::log1p(-lambda(i));
  }
  return {rebuild(basis.vectors, m), log_z};
}

Matrix from_parametrization(const Matrix& m) {
  const Eigenbasis basis = eigenbasis(checked_hermitize(m));
  // 1 / (1 + e^x) without overflow
  const RealVector occ = basis.values.unaryExpr([](double x) {
    return x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
  });
  return rebuild(basis.vectors, occ);
}

double log_overlap(const Matrix& c1, const Matrix& c2, double eta) {
  if (c1.rows() != c2.rows()) throw std::invalid_argument("overlap: dimension mismatch");
  const Matrix a = clamp_spectrum(c1, eta);
  const Matrix b = clamp_spectrum(c2, eta);
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  return log_det((id - a) * (id - b) + a * b).real();
}

double overlap(const Matrix& c1, const Matrix& c2, double eta) { return std::exp(log_overlap(c1, c2, eta)); }

double fidelity(const Matrix& c1, const Matrix& c2, double eta) {
  if (c1.rows() != c2.rows()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Eigenbasis e1 = eigenbasis(checked_hermitize(c1));
  const Eigenbasis e2 = eigenbasis(checked_hermitize(c2));
  const RealVector l1 = clamped(e1.values, eta);
  const RealVector l2 = clamped(e2.values, eta);
  const Matrix s1 = rebuild(e1.vectors, l1.cwiseSqrt());
  const Matrix s2 = rebuild(e2.vectors, l2.cwiseSqrt());
  const Matrix r1 = rebuild(e1.vectors, (RealVector::Ones(l1.size()) - l1).cwiseSqrt());
  const Matrix r2 = rebuild(e2.vectors, (RealVector::Ones(l2.size()) - l2).cwiseSqrt());
  return std::exp(log_det(r1 * r2 + s1 * s2).real());
}

double purity(const Matrix& c) {
  const RealVector lambda = eigenbasis(checked_hermitize(c)).values;
  double log_p = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    const double l = lambda(i);
    log_p += std::log(1.0 - 2.0 * l + 2.0 * l * l);
  }
  return std::exp(log_p);
}

}  // namespace mesolead
