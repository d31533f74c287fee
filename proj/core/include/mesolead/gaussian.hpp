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

#include "mesolead/linalg.hpp"

namespace mesolead {

/// Eigenvalues of covariance matrices are clamped to [eta, 1 - eta] before
/// logarithms and inverses.
inline constexpr double kSpectrumClamp = 1e-12;

/// Largest anti-Hermitian part tolerated on input before rejecting it.
inline constexpr double kHermiticityTolerance = 1e-8;

struct Eigenbasis {
  Matrix vectors;      // columns are eigenvectors
  RealVector values;   // ascending
};

/// C = U diag(lambda) U^dagger with lambda ascending.
Eigenbasis eigenbasis(const Matrix& c);

/// rho = exp(-c^dagger M c) / Z.
struct GaussianParametrization {
  Matrix m;
  double log_z = 0.0;
};

/// Hermitizes `c` and throws std::invalid_argument if its anti-Hermitian part
/// exceeds kHermiticityTolerance.
Matrix checked_hermitize(const Matrix& c);

/// Hermitizes and projects the spectrum onto [eta, 1 - eta].
Matrix clamp_spectrum(const Matrix& c, double eta = kSpectrumClamp);

GaussianParametrization to_parametrization(const Matrix& c, double eta = kSpectrumClamp);

/// Inverse map C = (1 + e^M)^{-1}.
Matrix from_parametrization(const Matrix& m);

/// Tr[rho1 rho2] = det[(1 - C1)(1 - C2) + C1 C2].
double overlap(const Matrix& c1, const Matrix& c2, double eta = kSpectrumClamp);
double log_overlap(const Matrix& c1, const Matrix& c2, double eta = kSpectrumClamp);

/// det(1 + e^{-M1/2} e^{-M2/2}) / sqrt(Z1 Z2)
///   = det[sqrt(1 - C1) sqrt(1 - C2) + sqrt(C1) sqrt(C2)] = Tr[sqrt(rho1) sqrt(rho2)].
double fidelity(const Matrix& c1, const Matrix& c2, double eta = kSpectrumClamp);

/// Tr[rho^2] = prod_i (1 - 2 lambda_i + 2 lambda_i^2).
double purity(const Matrix& c);

}  // namespace mesolead
