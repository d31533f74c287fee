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

#include <complex>

#include <Eigen/Dense>

namespace mesolead {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// (A + A^dagger) / 2.
Matrix hermitize(const Matrix& a);

/// max_ij |A_ij - conj(A_ji)|.
double hermiticity_drift(const Matrix& a);

/// Natural log of det(A) from LU pivots. The imaginary part carries the phase
/// (including the permutation sign as i*pi).
Complex log_det(const Matrix& a);

/// max_ij |A_ij|; zero for empty matrices.
double max_abs(const Matrix& a);

}  // namespace mesolead
