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

#include "mesolead/linalg.hpp"

#include <cmath>
#include <numbers>

namespace mesolead {

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double hermiticity_drift(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Complex log_det(const Matrix& a) {
  if (a.rows() == 0) return {0.0, 0.0};
  Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix& packed = lu.matrixLU();
  Complex acc{0.0, 0.0};
  for (Index i = 0; i < packed.rows(); ++i) acc += std::log(packed(i, i));
  if (lu.permutationP().determinant() < 0) acc += Complex(0.0, std::numbers::pi);
  return acc;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace mesolead
