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

#include <cstdint>
#include <vector>

#include "mesolead/gaussian.hpp"
#include "mesolead/rng.hpp"

namespace mesolead {

using Bitstring = std::vector<std::uint8_t>;

/// Probabilities below this value are treated as hitting the floor.
inline constexpr double kProbabilityFloor = 1e-300;

struct InitialSample {
  Bitstring bits;          // occupations of the eigenmodes of C(0), ascending eigenvalue order
  double log_probability;  // log p_n^0
  Matrix covariance;       // C^r(0) = U diag(s) U^dagger
  bool floored = false;
};

/// Draws one eigenstate of rho(0): bit i is occupied with probability lambda_i.
InitialSample sample_initial(const Matrix& c0, RandomStream& rng, double eta = kSpectrumClamp);

/// log prod_i lambda_i^{s_i} (1 - lambda_i)^{1 - s_i} over the clamped spectrum.
double log_eigen_probability(const RealVector& eigenvalues, const Bitstring& bits, double eta = kSpectrumClamp);
double log_unconditional_eigen_probability(const Matrix& c, const Bitstring& bits, double eta = kSpectrumClamp);

/// p = det[(1 - n_s)(1 - C') + n_s C'] with C' = U^dagger C^r U and U the
/// eigenbasis of the unconditional C(tau). Throws std::runtime_error if the
/// determinant has a significant imaginary part.
double projection_probability(const Matrix& cr, const Eigenbasis& basis, const Bitstring& bits);
double projection_probability(const Matrix& cr, const Matrix& c, const Bitstring& bits);

struct FinalSample {
  Bitstring bits;
  double log_conditional = 0.0;    // log p_m^{r tau}
  double log_unconditional = 0.0;  // log p_m^tau
  bool floored = false;
};

/// Samples the final projective measurement bit by bit; each bit is drawn from
/// its conditional marginal given the bits already fixed.
FinalSample sample_final(const Matrix& cr, const Eigenbasis& basis, RandomStream& rng,
                         double eta = kSpectrumClamp);
FinalSample sample_final(const Matrix& cr, const Matrix& c, RandomStream& rng, double eta = kSpectrumClamp);

struct EntropyProductions {
  double total = 0.0;
  double uncertainty = 0.0;
  double martingale = 0.0;
  double total_modified = 0.0;
};

struct TpmSample {
  Bitstring initial_bits;
  Bitstring final_bits;
  double log_p0 = 0.0;
  double log_pm_conditional = 0.0;
  double log_pm = 0.0;
  double log_overlap = 0.0;
  double entropy_flux = 0.0;
  /// Sum over leads of Delta E_M / T.
  double measurement_entropy = 0.0;
  bool floored = false;

  EntropyProductions productions() const;
};

/// S_tot = log(p0 / pm) + Sigma, S_unc = -log pm + log O,
/// S_mart = log p0 - log O + Sigma, modified S_tot = S_tot - Delta E_M / T.
EntropyProductions entropy_productions(const TpmSample& sample);

/// Streaming estimator of <exp(-S)> and <S>.
class IftEstimator {
 public:
  void add(double s);
  void merge(const IftEstimator& other);

  std::uint64_t count() const { return n_; }
  double mean_exp() const { return exp_mean_; }
  double se_exp() const;
  double mean() const { return mean_; }
  double se() const;

 private:
  static double standard_error(double m2, std::uint64_t n);

  std::uint64_t n_ = 0;
  double exp_mean_ = 0.0;
  double exp_m2_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Enumerates all 2^N bitstrings in lexicographic order (bit 0 fastest).
std::vector<Bitstring> all_bitstrings(Index n);

}  // namespace mesolead
