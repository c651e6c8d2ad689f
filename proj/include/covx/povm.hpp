// Copyright 2026 The covx Authors
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

// Covariant POVMs on the group itself: dP_g = U_g^dagger Xi U_g dg, with the
// seed Xi >= 0 normalized block by block,
//
//   Tr_{H_k}(P_k Xi P_k) = d_k I_{m_k}   for every class k.

#pragma once

#include <optional>
#include <vector>

#include "covx/numkernel.hpp"
#include "covx/reps.hpp"

namespace covx {

struct PovmSeed {
  ComplexMatrix xi;
  IsotypicDecomposition dec;
};

/// Shared by the POVM and channel extremality tests.
struct ExtremalityReport {
  bool is_extremal = false;
  std::size_t rank = 0;            // rows of the factor X (sum over blocks for channels)
  std::size_t span_achieved = 0;
  std::size_t span_required = 0;
  bool necessary_bound_ok = true;
  std::optional<ComplexMatrix> witness;
  std::optional<double> witness_step;
  /// Relative singular values on either side of the rank cut. A verdict is
  /// crisp when last_kept_rel is far above tol and first_dropped_rel far below.
  double last_kept_rel = 0.0;
  double first_dropped_rel = 0.0;
};

struct SeedCheck {
  bool feasible = false;
  bool psd = false;
  double min_eigenvalue = 0.0;
  std::vector<double> block_residuals;  // ||Tr_{H_k}(P_k Xi P_k) - d_k I||_op
};

SeedCheck check_seed(const ComplexMatrix& xi, const IsotypicDecomposition& dec,
                     const Tolerances& tol = {});

/// Throws ContractViolation unless check_seed passes.
PovmSeed make_seed(ComplexMatrix xi, IsotypicDecomposition dec, const Tolerances& tol = {});

/// Congruence Z -> N^dagger Z N with N in the commutant, scaled so that every
/// block constraint holds. Rank is preserved. Requires each block's partial
/// trace of Z to be invertible.
ComplexMatrix normalize_seed(const ComplexMatrix& z, const IsotypicDecomposition& dec,
                             double tol = kDefaultTol);

ComplexMatrix density_at(const PovmSeed& seed, const Representation& rep,
                         const GroupElement& g);
double probability_density(const PovmSeed& seed, const Representation& rep,
                           const ComplexMatrix& rho, const GroupElement& g,
                           double tol = kDefaultTol);

/// Exact group average of U_g^dagger Xi U_g: finite sum, 4 max|w| + 1 point
/// trapezoid rule on U(1), analytic twirl for SU(d).
ComplexMatrix normalization_integral(const ComplexMatrix& xi, const Representation& rep);

/// rank(Xi)^2 <= sum_k m_k^2.
bool necessary_rank_bound(const PovmSeed& seed, double tol = kDefaultTol);

ExtremalityReport extremality(const PovmSeed& seed, const Tolerances& tol = {});

/// Independent route for a single class: linear independence of the r^2
/// products W_i^dagger W_j with Xi = sum_i |W_i><W_i| spectral.
bool single_class_extremality(const PovmSeed& seed, double tol = kDefaultTol);

}  // namespace covx
