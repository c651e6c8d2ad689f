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

// Linear maximization Tr[W Z] over the covariant POVM seeds or the covariant
// Choi operators with fixed Tr_K. Channel variables live in commutant
// coordinates (one Hermitian m_k x m_k block per class), so covariance holds
// by construction.

#pragma once

#include <cstdint>

#include "covx/numkernel.hpp"
#include "covx/reps.hpp"

namespace covx {

struct ConvexSetSpec {
  enum class Kind { PovmSeeds, CovariantChannels };

  Kind kind = Kind::PovmSeeds;
  IsotypicDecomposition dec;
  ComplexMatrix target_k;  // channels only, on H
  std::size_t dim_in = 0;  // channels only
  std::size_t dim_out = 0;

  static ConvexSetSpec povm_seeds(IsotypicDecomposition dec);
  /// Throws ContractViolation when no covariant R has Tr_K[R] = k.
  static ConvexSetSpec covariant_channels(IsotypicDecomposition dec, std::size_t dim_in,
                                          std::size_t dim_out, ComplexMatrix k);
  static ConvexSetSpec trace_preserving_channels(IsotypicDecomposition dec, std::size_t dim_in,
                                                 std::size_t dim_out);

  std::size_t ambient_dim() const { return dec.carrier_dim; }
  /// Xi_0 = I, or the twirl of (I_K (x) K)/dim K.
  ComplexMatrix canonical_point() const;
  bool is_feasible(const ComplexMatrix& z, const Tolerances& tol = {}) const;
};

struct OptimizerConfig {
  Tolerances tol;
  std::size_t restarts = 4;  // restart 0 starts at the canonical point
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_iterations = 100000;
  std::size_t stall_window = 50;
  double stall_rel_change = 1e-8;
  std::size_t max_projection_iterations = 20000;
  /// Snap the result onto its face and walk to a vertex of the optimal face.
  bool polish = true;
};

struct OptimizeResult {
  ComplexMatrix maximizer;
  double value = 0.0;
  std::size_t iterations = 0;  // of the reported restart
  bool converged = false;
  std::size_t restart = 0;
  bool polished = false;
};

OptimizeResult maximize_linear(const ComplexMatrix& w, const ConvexSetSpec& set,
                               const OptimizerConfig& cfg = {});

/// Dykstra projection onto the PSD cone intersected with the affine
/// constraints. Throws ProjectionFailed when the iteration stalls.
ComplexMatrix project_feasible(const ComplexMatrix& z, const ConvexSetSpec& set,
                               const OptimizerConfig& cfg = {});

}  // namespace covx
