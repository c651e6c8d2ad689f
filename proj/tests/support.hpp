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

// Fixtures and independent oracles shared by the unit and acceptance tests.
// Oracles here deliberately avoid the library routines they check.

#pragma once

#include <vector>

#include "covx/channels.hpp"
#include "covx/numkernel.hpp"
#include "covx/povm.hpp"
#include "covx/reps.hpp"

namespace covx::testing {

// Finite groups, listed element by element.
std::vector<ComplexMatrix> s3_permutation_matrices();  // on C^3
std::vector<ComplexMatrix> s3_regular();               // left regular, on C^6
std::vector<ComplexMatrix> z4_regular();               // on C^4
std::vector<ComplexMatrix> pauli_group();              // {i^k P}, 16 elements on C^2, irreducible
std::vector<ComplexMatrix> weyl_heisenberg(std::size_t d);  // {w^k X^a Z^b}, irreducible on C^d

/// g -> V (U_g (x) I_m) V^dagger for a random unitary V: one isotypic class of
/// multiplicity m whose chart is hidden by V.
std::vector<ComplexMatrix> amplified(const std::vector<ComplexMatrix>& group, std::size_t m,
                                     Rng& rng);

/// Index-loop partial trace over the listed factors.
ComplexMatrix partial_trace_oracle(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& traced);

/// sum_i W_i rho W_i^dagger.
ComplexMatrix kraus_apply(const KrausSet& k, const ComplexMatrix& rho);

/// Random density matrix of full rank.
ComplexMatrix random_density(std::size_t n, Rng& rng);

/// Random PSD matrix of the given rank.
ComplexMatrix random_psd(std::size_t n, std::size_t rank, Rng& rng);

/// Random trace-preserving Kraus set with r operators.
KrausSet random_tp_kraus(std::size_t dim_in, std::size_t dim_out, std::size_t r, Rng& rng);

/// Feasible seed of the given rank (normalize_seed applied to a random PSD).
ComplexMatrix random_feasible_seed(const IsotypicDecomposition& dec, std::size_t rank, Rng& rng);

/// Twirl over an explicit finite group, computed term by term.
ComplexMatrix group_average(const std::vector<ComplexMatrix>& group, const ComplexMatrix& z);

/// Rows of a classification table instance for 1 -> 2 cloning.
struct TableInstance {
  std::string row;
  ComplexMatrix r;
};
/// Three parameter settings per parameterized row, each meeting the row's
/// norm constraints.
std::vector<TableInstance> clone12_table_instances();

}  // namespace covx::testing
