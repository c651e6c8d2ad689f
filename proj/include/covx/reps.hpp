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

// Unitary representations and their isotypic (Wedderburn) decomposition
//
//   carrier = (+)_k  H_k (x) C^{m_k},
//
// with an explicit aligning isometry Y_k : H_k (x) C^{m_k} -> carrier per
// class. Column (i, a) of Y_k, i < d_k, a < m_k, sits at index i * m_k + a,
// and U_g Y_k = Y_k (pi_k(g) (x) I_{m_k}) for one fixed irrep pi_k.
//
// Group averages use the Haar measure of total mass one.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "covx/numkernel.hpp"

namespace covx {

/// U(1) acting as U_phi = diag(exp(i w_j phi)).
struct U1Weights {
  std::vector<int> weights;
};

/// Explicit finite group, listed as unitaries. The list is closed under
/// products and inverses (checked on construction).
struct FiniteGroup {
  std::vector<ComplexMatrix> unitaries;
};

enum class SudVariant {
  UUstar,      // U_g (x) U_g^*   (output rep V = U)
  UstarUstar,  // U_g^* (x) U_g^* (output rep V = U^*)
};

/// Analytic SU(d) representation on C^d (x) C^d.
struct SUdTensor {
  std::size_t d = 2;
  SudVariant variant = SudVariant::UUstar;
};

class GroupElement {
 public:
  static GroupElement angle(double phi);
  static GroupElement index(std::size_t i);
  static GroupElement su(ComplexMatrix u);

  const std::variant<double, std::size_t, ComplexMatrix>& value() const { return v_; }

 private:
  explicit GroupElement(std::variant<double, std::size_t, ComplexMatrix> v) : v_(std::move(v)) {}
  std::variant<double, std::size_t, ComplexMatrix> v_;
};

class Representation {
 public:
  using Kind = std::variant<U1Weights, FiniteGroup, SUdTensor>;

  static Representation u1(std::vector<int> weights);
  static Representation finite(std::vector<ComplexMatrix> unitaries,
                               double tol = kDefaultTol);
  /// Closes a generating set under multiplication.
  static Representation finite_from_generators(const std::vector<ComplexMatrix>& gens,
                                               double tol = kDefaultTol,
                                               std::size_t max_order = 4096);
  static Representation su_d_tensor(std::size_t d, SudVariant variant);

  const Kind& kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::string kind_name() const;

  ComplexMatrix unitary(const GroupElement& g) const;

  /// Group elements used for every covariance residual: the whole group for
  /// finite groups, 4 max|w| + 1 equally spaced angles for U(1), and seeded
  /// Haar samples for SU(d).
  std::vector<ComplexMatrix> sample_unitaries(std::uint64_t seed = kDefaultSeed) const;

 private:
  Representation(Kind k, std::size_t dim) : kind_(std::move(k)), dim_(dim) {}
  Kind kind_;
  std::size_t dim_ = 0;
};

Representation tensor(const Representation& a, const Representation& b);
Representation conjugate(const Representation& r);

struct IsotypicBlock {
  int label = 0;
  std::size_t irrep_dim = 1;
  std::size_t multiplicity = 1;
  ComplexMatrix isometry;  // carrier x (irrep_dim * multiplicity)

  ComplexMatrix projector() const { return isometry * isometry.adjoint(); }
  std::size_t size() const { return irrep_dim * multiplicity; }
};

struct IsotypicDecomposition {
  std::vector<IsotypicBlock> blocks;
  std::size_t carrier_dim = 0;

  std::size_t sum_multiplicity_squares() const;
  const IsotypicBlock& block_by_label(int label) const;
};

/// Tr_{H_k}(Y_k^dagger Z Y_k), an m_k x m_k matrix.
ComplexMatrix block_partial_trace(const IsotypicBlock& b, const ComplexMatrix& z);
/// Y_k (I_{d_k} (x) M) Y_k^dagger.
ComplexMatrix block_embed(const IsotypicBlock& b, const ComplexMatrix& m);

IsotypicDecomposition isotypic_decompose(const Representation& r,
                                         double tol = kDefaultTol,
                                         std::uint64_t seed = kDefaultSeed);

/// Group average of U_g^dagger Z U_g.
ComplexMatrix twirl(const Representation& r, const ComplexMatrix& z);
/// Same projection computed from the block structure alone.
ComplexMatrix twirl_via_decomposition(const IsotypicDecomposition& dec,
                                      const ComplexMatrix& z);

/// max_g ||[Z, U_g]||_F over sample_unitaries().
double commutator_residual(const Representation& r, const ComplexMatrix& z);

struct DecompositionResiduals {
  double isometry = 0.0;    // max_k ||Y_k^dagger Y_k - I||_F
  double resolution = 0.0;  // ||sum_k Y_k Y_k^dagger - I||_F
  double alignment = 0.0;   // max_{g,k} ||U_g Y_k - Y_k (pi_k(g) (x) I)||_F
  double max() const;
};
DecompositionResiduals decomposition_residuals(const Representation& r,
                                               const IsotypicDecomposition& dec);

}  // namespace covx
