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

// Quantum operations in Choi form. A CP map with Schrodinger action
// rho -> M*(rho) is stored as R = (M* (x) I)(|I><I|) on K (x) H, output
// factor first:
//
//   M*(rho) = Tr_H[(I_K (x) rho^T) R],     K := Tr_K[R],  0 <= K <= I_H.
//
// Transposes and |I> are taken in the computational basis. Basis strings
// such as "011" list the output qubits first and the input qubit last.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "covx/numkernel.hpp"
#include "covx/povm.hpp"
#include "covx/reps.hpp"

namespace covx {

class ChoiOperator {
 public:
  ChoiOperator(ComplexMatrix r, std::size_t dim_in, std::size_t dim_out);

  const ComplexMatrix& matrix() const { return r_; }
  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  TensorShape shape() const { return TensorShape{dim_out_, dim_in_}; }

 private:
  ComplexMatrix r_;
  std::size_t dim_in_;
  std::size_t dim_out_;
};

/// Kraus operators W_i : H -> K (dim_out x dim_in), M*(rho) = sum W_i rho W_i^dagger.
struct KrausSet {
  std::vector<ComplexMatrix> ops;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
};

struct CovariantChoi {
  ChoiOperator base;
  IsotypicDecomposition dec;
  std::vector<ComplexMatrix> w;  // one m_k x m_k matrix per block, R = (+) I (x) w^dagger w
};

ChoiOperator choi_from_kraus(const KrausSet& kraus);
/// Kraus operators from the spectral decomposition of R, largest first.
KrausSet kraus_from_choi(const ChoiOperator& r, double tol = kDefaultTol);

/// Schrodinger action M*(rho).
ComplexMatrix apply_channel(const ChoiOperator& r, const ComplexMatrix& rho);
/// Heisenberg action M(O) for O on K.
ComplexMatrix apply_heisenberg(const ChoiOperator& r, const ComplexMatrix& o);

enum class TniVerdict { TracePreserving, TraceNonIncreasing, Violating };
std::string to_string(TniVerdict v);

struct TniCheck {
  TniVerdict verdict = TniVerdict::Violating;
  bool completely_positive = false;
  ComplexMatrix k;  // Tr_K[R]
  double min_eigenvalue_r = 0.0;
  double min_eigenvalue_k = 0.0;
  double max_eigenvalue_k = 0.0;
};

TniCheck check_tni(const ChoiOperator& r, const Tolerances& tol = {});

/// Representation V_g (x) U_g^* on K (x) H.
Representation choi_representation(const Representation& rep_out, const Representation& rep_in);

/// Largest commutator norm ||[R, V_g (x) U_g^*]||_F over the sampled elements.
double covariance_check(const ChoiOperator& r, const Representation& rep_kh);
double covariance_check(const ChoiOperator& r, const Representation& rep_out,
                        const Representation& rep_in);

CovariantChoi covariant_choi(std::vector<ComplexMatrix> w, IsotypicDecomposition dec,
                             std::size_t dim_in, std::size_t dim_out);
/// Reads the block data off an operator that already lies in the commutant.
CovariantChoi covariant_from_commutant(const ChoiOperator& r, const IsotypicDecomposition& dec);
/// Twirls R onto the commutant of V (x) U^* and returns its block form.
CovariantChoi project_covariant(const ChoiOperator& r, const Representation& rep_kh,
                                const Tolerances& tol = {});

ExtremalityReport qo_extremality(const CovariantChoi& cov, const Tolerances& tol = {});

/// Choi's criterion: {W_i^dagger W_j} linearly independent.
bool choi_extremality_noncov(const KrausSet& kraus, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Built-in instances

/// Computational basis vector for a bit string, most significant bit first.
ComplexVector basis_ket(const std::string& bits);

/// Phase-covariant 1 -> n cloning fidelity operator on (C^2)^{(x) n} (x) C^2:
/// the average over output slots s of |+><+|_s (x) I_rest (x) |+><+|_in.
ComplexMatrix cloning_fidelity_operator(std::size_t copies);

/// U(1) representation V_phi (x) U_phi^* for 1 -> n qubit cloning.
Representation cloning_representation(std::size_t copies);

struct BuiltinExample {
  std::string name;
  std::string description;
  Representation rep;  // on K (x) H
  CovariantChoi choi;
  bool expect_extremal = true;
  bool expect_trace_preserving = true;
  std::optional<ComplexMatrix> fidelity_operator;
  std::optional<double> fidelity;  // Tr[W R] when a fidelity operator exists
};

std::vector<std::string> builtin_names();
BuiltinExample builtin_example(const std::string& name, std::size_t d = 2);

}  // namespace covx
