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

// Dense complex linear algebra used by every other module: partial traces
// over declared tensor factorizations, the operator <-> vector
// correspondence |X> = (X (x) I)|I>, and tolerance-aware rank decisions.
//
// All rank decisions are relative: a singular value (or eigenvalue) counts
// when it exceeds tol * (largest one).

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "covx/errors.hpp"

namespace covx {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultFeasTol = 1e-8;
inline constexpr std::uint64_t kDefaultSeed = 0xC07A;

/// The two tolerance knobs shared by all verdicts.
struct Tolerances {
  double tol = kDefaultTol;           // relative rank threshold
  double feas_tol = kDefaultFeasTol;  // feasibility residual
};

/// Ordered factorization of a square matrix's index space, e.g. (dim K,
/// dim H) for operators on K (x) H. Index of (i_0, ..., i_{n-1}) is row-major.
class TensorShape {
 public:
  TensorShape() = default;
  TensorShape(std::initializer_list<std::size_t> dims);
  explicit TensorShape(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& factor_dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }
  std::size_t total() const;

 private:
  std::vector<std::size_t> dims_;
};

// ---------------------------------------------------------------------------
// Predicates

bool is_square(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);
bool is_psd(const ComplexMatrix& m, double tol = kDefaultTol);
bool is_unitary(const ComplexMatrix& m, double tol = kDefaultTol);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out the factors listed in `traced` and returns the operator on the
/// remaining factors (in their original order).
ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorShape& shape,
                            const std::vector<std::size_t>& traced);

/// Swaps two tensor factors' index order on both sides; used for E, the swap.
ComplexMatrix swap_operator(std::size_t d);

/// |X> = (X (x) I)|I> with |I> = sum_l |l>|l>. For X of shape rows x cols the
/// vector lives in C^rows (x) C^cols and entry (i, l) equals X(i, l).
ComplexVector op_to_vec(const ComplexMatrix& x);
ComplexMatrix vec_to_op(const ComplexVector& v, std::size_t rows,
                        std::size_t cols);

/// Unnormalized maximally entangled vector sum_l |l>|l> in C^d (x) C^d.
ComplexVector max_entangled(std::size_t d);

// ---------------------------------------------------------------------------
// Spectral routines

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // unitary, columns match `values`
};

struct Svd {
  ComplexMatrix u;
  RealVector sigma;  // descending
  ComplexMatrix v;   // m = u * diag(sigma) * v^dagger
};

HermitianEigen hermitian_eig(const ComplexMatrix& m, double tol = kDefaultTol);
Svd svd(const ComplexMatrix& m);

/// Canonical factor X with m = X^dagger X and rows(X) = numerical rank. Rows
/// are sqrt(lambda_i) v_i^dagger for eigenvalues lambda_i > tol * lambda_max,
/// in descending eigenvalue order. Inputs with eigenvalues below
/// -psd_tol * max(1, lambda_max) are rejected.
ComplexMatrix psd_factor(const ComplexMatrix& m, double tol = kDefaultTol,
                         double psd_tol = -1.0);

/// Numerical rank of a PSD/Hermitian matrix under the relative threshold.
std::size_t hermitian_rank(const ComplexMatrix& m, double tol = kDefaultTol);

/// PSD square root via the spectral decomposition (negative eigenvalues are
/// clipped to zero).
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Moore-Penrose style inverse square root on the support.
ComplexMatrix psd_inv_sqrt(const ComplexMatrix& m, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Spans

/// Result of the rank decision on a list of operators. Singular values are
/// reported relative to the largest so callers can see how crisp a verdict
/// was.
struct SpanAnalysis {
  std::size_t rank = 0;
  RealVector singular_values;     // absolute, descending
  double last_kept_rel = 0.0;     // sigma_rank / sigma_max (0 if rank == 0)
  double first_dropped_rel = 0.0; // sigma_{rank+1} / sigma_max (0 if none)
};

SpanAnalysis analyze_span(const std::vector<ComplexMatrix>& ops,
                          double tol = kDefaultTol);
std::size_t span_dimension(const std::vector<ComplexMatrix>& ops,
                           double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Real parameterization of Hermitian matrices

/// Orthonormal (Hilbert-Schmidt) basis of n x n Hermitian matrices:
/// E_jj, (E_jl + E_lj)/sqrt2, i(E_jl - E_lj)/sqrt2 for j < l.
std::vector<ComplexMatrix> hermitian_basis(std::size_t n);

/// Coordinates of a Hermitian matrix in hermitian_basis(n).
RealVector hermitian_coords(const ComplexMatrix& h);
ComplexMatrix hermitian_from_coords(const RealVector& c, std::size_t n,
                                    Eigen::Index offset = 0);

/// Null direction of a real matrix: the right singular vector of the smallest
/// singular value, together with that value relative to the largest.
struct NullDirection {
  RealVector vector;
  double sigma_rel = 0.0;
};
NullDirection smallest_right_singular(const RealMatrix& a);

// ---------------------------------------------------------------------------
// Random instances

ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng& rng);
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix random_unitary(std::size_t n, Rng& rng);

}  // namespace covx
