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

#include "covx/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace covx {

namespace {

std::string shape_str(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

TensorShape::TensorShape(std::initializer_list<std::size_t> dims)
    : TensorShape(std::vector<std::size_t>(dims)) {}

TensorShape::TensorShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  for (auto d : dims_) {
    if (d == 0) throw DimensionError("tensor factor of dimension 0");
  }
}

std::size_t TensorShape::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                         std::multiplies<>());
}

bool is_square(const ComplexMatrix& m) { return m.rows() == m.cols(); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!is_square(m)) return false;
  const double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= tol * scale;
}

bool is_psd(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  if (m.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  return ev(0) >= -tol * std::max(1.0, std::abs(ev(ev.size() - 1)));
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (!is_square(m)) return false;
  const auto n = m.rows();
  const double scale = std::max(1.0, std::sqrt(static_cast<double>(n)));
  return (m.adjoint() * m - ComplexMatrix::Identity(n, n)).norm() <= tol * scale;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> s(m);
  return s.singularValues()(0);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorShape& shape,
                            const std::vector<std::size_t>& traced) {
  if (!is_square(m)) {
    throw DimensionError("partial_trace: matrix is not square (" + shape_str(m) + ")");
  }
  if (shape.total() != static_cast<std::size_t>(m.rows())) {
    throw DimensionError("partial_trace: shape does not match matrix dimension " +
                         std::to_string(m.rows()));
  }
  const auto& dims = shape.factor_dims();
  const std::size_t nf = dims.size();
  std::vector<bool> is_traced(nf, false);
  for (auto t : traced) {
    if (t >= nf) throw DimensionError("partial_trace: factor index out of range");
    is_traced[t] = true;
  }

  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  for (std::size_t f = 0; f < nf; ++f) (is_traced[f] ? traced_dim : kept_dim) *= dims[f];

  // full_index[kept * traced_dim + tr]
  std::vector<Eigen::Index> full_index(kept_dim * traced_dim);
  const std::size_t total = shape.total();
  std::vector<std::size_t> digits(nf);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t f = nf; f-- > 0;) {
      digits[f] = rem % dims[f];
      rem /= dims[f];
    }
    std::size_t kept = 0;
    std::size_t tr = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      if (is_traced[f]) {
        tr = tr * dims[f] + digits[f];
      } else {
        kept = kept * dims[f] + digits[f];
      }
    }
    full_index[kept * traced_dim + tr] = static_cast<Eigen::Index>(idx);
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (std::size_t r = 0; r < kept_dim; ++r) {
    for (std::size_t c = 0; c < kept_dim; ++c) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < traced_dim; ++t) {
        acc += m(full_index[r * traced_dim + t], full_index[c * traced_dim + t]);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix swap_operator(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d * d);
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      e(i * d + j, j * d + i) = 1.0;
    }
  }
  return e;
}

ComplexVector op_to_vec(const ComplexMatrix& x) {
  ComplexVector v(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  }
  return v;
}

ComplexMatrix vec_to_op(const ComplexVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols) {
    throw DimensionError("vec_to_op: vector of length " + std::to_string(v.size()) +
                         " cannot be reshaped to " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  ComplexMatrix x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) x(i, j) = v(i * cols + j);
  }
  return x;
}

ComplexVector max_entangled(std::size_t d) {
  return op_to_vec(ComplexMatrix::Identity(d, d));
}

HermitianEigen hermitian_eig(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) {
    throw ContractViolation("hermitian_eig: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw ContractViolation("hermitian_eig: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

Svd svd(const ComplexMatrix& m) {
  Eigen::BDCSVD<ComplexMatrix> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

ComplexMatrix psd_factor(const ComplexMatrix& m, double tol, double psd_tol) {
  if (psd_tol < 0) psd_tol = tol;
  if (!is_hermitian(m, psd_tol)) {
    throw ContractViolation("psd_factor: input is not Hermitian");
  }
  const auto n = m.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  const HermitianEigen eig = hermitian_eig(m, psd_tol);
  const double lmax = eig.values(n - 1);
  if (eig.values(0) < -psd_tol * std::max(1.0, std::abs(lmax))) {
    throw ContractViolation("psd_factor: input is not positive semidefinite (lambda_min = " +
                            std::to_string(eig.values(0)) + ")");
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n; i-- > 0;) {
    if (lmax > 0 && eig.values(i) > tol * lmax) keep.push_back(i);
  }
  ComplexMatrix x(static_cast<Eigen::Index>(keep.size()), n);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    x.row(static_cast<Eigen::Index>(r)) =
        std::sqrt(eig.values(keep[r])) * eig.vectors.col(keep[r]).adjoint();
  }
  return x;
}

std::size_t hermitian_rank(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  const RealVector abs_ev = es.eigenvalues().cwiseAbs();
  const double mx = abs_ev.maxCoeff();
  if (mx == 0.0) return 0;
  return static_cast<std::size_t>((abs_ev.array() > tol * mx).count());
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  const RealVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix psd_inv_sqrt(const ComplexMatrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (m + m.adjoint()));
  const RealVector& ev = es.eigenvalues();
  const double mx = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  RealVector s(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    s(i) = (ev(i) > tol * mx && ev(i) > 0) ? 1.0 / std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

SpanAnalysis analyze_span(const std::vector<ComplexMatrix>& ops, double tol) {
  SpanAnalysis out;
  if (ops.empty()) return out;
  const auto rows = ops.front().rows();
  const auto cols = ops.front().cols();
  ComplexMatrix stacked(rows * cols, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (ops[j].rows() != rows || ops[j].cols() != cols) {
      throw DimensionError("span_dimension: operators of different shapes");
    }
    stacked.col(static_cast<Eigen::Index>(j)) = op_to_vec(ops[j]);
  }
  // Reduce via the Gram matrix when it is smaller; same singular values.
  RealVector sv;
  if (stacked.cols() <= stacked.rows()) {
    Eigen::BDCSVD<ComplexMatrix> s(stacked);
    sv = s.singularValues();
  } else {
    Eigen::BDCSVD<ComplexMatrix> s(stacked.adjoint());
    sv = s.singularValues();
  }
  out.singular_values = sv;
  const double smax = sv.size() ? sv(0) : 0.0;
  if (smax == 0.0) return out;
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(sv.size()) &&
         sv(static_cast<Eigen::Index>(rank)) > tol * smax) {
    ++rank;
  }
  out.rank = rank;
  out.last_kept_rel = rank ? sv(static_cast<Eigen::Index>(rank - 1)) / smax : 0.0;
  out.first_dropped_rel = rank < static_cast<std::size_t>(sv.size())
                              ? sv(static_cast<Eigen::Index>(rank)) / smax
                              : 0.0;
  return out;
}

std::size_t span_dimension(const std::vector<ComplexMatrix>& ops, double tol) {
  return analyze_span(ops, tol).rank;
}

std::vector<ComplexMatrix> hermitian_basis(std::size_t n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(n * n);
  const double s = 1.0 / std::sqrt(2.0);
  const auto N = static_cast<Eigen::Index>(n);
  for (Eigen::Index j = 0; j < N; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(N, N);
    e(j, j) = 1.0;
    basis.push_back(std::move(e));
  }
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index l = j + 1; l < N; ++l) {
      ComplexMatrix re = ComplexMatrix::Zero(N, N);
      re(j, l) = s;
      re(l, j) = s;
      basis.push_back(std::move(re));
      ComplexMatrix im = ComplexMatrix::Zero(N, N);
      im(j, l) = Complex(0.0, s);
      im(l, j) = Complex(0.0, -s);
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

RealVector hermitian_coords(const ComplexMatrix& h) {
  const auto n = h.rows();
  RealVector c(n * n);
  Eigen::Index p = 0;
  const double r2 = std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) c(p++) = h(j, j).real();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = j + 1; l < n; ++l) {
      // <B, H> = Tr[B^dagger H]
      c(p++) = r2 * 0.5 * (h(j, l) + h(l, j)).real();
      c(p++) = r2 * 0.5 * (h(j, l) - h(l, j)).imag();
    }
  }
  return c;
}

ComplexMatrix hermitian_from_coords(const RealVector& c, std::size_t n,
                                    Eigen::Index offset) {
  const auto N = static_cast<Eigen::Index>(n);
  ComplexMatrix h = ComplexMatrix::Zero(N, N);
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Index p = offset;
  for (Eigen::Index j = 0; j < N; ++j) h(j, j) = c(p++);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index l = j + 1; l < N; ++l) {
      const double a = c(p++);
      const double b = c(p++);
      h(j, l) += Complex(s * a, s * b);
      h(l, j) += Complex(s * a, -s * b);
    }
  }
  return h;
}

NullDirection smallest_right_singular(const RealMatrix& a) {
  NullDirection out;
  const auto n = a.cols();
  if (n == 0) return out;
  // Work with the n x n Gram-free route: full V from a thin-padded matrix.
  RealMatrix padded = a;
  if (padded.rows() < n) {
    padded.conservativeResize(n, Eigen::NoChange);
    padded.bottomRows(n - a.rows()).setZero();
  }
  Eigen::JacobiSVD<RealMatrix> s(padded, Eigen::ComputeFullV);
  const RealVector& sv = s.singularValues();
  out.vector = s.matrixV().col(n - 1);
  out.sigma_rel = sv(0) > 0 ? sv(n - 1) / sv(0) : 0.0;
  return out;
}

ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix a = random_complex(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  const ComplexMatrix z = random_complex(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double ad = std::abs(d);
    if (ad > 0) q.col(j) *= d / ad;
  }
  return q;
}

}  // namespace covx
