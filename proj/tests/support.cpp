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

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>

#include "covx/errors.hpp"

namespace covx::testing {

namespace {

using Idx = Eigen::Index;

ComplexMatrix perm_matrix(const std::vector<int>& p) {
  const Idx n = static_cast<Idx>(p.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Idx i = 0; i < n; ++i) m(p[static_cast<std::size_t>(i)], i) = 1.0;
  return m;
}

// Left regular representation from a multiplication table given as a list of
// matrices in some faithful representation.
std::vector<ComplexMatrix> regular_from(const std::vector<ComplexMatrix>& elems) {
  const std::size_t n = elems.size();
  auto find = [&](const ComplexMatrix& m) {
    for (std::size_t k = 0; k < n; ++k) {
      if ((elems[k] - m).norm() < 1e-9) return static_cast<int>(k);
    }
    return -1;
  };
  std::vector<ComplexMatrix> out;
  for (std::size_t g = 0; g < n; ++g) {
    std::vector<int> perm(n);
    for (std::size_t h = 0; h < n; ++h) perm[h] = find(elems[g] * elems[h]);
    out.push_back(perm_matrix(perm));
  }
  return out;
}

}  // namespace

std::vector<ComplexMatrix> s3_permutation_matrices() {
  std::vector<int> p{0, 1, 2};
  std::vector<ComplexMatrix> out;
  do {
    out.push_back(perm_matrix(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<ComplexMatrix> s3_regular() { return regular_from(s3_permutation_matrices()); }

std::vector<ComplexMatrix> z4_regular() {
  std::vector<ComplexMatrix> out;
  for (int k = 0; k < 4; ++k) out.push_back(perm_matrix({k % 4, (k + 1) % 4, (k + 2) % 4, (k + 3) % 4}));
  return out;
}

std::vector<ComplexMatrix> pauli_group() {
  const Complex i(0.0, 1.0);
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  std::vector<ComplexMatrix> out;
  for (const auto& p : {id, x, y, z}) {
    Complex phase = 1.0;
    for (int k = 0; k < 4; ++k, phase *= i) out.push_back(phase * p);
  }
  return out;
}

std::vector<ComplexMatrix> weyl_heisenberg(std::size_t d) {
  const Idx n = static_cast<Idx>(d);
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(d));
  ComplexMatrix x = ComplexMatrix::Zero(n, n), z = ComplexMatrix::Zero(n, n);
  for (Idx j = 0; j < n; ++j) {
    x((j + 1) % n, j) = 1.0;
    z(j, j) = std::pow(w, static_cast<double>(j));
  }
  std::vector<ComplexMatrix> out;
  ComplexMatrix xa = ComplexMatrix::Identity(n, n);
  for (Idx a = 0; a < n; ++a, xa = x * xa) {
    ComplexMatrix zb = ComplexMatrix::Identity(n, n);
    for (Idx b = 0; b < n; ++b, zb = z * zb) {
      for (Idx k = 0; k < n; ++k) out.push_back(std::pow(w, static_cast<double>(k)) * xa * zb);
    }
  }
  return out;
}

std::vector<ComplexMatrix> amplified(const std::vector<ComplexMatrix>& group, std::size_t m,
                                     Rng& rng) {
  const Idx mm = static_cast<Idx>(m);
  const ComplexMatrix v = random_unitary(static_cast<std::size_t>(group.front().rows()) * m, rng);
  std::vector<ComplexMatrix> out;
  for (const auto& u : group) out.push_back(v * kron(u, ComplexMatrix::Identity(mm, mm)) * v.adjoint());
  return out;
}

ComplexMatrix partial_trace_oracle(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                   const std::vector<std::size_t>& traced) {
  const std::size_t nf = dims.size();
  std::vector<bool> is_traced(nf, false);
  for (auto t : traced) is_traced[t] = true;
  std::size_t total = 1, kept = 1;
  for (std::size_t f = 0; f < nf; ++f) {
    total *= dims[f];
    if (!is_traced[f]) kept *= dims[f];
  }
  auto digits = [&](std::size_t idx) {
    std::vector<std::size_t> dg(nf);
    for (std::size_t f = nf; f-- > 0;) {
      dg[f] = idx % dims[f];
      idx /= dims[f];
    }
    return dg;
  };
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Idx>(kept), static_cast<Idx>(kept));
  for (std::size_t r = 0; r < total; ++r) {
    const auto dr = digits(r);
    for (std::size_t c = 0; c < total; ++c) {
      const auto dc = digits(c);
      bool diag = true;
      std::size_t kr = 0, kc = 0;
      for (std::size_t f = 0; f < nf; ++f) {
        if (is_traced[f]) {
          if (dr[f] != dc[f]) diag = false;
        } else {
          kr = kr * dims[f] + dr[f];
          kc = kc * dims[f] + dc[f];
        }
      }
      if (diag) out(static_cast<Idx>(kr), static_cast<Idx>(kc)) += m(static_cast<Idx>(r), static_cast<Idx>(c));
    }
  }
  return out;
}

ComplexMatrix kraus_apply(const KrausSet& k, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Idx>(k.dim_out), static_cast<Idx>(k.dim_out));
  for (const auto& w : k.ops) out += w * rho * w.adjoint();
  return out;
}

ComplexMatrix random_density(std::size_t n, Rng& rng) {
  const ComplexMatrix a = random_complex(n, n, rng);
  const ComplexMatrix p = a * a.adjoint();
  return p / p.trace().real();
}

ComplexMatrix random_psd(std::size_t n, std::size_t rank, Rng& rng) {
  const ComplexMatrix a = random_complex(n, rank, rng);
  return a * a.adjoint();
}

KrausSet random_tp_kraus(std::size_t dim_in, std::size_t dim_out, std::size_t r, Rng& rng) {
  // Sum W^dagger W has rank at most r * dim_out and must be invertible.
  if (r * dim_out < dim_in) throw ContractViolation("random_tp_kraus: r * dim_out < dim_in");
  KrausSet k{{}, dim_in, dim_out};
  const Idx din = static_cast<Idx>(dim_in);
  ComplexMatrix sum = ComplexMatrix::Zero(din, din);
  for (std::size_t i = 0; i < r; ++i) {
    k.ops.push_back(random_complex(dim_out, dim_in, rng));
    sum += k.ops.back().adjoint() * k.ops.back();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum);
  const ComplexMatrix inv_sqrt = es.eigenvectors() *
                                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                 es.eigenvectors().adjoint();
  for (auto& w : k.ops) w = w * inv_sqrt;
  return k;
}

ComplexMatrix random_feasible_seed(const IsotypicDecomposition& dec, std::size_t rank, Rng& rng) {
  return normalize_seed(random_psd(dec.carrier_dim, rank, rng), dec);
}

ComplexMatrix group_average(const std::vector<ComplexMatrix>& group, const ComplexMatrix& z) {
  ComplexMatrix acc = ComplexMatrix::Zero(z.rows(), z.cols());
  for (const auto& u : group) acc += u.adjoint() * z * u;
  return acc / static_cast<double>(group.size());
}

std::vector<TableInstance> clone12_table_instances() {
  auto k = [](const char* s) { return basis_ket(s); };
  auto proj = [](const ComplexVector& v) -> ComplexMatrix { return v * v.adjoint(); };
  const Complex i(0.0, 1.0);
  std::vector<TableInstance> out;

  // Fixed rows have no parameters; they are repeated so every row gets three
  // settings (the one admissible setting, up to phases).
  for (Complex ph : {Complex(1.0), i, -Complex(1.0)}) {
    out.push_back({"{-1,2}", proj(ph * k("001")) + proj(k("110"))});
    out.push_back({"{0}", proj(ph * (k("101") + k("011")) / std::sqrt(2.0)) + proj(k("000"))});
    out.push_back({"{1}", proj(ph * (k("010") + k("100")) / std::sqrt(2.0)) + proj(k("111"))});
  }

  // {0,1}: |a|^2 + |b'|^2 + |c'|^2 = 1 and |a'|^2 + |b|^2 + |c|^2 = 1.
  struct P01 {
    Complex a, b, c, a2, b2, c2;
  };
  for (const P01& p : {P01{1.0 / std::sqrt(2.0), 0.5, 0.5, 1.0 / std::sqrt(2.0), 0.5, 0.5},
                       P01{0.6, 0.8 * i / std::sqrt(2.0), 0.8 / std::sqrt(2.0), 0.6, 0.8, 0.0},
                       P01{std::sqrt(0.2), std::sqrt(0.3), -std::sqrt(0.2) * i, std::sqrt(0.5),
                           std::sqrt(0.5) * i, std::sqrt(0.3)}}) {
    out.push_back({"{0,1}", proj(p.a * k("000") + p.b * k("011") + p.c * k("101")) +
                                proj(p.a2 * k("111") + p.b2 * k("100") + p.c2 * k("010"))});
  }

  // {0,-1}: |a|^2 + |b|^2 + |c|^2 = 1.
  for (auto [a, b, c] : {std::tuple<Complex, Complex, Complex>{0.6, 0.8, 0.0},
                         {0.5, 0.5 * i, std::sqrt(0.5)},
                         {0.0, 0.0, 1.0}}) {
    out.push_back({"{0,-1}", proj(k("000") + a * k("011") + b * k("101")) + proj(c * k("001"))});
  }

  // {1,-1}: |a|^2 + |b|^2 = 1 and |c|^2 + |d|^2 = 1.
  for (auto [a, b, c, d] : {std::tuple<Complex, Complex, Complex, Complex>{1.0, 0.0, 0.6, 0.8},
                            {0.6, 0.8 * i, 1.0, 0.0},
                            {std::sqrt(0.5), -std::sqrt(0.5), std::sqrt(0.5) * i, std::sqrt(0.5)}}) {
    out.push_back({"{1,-1}", proj(a * k("100") + b * k("010") + c * k("111")) + proj(d * k("001"))});
  }

  // {1,2}: |a|^2 + |b|^2 + |d|^2 = 1.
  for (auto [a, b, d] : {std::tuple<Complex, Complex, Complex>{0.6, 0.8, 0.0},
                         {0.5, 0.5 * i, std::sqrt(0.5)},
                         {0.0, 0.0, 1.0}}) {
    out.push_back({"{1,2}", proj(a * k("100") + b * k("010") + k("111")) + proj(d * k("110"))});
  }

  // {0,2}: |a|^2 + |d|^2 = 1 and |b|^2 + |c|^2 = 1.
  for (auto [a, b, c, d] : {std::tuple<Complex, Complex, Complex, Complex>{1.0, 0.6, 0.8, 0.0},
                            {0.6, 1.0, 0.0, 0.8 * i},
                            {std::sqrt(0.5), std::sqrt(0.5) * i, std::sqrt(0.5), -std::sqrt(0.5)}}) {
    out.push_back({"{0,2}", proj(a * k("000") + b * k("011") + c * k("101")) + proj(d * k("110"))});
  }
  return out;
}

}  // namespace covx::testing
