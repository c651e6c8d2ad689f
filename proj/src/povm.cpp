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

#include "covx/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace covx {

namespace {

void require_carrier(const ComplexMatrix& xi, const IsotypicDecomposition& dec) {
  if (!is_square(xi) || static_cast<std::size_t>(xi.rows()) != dec.carrier_dim) {
    throw DimensionError("seed is " + std::to_string(xi.rows()) + "x" +
                         std::to_string(xi.cols()) + " but the carrier has dimension " +
                         std::to_string(dec.carrier_dim));
  }
}

// Tr_{H_k}(G^dagger B G) for G = X Y_k, an r x (d_k m_k) matrix.
ComplexMatrix pulled_partial_trace(const ComplexMatrix& g, const ComplexMatrix& b,
                                   const IsotypicBlock& blk) {
  return partial_trace(g.adjoint() * b * g, TensorShape{blk.irrep_dim, blk.multiplicity}, {0});
}

}  // namespace

SeedCheck check_seed(const ComplexMatrix& xi, const IsotypicDecomposition& dec,
                     const Tolerances& tol) {
  require_carrier(xi, dec);
  SeedCheck out;
  const bool herm = is_hermitian(xi, tol.feas_tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (xi + xi.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  out.min_eigenvalue = ev(0);
  out.psd = herm && ev(0) >= -tol.feas_tol * std::max(1.0, std::abs(ev(ev.size() - 1)));
  bool blocks_ok = true;
  for (const auto& b : dec.blocks) {
    const auto m = static_cast<Eigen::Index>(b.multiplicity);
    const ComplexMatrix target =
        static_cast<double>(b.irrep_dim) * ComplexMatrix::Identity(m, m);
    const double r = operator_norm(block_partial_trace(b, xi) - target);
    out.block_residuals.push_back(r);
    if (r > tol.feas_tol * std::max(1.0, static_cast<double>(b.irrep_dim))) blocks_ok = false;
  }
  out.feasible = out.psd && blocks_ok;
  return out;
}

PovmSeed make_seed(ComplexMatrix xi, IsotypicDecomposition dec, const Tolerances& tol) {
  const SeedCheck c = check_seed(xi, dec, tol);
  if (!c.feasible) throw ContractViolation("seed violates positivity or block normalization");
  return PovmSeed{std::move(xi), std::move(dec)};
}

ComplexMatrix normalize_seed(const ComplexMatrix& z, const IsotypicDecomposition& dec,
                             double tol) {
  require_carrier(z, dec);
  const auto n = static_cast<Eigen::Index>(dec.carrier_dim);
  ComplexMatrix congruence = ComplexMatrix::Zero(n, n);
  for (const auto& b : dec.blocks) {
    const ComplexMatrix s = block_partial_trace(b, z);
    if (hermitian_rank(s, tol) != b.multiplicity) {
      throw ContractViolation("normalize_seed: block " + std::to_string(b.label) +
                              " has a singular partial trace");
    }
    congruence +=
        block_embed(b, std::sqrt(static_cast<double>(b.irrep_dim)) * psd_inv_sqrt(s, tol));
  }
  const ComplexMatrix out = congruence.adjoint() * z * congruence;
  return 0.5 * (out + out.adjoint());
}

ComplexMatrix density_at(const PovmSeed& seed, const Representation& rep,
                         const GroupElement& g) {
  require_carrier(seed.xi, seed.dec);
  if (rep.dim() != seed.dec.carrier_dim) {
    throw DimensionError("density_at: representation dimension mismatch");
  }
  const ComplexMatrix u = rep.unitary(g);
  return u.adjoint() * seed.xi * u;
}

double probability_density(const PovmSeed& seed, const Representation& rep,
                           const ComplexMatrix& rho, const GroupElement& g, double tol) {
  if (!is_square(rho) || static_cast<std::size_t>(rho.rows()) != rep.dim()) {
    throw DimensionError("probability_density: state dimension mismatch");
  }
  if (!is_psd(rho, tol) || std::abs(rho.trace() - 1.0) > tol * static_cast<double>(rho.rows())) {
    throw ContractViolation("probability_density: rho is not a density matrix");
  }
  return (density_at(seed, rep, g) * rho).trace().real();
}

ComplexMatrix normalization_integral(const ComplexMatrix& xi, const Representation& rep) {
  if (!is_square(xi) || static_cast<std::size_t>(xi.rows()) != rep.dim()) {
    throw DimensionError("normalization_integral: seed dimension mismatch");
  }
  if (std::holds_alternative<SUdTensor>(rep.kind())) {
    return twirl_via_decomposition(isotypic_decompose(rep), xi);
  }
  // sample_unitaries() is the whole group (finite) or the exact quadrature
  // nodes (U(1)); both carry equal weights.
  const auto nodes = rep.sample_unitaries();
  ComplexMatrix acc = ComplexMatrix::Zero(xi.rows(), xi.cols());
  for (const auto& u : nodes) acc.noalias() += u.adjoint() * xi * u;
  return acc / static_cast<double>(nodes.size());
}

bool necessary_rank_bound(const PovmSeed& seed, double tol) {
  const std::size_t r = hermitian_rank(seed.xi, tol);
  return r * r <= seed.dec.sum_multiplicity_squares();
}

ExtremalityReport extremality(const PovmSeed& seed, const Tolerances& tol) {
  const SeedCheck chk = check_seed(seed.xi, seed.dec, tol);
  if (!chk.feasible) throw ContractViolation("extremality: seed is not feasible");

  const ComplexMatrix x = psd_factor(seed.xi, tol.tol, tol.feas_tol);
  const auto r = static_cast<std::size_t>(x.rows());

  ExtremalityReport rep;
  rep.rank = r;
  rep.span_required = r * r;
  rep.necessary_bound_ok = r * r <= seed.dec.sum_multiplicity_squares();

  // Candidates X Y_k (I (x) E_ab) Y_k^dagger X^dagger in sorted (k, a, b) order.
  std::vector<ComplexMatrix> candidates;
  std::vector<ComplexMatrix> pulled;  // X Y_k per block
  for (const auto& b : seed.dec.blocks) {
    const ComplexMatrix g = x * b.isometry;
    pulled.push_back(g);
    const auto d = static_cast<Eigen::Index>(b.irrep_dim);
    const auto m = static_cast<Eigen::Index>(b.multiplicity);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index c = 0; c < m; ++c) {
        ComplexMatrix cand = ComplexMatrix::Zero(x.rows(), x.rows());
        for (Eigen::Index i = 0; i < d; ++i) {
          cand.noalias() += g.col(i * m + a) * g.col(i * m + c).adjoint();
        }
        candidates.push_back(std::move(cand));
      }
    }
  }
  const SpanAnalysis span = analyze_span(candidates, tol.tol);
  rep.span_achieved = span.rank;
  rep.last_kept_rel = span.last_kept_rel;
  rep.first_dropped_rel = span.first_dropped_rel;
  rep.is_extremal = span.rank == rep.span_required;
  if (rep.is_extremal) return rep;

  // Hermitian kernel of B -> {Tr_{H_k}(P_k X^dagger B X P_k)}_k over B on C^r.
  const auto basis = hermitian_basis(r);
  Eigen::Index out_rows = 0;
  for (const auto& b : seed.dec.blocks) out_rows += static_cast<Eigen::Index>(b.multiplicity * b.multiplicity);
  RealMatrix lin(out_rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t p = 0; p < basis.size(); ++p) {
    Eigen::Index row = 0;
    for (std::size_t k = 0; k < seed.dec.blocks.size(); ++k) {
      const RealVector c =
          hermitian_coords(pulled_partial_trace(pulled[k], basis[p], seed.dec.blocks[k]));
      lin.block(row, static_cast<Eigen::Index>(p), c.size(), 1) = c;
      row += c.size();
    }
  }
  const NullDirection nd = smallest_right_singular(lin);
  ComplexMatrix bdir = hermitian_from_coords(nd.vector, r);
  bdir /= operator_norm(bdir);
  const ComplexMatrix theta = x.adjoint() * bdir * x;

  // ||B||_op = 1, so X^dagger (I +- tB) X >= 0 for t < 1.
  double t = 0.5;
  for (int i = 0; i < 60; ++i, t *= 0.5) {
    if (check_seed(seed.xi + t * theta, seed.dec, tol).feasible &&
        check_seed(seed.xi - t * theta, seed.dec, tol).feasible) {
      rep.witness = theta;
      rep.witness_step = t;
      break;
    }
  }
  return rep;
}

bool single_class_extremality(const PovmSeed& seed, double tol) {
  if (seed.dec.blocks.size() != 1) {
    throw ContractViolation("single_class_extremality: decomposition has " +
                            std::to_string(seed.dec.blocks.size()) + " classes");
  }
  require_carrier(seed.xi, seed.dec);
  const IsotypicBlock& blk = seed.dec.blocks.front();
  const HermitianEigen eig = hermitian_eig(seed.xi, std::max(tol, kDefaultFeasTol));
  const auto n = eig.values.size();
  const double lmax = eig.values(n - 1);
  std::vector<ComplexMatrix> w;
  for (Eigen::Index i = n; i-- > 0;) {
    if (lmax <= 0 || eig.values(i) <= tol * lmax) break;
    const ComplexVector chart =
        blk.isometry.adjoint() * (std::sqrt(eig.values(i)) * eig.vectors.col(i));
    w.push_back(vec_to_op(chart, blk.irrep_dim, blk.multiplicity));
  }
  std::vector<ComplexMatrix> products;
  for (const auto& wi : w) {
    for (const auto& wj : w) products.push_back(wi.adjoint() * wj);
  }
  return span_dimension(products, tol) == w.size() * w.size();
}

}  // namespace covx
