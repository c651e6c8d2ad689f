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

#include "covx/channels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace covx {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t n) { return static_cast<Idx>(n); }

void require_state_on(const ComplexMatrix& m, std::size_t dim, const char* what) {
  if (!is_square(m) || static_cast<std::size_t>(m.rows()) != dim) {
    throw DimensionError(std::string(what) + ": expected a " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " operator, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
}

// Positive factor of one commutant block, thresholded against a global scale.
struct BlockFactor {
  ComplexMatrix x;  // r_k x m_k
};

BlockFactor factor_block(const ComplexMatrix& g, double cutoff) {
  const HermitianEigen eig = hermitian_eig(g, kDefaultTol);
  const Idx m = g.rows();
  Idx r = 0;
  for (Idx i = 0; i < m; ++i) {
    if (eig.values(i) > cutoff) ++r;
  }
  BlockFactor f{ComplexMatrix(r, m)};
  Idx row = 0;
  for (Idx i = m; i-- > 0 && row < r;) {
    f.x.row(row++) = std::sqrt(eig.values(i)) * eig.vectors.col(i).adjoint();
  }
  return f;
}

// Tr_K of Y_k (I (x) M) Y_k^dagger.
ComplexMatrix traced_embed(const IsotypicBlock& b, const ComplexMatrix& m, const TensorShape& s) {
  return partial_trace(block_embed(b, m), s, {0});
}

bool within_feasible(const ComplexMatrix& r, const ComplexMatrix& k_target, const TensorShape& s,
                     const Tolerances& tol) {
  const ComplexMatrix h = 0.5 * (r + r.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  if (ev(0) < -tol.feas_tol * std::max(1.0, std::abs(ev(ev.size() - 1)))) return false;
  return operator_norm(partial_trace(h, s, {0}) - k_target) <= tol.feas_tol;
}

}  // namespace

ChoiOperator::ChoiOperator(ComplexMatrix r, std::size_t dim_in, std::size_t dim_out)
    : r_(std::move(r)), dim_in_(dim_in), dim_out_(dim_out) {
  if (dim_in == 0 || dim_out == 0) throw DimensionError("ChoiOperator: zero dimension");
  if (!is_square(r_) || static_cast<std::size_t>(r_.rows()) != dim_in * dim_out) {
    throw DimensionError("ChoiOperator: R is " + std::to_string(r_.rows()) + "x" +
                         std::to_string(r_.cols()) + ", expected dim_out*dim_in = " +
                         std::to_string(dim_in * dim_out));
  }
}

ChoiOperator choi_from_kraus(const KrausSet& kraus) {
  const std::size_t n = kraus.dim_in * kraus.dim_out;
  ComplexMatrix r = ComplexMatrix::Zero(ix(n), ix(n));
  for (const auto& w : kraus.ops) {
    if (static_cast<std::size_t>(w.rows()) != kraus.dim_out ||
        static_cast<std::size_t>(w.cols()) != kraus.dim_in) {
      throw DimensionError("choi_from_kraus: Kraus operator has the wrong shape");
    }
    const ComplexVector v = op_to_vec(w);
    r.noalias() += v * v.adjoint();
  }
  return ChoiOperator(std::move(r), kraus.dim_in, kraus.dim_out);
}

KrausSet kraus_from_choi(const ChoiOperator& r, double tol) {
  const ComplexMatrix x = psd_factor(r.matrix(), tol, kDefaultFeasTol);
  KrausSet out{{}, r.dim_in(), r.dim_out()};
  for (Idx i = 0; i < x.rows(); ++i) {
    out.ops.push_back(vec_to_op(x.row(i).adjoint(), r.dim_out(), r.dim_in()));
  }
  return out;
}

ComplexMatrix apply_channel(const ChoiOperator& r, const ComplexMatrix& rho) {
  require_state_on(rho, r.dim_in(), "apply_channel");
  const ComplexMatrix lifted =
      kron(ComplexMatrix::Identity(ix(r.dim_out()), ix(r.dim_out())), rho.transpose());
  return partial_trace(lifted * r.matrix(), r.shape(), {1});
}

ComplexMatrix apply_heisenberg(const ChoiOperator& r, const ComplexMatrix& o) {
  require_state_on(o, r.dim_out(), "apply_heisenberg");
  const ComplexMatrix lifted =
      kron(o, ComplexMatrix::Identity(ix(r.dim_in()), ix(r.dim_in())));
  return partial_trace(lifted * r.matrix(), r.shape(), {0}).transpose();
}

std::string to_string(TniVerdict v) {
  switch (v) {
    case TniVerdict::TracePreserving: return "trace_preserving";
    case TniVerdict::TraceNonIncreasing: return "trace_nonincreasing";
    case TniVerdict::Violating: return "violating";
  }
  return "violating";
}

TniCheck check_tni(const ChoiOperator& r, const Tolerances& tol) {
  TniCheck out;
  const ComplexMatrix& m = r.matrix();
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  out.min_eigenvalue_r = ev(0);
  out.completely_positive =
      is_hermitian(m, tol.feas_tol) &&
      ev(0) >= -tol.feas_tol * std::max(1.0, std::abs(ev(ev.size() - 1)));

  out.k = partial_trace(m, r.shape(), {0});
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ek(0.5 * (out.k + out.k.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  out.min_eigenvalue_k = ek.eigenvalues()(0);
  out.max_eigenvalue_k = ek.eigenvalues()(ek.eigenvalues().size() - 1);

  if (!out.completely_positive || out.max_eigenvalue_k > 1.0 + tol.feas_tol) {
    out.verdict = TniVerdict::Violating;
  } else if (operator_norm(out.k - ComplexMatrix::Identity(out.k.rows(), out.k.cols())) <=
             tol.feas_tol) {
    out.verdict = TniVerdict::TracePreserving;
  } else {
    out.verdict = TniVerdict::TraceNonIncreasing;
  }
  return out;
}

Representation choi_representation(const Representation& rep_out, const Representation& rep_in) {
  return tensor(rep_out, conjugate(rep_in));
}

double covariance_check(const ChoiOperator& r, const Representation& rep_kh) {
  if (rep_kh.dim() != r.dim_in() * r.dim_out()) {
    throw DimensionError("covariance_check: representation acts on dimension " +
                         std::to_string(rep_kh.dim()) + ", R on " +
                         std::to_string(r.dim_in() * r.dim_out()));
  }
  return commutator_residual(rep_kh, r.matrix());
}

double covariance_check(const ChoiOperator& r, const Representation& rep_out,
                        const Representation& rep_in) {
  if (rep_out.dim() != r.dim_out() || rep_in.dim() != r.dim_in()) {
    throw DimensionError("covariance_check: representation dimensions do not match R");
  }
  return covariance_check(r, choi_representation(rep_out, rep_in));
}

CovariantChoi covariant_choi(std::vector<ComplexMatrix> w, IsotypicDecomposition dec,
                             std::size_t dim_in, std::size_t dim_out) {
  if (dec.carrier_dim != dim_in * dim_out) {
    throw DimensionError("covariant_choi: decomposition carrier does not match dim_out*dim_in");
  }
  if (w.size() != dec.blocks.size()) {
    throw DimensionError("covariant_choi: " + std::to_string(w.size()) + " blocks given, " +
                         std::to_string(dec.blocks.size()) + " expected");
  }
  const Idx n = ix(dec.carrier_dim);
  ComplexMatrix r = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Idx m = ix(dec.blocks[k].multiplicity);
    if (w[k].rows() != m || w[k].cols() != m) {
      throw DimensionError("covariant_choi: block " + std::to_string(dec.blocks[k].label) +
                           " needs a " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
    }
    r += block_embed(dec.blocks[k], w[k].adjoint() * w[k]);
  }
  r = 0.5 * (r + r.adjoint());
  return CovariantChoi{ChoiOperator(std::move(r), dim_in, dim_out), std::move(dec), std::move(w)};
}

CovariantChoi covariant_from_commutant(const ChoiOperator& r, const IsotypicDecomposition& dec) {
  if (dec.carrier_dim != r.dim_in() * r.dim_out()) {
    throw DimensionError("covariant_from_commutant: decomposition carrier mismatch");
  }
  std::vector<ComplexMatrix> w;
  w.reserve(dec.blocks.size());
  for (const auto& b : dec.blocks) {
    const ComplexMatrix g = block_partial_trace(b, r.matrix()) / static_cast<double>(b.irrep_dim);
    w.push_back(psd_sqrt(0.5 * (g + g.adjoint())));
  }
  return covariant_choi(std::move(w), dec, r.dim_in(), r.dim_out());
}

CovariantChoi project_covariant(const ChoiOperator& r, const Representation& rep_kh,
                                const Tolerances& tol) {
  if (rep_kh.dim() != r.dim_in() * r.dim_out()) {
    throw DimensionError("project_covariant: representation dimension mismatch");
  }
  if (!is_psd(r.matrix(), tol.feas_tol)) {
    throw ContractViolation("project_covariant: R is not positive semidefinite");
  }
  const IsotypicDecomposition dec = isotypic_decompose(rep_kh, tol.tol);
  const ChoiOperator twirled(twirl_via_decomposition(dec, r.matrix()), r.dim_in(), r.dim_out());
  return covariant_from_commutant(twirled, dec);
}

ExtremalityReport qo_extremality(const CovariantChoi& cov, const Tolerances& tol) {
  const ChoiOperator& base = cov.base;
  const TniCheck tni = check_tni(base, tol);
  if (tni.verdict == TniVerdict::Violating) {
    throw ContractViolation("qo_extremality: R is not a trace-nonincreasing CP map");
  }
  const auto& blocks = cov.dec.blocks;
  if (cov.w.size() != blocks.size()) {
    throw DimensionError("qo_extremality: block data does not match the decomposition");
  }

  std::vector<ComplexMatrix> g;
  double scale = 0.0;
  for (const auto& wk : cov.w) {
    g.push_back(wk.adjoint() * wk);
    scale = std::max(scale, operator_norm(g.back()));
  }
  std::vector<BlockFactor> factors;
  for (const auto& gk : g) factors.push_back(factor_block(gk, tol.tol * scale));

  const TensorShape shape = base.shape();
  ExtremalityReport rep;
  std::vector<ComplexMatrix> images;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const ComplexMatrix& x = factors[k].x;
    const auto r = static_cast<std::size_t>(x.rows());
    rep.rank += r;
    rep.span_required += r * r;
    for (Idx a = 0; a < x.rows(); ++a) {
      for (Idx b = 0; b < x.rows(); ++b) {
        images.push_back(traced_embed(blocks[k], x.row(a).adjoint() * x.row(b), shape));
      }
    }
  }
  rep.necessary_bound_ok = rep.span_required <= base.dim_in() * base.dim_in();
  if (images.empty()) {
    rep.is_extremal = true;  // R = 0 is the apex of the cone
    return rep;
  }
  const SpanAnalysis span = analyze_span(images, tol.tol);
  rep.span_achieved = span.rank;
  rep.last_kept_rel = span.last_kept_rel;
  rep.first_dropped_rel = span.first_dropped_rel;
  rep.is_extremal = span.rank == rep.span_required;
  if (rep.is_extremal) return rep;

  // Hermitian kernel of (+)_k O_k -> Tr_K[(+)_k Y_k (I (x) X_k^dagger O_k X_k) Y_k^dagger].
  const std::size_t din = base.dim_in();
  RealMatrix lin(ix(din * din), ix(rep.span_required));
  Idx col = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const ComplexMatrix& x = factors[k].x;
    for (const auto& e : hermitian_basis(static_cast<std::size_t>(x.rows()))) {
      lin.col(col++) = hermitian_coords(traced_embed(blocks[k], x.adjoint() * e * x, shape));
    }
  }
  const NullDirection nd = smallest_right_singular(lin);

  std::vector<ComplexMatrix> o;
  double onorm = 0.0;
  Idx offset = 0;
  for (const auto& f : factors) {
    const auto r = static_cast<std::size_t>(f.x.rows());
    o.push_back(hermitian_from_coords(nd.vector, r, offset));
    offset += ix(r * r);
    if (r > 0) onorm = std::max(onorm, operator_norm(o.back()));
  }
  const Idx n = base.matrix().rows();
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (factors[k].x.rows() == 0) continue;
    s += block_embed(blocks[k], factors[k].x.adjoint() * (o[k] / onorm) * factors[k].x);
  }

  // ||O_k||_op <= 1, so X_k^dagger (I +- t O_k) X_k >= 0 for t < 1.
  double t = 0.5;
  for (int i = 0; i < 60; ++i, t *= 0.5) {
    if (within_feasible(base.matrix() + t * s, tni.k, shape, tol) &&
        within_feasible(base.matrix() - t * s, tni.k, shape, tol)) {
      rep.witness = s;
      rep.witness_step = t;
      break;
    }
  }
  return rep;
}

bool choi_extremality_noncov(const KrausSet& kraus, double tol) {
  std::vector<ComplexMatrix> products;
  products.reserve(kraus.ops.size() * kraus.ops.size());
  for (const auto& wi : kraus.ops) {
    for (const auto& wj : kraus.ops) products.push_back(wi.adjoint() * wj);
  }
  if (products.empty()) return true;
  return span_dimension(products, tol) == kraus.ops.size() * kraus.ops.size();
}

// ---------------------------------------------------------------------------

ComplexVector basis_ket(const std::string& bits) {
  if (bits.empty() || bits.size() > 20) throw ContractViolation("basis_ket: bad length");
  Idx index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ContractViolation("basis_ket: not a bit string: " + bits);
    index = 2 * index + (c - '0');
  }
  ComplexVector v = ComplexVector::Zero(Idx{1} << bits.size());
  v(index) = 1.0;
  return v;
}

ComplexMatrix cloning_fidelity_operator(std::size_t copies) {
  if (copies == 0 || copies > 8) throw ContractViolation("cloning_fidelity_operator: bad copies");
  ComplexMatrix plus(2, 2);
  plus.setConstant(0.5);
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  const Idx n = Idx{1} << (copies + 1);
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (std::size_t s = 0; s < copies; ++s) {
    ComplexMatrix term = ComplexMatrix::Identity(1, 1);
    for (std::size_t j = 0; j < copies; ++j) term = kron(term, j == s ? plus : id2);
    w += kron(term, plus);
  }
  return w / static_cast<double>(copies);
}

Representation cloning_representation(std::size_t copies) {
  if (copies == 0 || copies > 8) throw ContractViolation("cloning_representation: bad copies");
  std::vector<int> out;
  for (unsigned idx = 0; idx < (1u << copies); ++idx) out.push_back(std::popcount(idx));
  return choi_representation(Representation::u1(out), Representation::u1({0, 1}));
}

std::vector<std::string> builtin_names() {
  return {"clone12", "clone13", "depolarizing", "transpose_plus", "transpose_minus"};
}

namespace {

BuiltinExample cloning_example(std::string name, std::size_t copies,
                               const std::vector<ComplexVector>& psis, bool extremal,
                               std::string description) {
  const std::size_t dim_out = std::size_t{1} << copies;
  ComplexMatrix r = ComplexMatrix::Zero(ix(2 * dim_out), ix(2 * dim_out));
  for (const auto& p : psis) r += p * p.adjoint();
  Representation rep = cloning_representation(copies);
  const IsotypicDecomposition dec = isotypic_decompose(rep);
  const ComplexMatrix w = cloning_fidelity_operator(copies);
  const double f = (w * r).trace().real();
  return BuiltinExample{std::move(name),
                        std::move(description),
                        std::move(rep),
                        covariant_from_commutant(ChoiOperator(r, 2, dim_out), dec),
                        extremal,
                        true,
                        w,
                        f};
}

BuiltinExample sud_example(std::string name, std::size_t d, SudVariant variant,
                           const ComplexMatrix& r, std::string description) {
  Representation rep = Representation::su_d_tensor(d, variant);
  const IsotypicDecomposition dec = isotypic_decompose(rep);
  return BuiltinExample{std::move(name),
                        std::move(description),
                        std::move(rep),
                        covariant_from_commutant(ChoiOperator(r, d, d), dec),
                        true,
                        true,
                        std::nullopt,
                        std::nullopt};
}

}  // namespace

BuiltinExample builtin_example(const std::string& name, std::size_t d) {
  if (name == "clone12") {
    const double h = 1.0 / std::sqrt(2.0);
    const ComplexVector psi0 =
        h * (basis_ket("000") + h * basis_ket("011") + h * basis_ket("101"));
    const ComplexVector psi1 =
        h * (basis_ket("111") + h * basis_ket("100") + h * basis_ket("010"));
    // Midpoint of the two economical cloners 2|psi0><psi0| and 2|psi1><psi1|,
    // both trace preserving: optimal but not extremal.
    return cloning_example(name, 2, {psi0, psi1}, false,
                           "optimal phase-covariant 1->2 qubit cloner (rank two)");
  }
  if (name == "clone13") {
    const ComplexVector psi =
        (basis_ket("1000") + basis_ket("0100") + basis_ket("0010") + basis_ket("1101") +
         basis_ket("1011") + basis_ket("0111")) /
        std::sqrt(3.0);
    return cloning_example(name, 3, {psi}, true, "optimal phase-covariant 1->3 qubit cloner (rank one)");
  }
  if (d < 2) throw ContractViolation("builtin_example: d must be at least 2");
  const auto dd = static_cast<double>(d);
  const Idx n = ix(d * d);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if (name == "depolarizing") {
    const ComplexVector phi = max_entangled(d);
    const ComplexMatrix r = dd / (dd * dd - 1.0) * (id - phi * phi.adjoint() / dd);
    return sud_example(name, d, SudVariant::UUstar, r,
                       "SU(d)-covariant channel supported on the non-trivial block");
  }
  if (name == "transpose_plus") {
    return sud_example(name, d, SudVariant::UstarUstar, (id + swap_operator(d)) / (dd + 1.0),
                       "optimal transposition map on the symmetric block");
  }
  if (name == "transpose_minus") {
    return sud_example(name, d, SudVariant::UstarUstar, (id - swap_operator(d)) / (dd - 1.0),
                       "transposition map on the antisymmetric block");
  }
  throw UnknownName("unknown example '" + name + "'");
}

}  // namespace covx
