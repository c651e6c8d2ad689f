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

#include "covx/reps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace covx {

namespace {

constexpr std::size_t kSuSamples = 8;
constexpr int kDecomposeAttempts = 8;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::ptrdiff_t find_element(const std::vector<ComplexMatrix>& elems,
                            const ComplexMatrix& u, double tol) {
  const double scale = std::max(1.0, std::sqrt(static_cast<double>(u.rows())));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if ((elems[i] - u).norm() <= tol * scale) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

// The element tolerance used for closure checks is looser than the rank
// tolerance: products of listed unitaries accumulate rounding.
double closure_tol(double tol) { return std::max(tol, 1e-12) * 1e3; }

ComplexMatrix group_average(const std::vector<ComplexMatrix>& elems,
                            const ComplexMatrix& z) {
  ComplexMatrix acc = ComplexMatrix::Zero(z.rows(), z.cols());
  for (const auto& u : elems) acc.noalias() += u.adjoint() * z * u;
  return acc / static_cast<double>(elems.size());
}

// Restriction of every group element to the subspace spanned by q's columns.
std::vector<ComplexMatrix> restrict_to(const std::vector<ComplexMatrix>& elems,
                                       const ComplexMatrix& q) {
  std::vector<ComplexMatrix> out;
  out.reserve(elems.size());
  for (const auto& u : elems) out.push_back(q.adjoint() * u * q);
  return out;
}

// Splits the invariant subspace spanned by q into minimal invariant
// subspaces. Eigenspaces of a generic commutant element are irreducible.
void split_invariant(const std::vector<ComplexMatrix>& elems, const ComplexMatrix& q,
                     Rng& rng, double cluster_tol, int depth,
                     std::vector<ComplexMatrix>& out) {
  const auto s = q.cols();
  if (s == 1 || depth > 64) {
    out.push_back(q);
    return;
  }
  const auto local = restrict_to(elems, q);
  const ComplexMatrix c = group_average(local, random_hermitian(s, rng));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (c + c.adjoint()));
  const RealVector& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;  // [begin, end)
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= s; ++i) {
    if (i == s || ev(i) - ev(i - 1) > cluster_tol * scale) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  if (clusters.size() == 1) {
    out.push_back(q);
    return;
  }
  for (const auto& [b, e] : clusters) {
    const ComplexMatrix sub = q * es.eigenvectors().middleCols(b, e - b);
    split_invariant(elems, sub, rng, cluster_tol, depth + 1, out);
  }
}

// Twirled intertwiner from pi_ref to pi_other: M with pi_other(g) M = M pi_ref(g).
ComplexMatrix twirled_intertwiner(const std::vector<ComplexMatrix>& pi_other,
                                  const std::vector<ComplexMatrix>& pi_ref, Rng& rng) {
  const auto d = pi_ref.front().rows();
  const ComplexMatrix t = random_complex(d, d, rng);
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (std::size_t g = 0; g < pi_ref.size(); ++g) {
    acc.noalias() += pi_other[g] * t * pi_ref[g].adjoint();
  }
  return acc / static_cast<double>(pi_ref.size());
}

IsotypicDecomposition decompose_u1(const U1Weights& w) {
  std::map<int, std::vector<Eigen::Index>> classes;
  for (std::size_t j = 0; j < w.weights.size(); ++j) {
    classes[w.weights[j]].push_back(static_cast<Eigen::Index>(j));
  }
  IsotypicDecomposition dec;
  dec.carrier_dim = w.weights.size();
  const auto n = static_cast<Eigen::Index>(dec.carrier_dim);
  for (const auto& [label, idx] : classes) {
    IsotypicBlock b;
    b.label = label;
    b.irrep_dim = 1;
    b.multiplicity = idx.size();
    b.isometry = ComplexMatrix::Zero(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) b.isometry(idx[a], static_cast<Eigen::Index>(a)) = 1.0;
    dec.blocks.push_back(std::move(b));
  }
  return dec;
}

IsotypicDecomposition decompose_sud(const SUdTensor& s) {
  const std::size_t d = s.d;
  const auto n = static_cast<Eigen::Index>(d * d);
  IsotypicDecomposition dec;
  dec.carrier_dim = d * d;
  if (s.variant == SudVariant::UUstar) {
    // k = 0: the invariant line spanned by |I>; k = 1: its complement.
    const ComplexVector phi = max_entangled(d) / std::sqrt(static_cast<double>(d));
    ComplexMatrix seedm(n, n);
    seedm.col(0) = phi;
    seedm.rightCols(n - 1) = ComplexMatrix::Identity(n, n).leftCols(n - 1);
    Eigen::HouseholderQR<ComplexMatrix> qr(seedm);
    const ComplexMatrix q = qr.householderQ();
    IsotypicBlock b0{0, 1, 1, phi};
    IsotypicBlock b1{1, d * d - 1, 1, q.rightCols(n - 1)};
    dec.blocks.push_back(std::move(b0));
    dec.blocks.push_back(std::move(b1));
  } else {
    // k = -1: antisymmetric subspace, k = +1: symmetric subspace.
    const auto na = static_cast<Eigen::Index>(d * (d - 1) / 2);
    const auto ns = static_cast<Eigen::Index>(d * (d + 1) / 2);
    ComplexMatrix ya = ComplexMatrix::Zero(n, na);
    ComplexMatrix ys = ComplexMatrix::Zero(n, ns);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Index ca = 0;
    Eigen::Index cs = 0;
    for (std::size_t i = 0; i < d; ++i) {
      ys(static_cast<Eigen::Index>(i * d + i), cs++) = 1.0;
      for (std::size_t j = i + 1; j < d; ++j) {
        const auto ij = static_cast<Eigen::Index>(i * d + j);
        const auto ji = static_cast<Eigen::Index>(j * d + i);
        ys(ij, cs) = r;
        ys(ji, cs) = r;
        ++cs;
        ya(ij, ca) = r;
        ya(ji, ca) = -r;
        ++ca;
      }
    }
    dec.blocks.push_back(IsotypicBlock{-1, static_cast<std::size_t>(na), 1, ya});
    dec.blocks.push_back(IsotypicBlock{1, static_cast<std::size_t>(ns), 1, ys});
  }
  return dec;
}

IsotypicDecomposition decompose_finite_once(const std::vector<ComplexMatrix>& elems,
                                            std::size_t n, double tol, Rng& rng) {
  const double cluster_tol = std::max(tol, 1e-12) * 100.0;
  std::vector<ComplexMatrix> irreducibles;
  split_invariant(elems, ComplexMatrix::Identity(n, n), rng, cluster_tol, 0, irreducibles);

  struct Class {
    std::vector<ComplexMatrix> ref_pi;
    std::vector<ComplexMatrix> copies;  // aligned bases, n x d each
  };
  std::vector<Class> classes;
  for (const auto& q : irreducibles) {
    const auto pi = restrict_to(elems, q);
    bool placed = false;
    for (auto& cls : classes) {
      if (cls.ref_pi.front().rows() != q.cols()) continue;
      const ComplexMatrix m = twirled_intertwiner(pi, cls.ref_pi, rng);
      const double d = static_cast<double>(q.cols());
      const double c2 = (m.adjoint() * m).trace().real() / d;
      // Schur: M is zero for inequivalent irreps and a multiple of a unitary
      // otherwise; a random T gives |c|^2 of order 1/d.
      if (c2 > cluster_tol) {
        cls.copies.push_back(q * (m / std::sqrt(c2)));
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back(Class{pi, {q}});
  }

  IsotypicDecomposition dec;
  dec.carrier_dim = n;
  int label = 0;
  for (const auto& cls : classes) {
    const auto d = cls.copies.front().cols();
    const auto m = static_cast<Eigen::Index>(cls.copies.size());
    IsotypicBlock b;
    b.label = label++;
    b.irrep_dim = static_cast<std::size_t>(d);
    b.multiplicity = static_cast<std::size_t>(m);
    b.isometry.resize(static_cast<Eigen::Index>(n), d * m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index i = 0; i < d; ++i) b.isometry.col(i * m + a) = cls.copies[a].col(i);
    }
    dec.blocks.push_back(std::move(b));
  }
  return dec;
}

double residual_tol(double tol, std::size_t n) {
  return std::max(tol, 1e-12) * 1e3 * std::max(1.0, static_cast<double>(n));
}

}  // namespace

// ---------------------------------------------------------------------------

GroupElement GroupElement::angle(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  if (r < 0) r += two_pi;
  return GroupElement(r);
}

GroupElement GroupElement::index(std::size_t i) { return GroupElement(i); }

GroupElement GroupElement::su(ComplexMatrix u) {
  if (!is_unitary(u, 1e-8)) throw ContractViolation("GroupElement::su: matrix is not unitary");
  return GroupElement(std::move(u));
}

Representation Representation::u1(std::vector<int> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw DimensionError("u1 representation needs at least one weight");
  return Representation(U1Weights{std::move(weights)}, n);
}

Representation Representation::finite(std::vector<ComplexMatrix> unitaries, double tol) {
  if (unitaries.empty()) throw ContractViolation("finite group: empty element list");
  const auto n = unitaries.front().rows();
  const double ctol = closure_tol(tol);
  for (const auto& u : unitaries) {
    if (u.rows() != n || u.cols() != n) {
      throw DimensionError("finite group: elements of different dimensions");
    }
    if (!is_unitary(u, ctol)) throw ContractViolation("finite group: element is not unitary");
  }
  if (find_element(unitaries, ComplexMatrix::Identity(n, n), ctol) < 0) {
    throw ContractViolation("finite group: identity missing");
  }
  for (const auto& a : unitaries) {
    if (find_element(unitaries, a.adjoint(), ctol) < 0) {
      throw ContractViolation("finite group: not closed under inverses");
    }
    for (const auto& b : unitaries) {
      if (find_element(unitaries, a * b, ctol) < 0) {
        throw ContractViolation("finite group: not closed under products");
      }
    }
  }
  return Representation(FiniteGroup{std::move(unitaries)}, static_cast<std::size_t>(n));
}

Representation Representation::finite_from_generators(const std::vector<ComplexMatrix>& gens,
                                                      double tol, std::size_t max_order) {
  if (gens.empty()) throw ContractViolation("finite group: no generators");
  const auto n = gens.front().rows();
  const double ctol = closure_tol(tol);
  std::vector<ComplexMatrix> elems{ComplexMatrix::Identity(n, n)};
  for (std::size_t frontier = 0; frontier < elems.size(); ++frontier) {
    for (const auto& g : gens) {
      ComplexMatrix p = elems[frontier] * g;
      if (find_element(elems, p, ctol) < 0) {
        elems.push_back(std::move(p));
        if (elems.size() > max_order) {
          throw ContractViolation("finite group: generators exceed the order limit");
        }
      }
    }
  }
  return finite(std::move(elems), tol);
}

Representation Representation::su_d_tensor(std::size_t d, SudVariant variant) {
  if (d < 2) throw DimensionError("su_d_tensor requires d >= 2");
  return Representation(SUdTensor{d, variant}, d * d);
}

std::string Representation::kind_name() const {
  return std::visit(overloaded{[](const U1Weights&) { return std::string("u1_weights"); },
                               [](const FiniteGroup&) { return std::string("finite"); },
                               [](const SUdTensor&) { return std::string("su_d_tensor"); }},
                    kind_);
}

ComplexMatrix Representation::unitary(const GroupElement& g) const {
  return std::visit(
      overloaded{
          [&](const U1Weights& w) -> ComplexMatrix {
            const double* phi = std::get_if<double>(&g.value());
            if (!phi) throw ContractViolation("U(1) representation needs an angle");
            ComplexVector diag(static_cast<Eigen::Index>(w.weights.size()));
            for (std::size_t j = 0; j < w.weights.size(); ++j) {
              diag(static_cast<Eigen::Index>(j)) = std::polar(1.0, w.weights[j] * *phi);
            }
            return diag.asDiagonal();
          },
          [&](const FiniteGroup& f) -> ComplexMatrix {
            const std::size_t* idx = std::get_if<std::size_t>(&g.value());
            if (!idx) throw ContractViolation("finite representation needs an element index");
            if (*idx >= f.unitaries.size()) throw ContractViolation("group element index out of range");
            return f.unitaries[*idx];
          },
          [&](const SUdTensor& s) -> ComplexMatrix {
            const ComplexMatrix* u = std::get_if<ComplexMatrix>(&g.value());
            if (!u) throw ContractViolation("SU(d) representation needs a d x d unitary");
            if (static_cast<std::size_t>(u->rows()) != s.d) {
              throw DimensionError("SU(d) element has the wrong dimension");
            }
            return s.variant == SudVariant::UUstar ? kron(*u, u->conjugate())
                                                   : kron(u->conjugate(), u->conjugate());
          }},
      kind_);
}

std::vector<ComplexMatrix> Representation::sample_unitaries(std::uint64_t seed) const {
  return std::visit(
      overloaded{
          [&](const U1Weights& w) {
            int wmax = 0;
            for (int x : w.weights) wmax = std::max(wmax, std::abs(x));
            const int count = 4 * wmax + 1;
            std::vector<ComplexMatrix> out;
            for (int j = 0; j < count; ++j) {
              out.push_back(unitary(GroupElement::angle(2.0 * std::numbers::pi * j / count)));
            }
            return out;
          },
          [&](const FiniteGroup& f) { return f.unitaries; },
          [&](const SUdTensor& s) {
            Rng rng(seed);
            std::vector<ComplexMatrix> out;
            for (std::size_t j = 0; j < kSuSamples; ++j) {
              out.push_back(unitary(GroupElement::su(random_unitary(s.d, rng))));
            }
            return out;
          }},
      kind_);
}

Representation tensor(const Representation& a, const Representation& b) {
  if (const auto* wa = std::get_if<U1Weights>(&a.kind())) {
    if (const auto* wb = std::get_if<U1Weights>(&b.kind())) {
      std::vector<int> w;
      w.reserve(wa->weights.size() * wb->weights.size());
      for (int x : wa->weights) {
        for (int y : wb->weights) w.push_back(x + y);
      }
      return Representation::u1(std::move(w));
    }
  }
  if (const auto* fa = std::get_if<FiniteGroup>(&a.kind())) {
    if (const auto* fb = std::get_if<FiniteGroup>(&b.kind())) {
      if (fa->unitaries.size() != fb->unitaries.size()) {
        throw UnsupportedCombination("tensor: finite groups of different orders");
      }
      std::vector<ComplexMatrix> prod;
      prod.reserve(fa->unitaries.size());
      for (std::size_t i = 0; i < fa->unitaries.size(); ++i) {
        prod.push_back(kron(fa->unitaries[i], fb->unitaries[i]));
      }
      return Representation::finite(std::move(prod));
    }
  }
  throw UnsupportedCombination("tensor: unsupported combination " + a.kind_name() + " x " +
                               b.kind_name());
}

Representation conjugate(const Representation& r) {
  if (const auto* w = std::get_if<U1Weights>(&r.kind())) {
    std::vector<int> neg;
    for (int x : w->weights) neg.push_back(-x);
    return Representation::u1(std::move(neg));
  }
  if (const auto* f = std::get_if<FiniteGroup>(&r.kind())) {
    std::vector<ComplexMatrix> c;
    for (const auto& u : f->unitaries) c.push_back(u.conjugate());
    return Representation::finite(std::move(c));
  }
  throw UnsupportedCombination("conjugate: not available for " + r.kind_name());
}

std::size_t IsotypicDecomposition::sum_multiplicity_squares() const {
  std::size_t s = 0;
  for (const auto& b : blocks) s += b.multiplicity * b.multiplicity;
  return s;
}

const IsotypicBlock& IsotypicDecomposition::block_by_label(int label) const {
  for (const auto& b : blocks) {
    if (b.label == label) return b;
  }
  throw UnknownName("no isotypic block with label " + std::to_string(label));
}

ComplexMatrix block_partial_trace(const IsotypicBlock& b, const ComplexMatrix& z) {
  if (z.rows() != b.isometry.rows() || z.cols() != b.isometry.rows()) {
    throw DimensionError("block_partial_trace: operator does not act on the carrier");
  }
  const ComplexMatrix local = b.isometry.adjoint() * z * b.isometry;
  return partial_trace(local, TensorShape{b.irrep_dim, b.multiplicity}, {0});
}

ComplexMatrix block_embed(const IsotypicBlock& b, const ComplexMatrix& m) {
  if (static_cast<std::size_t>(m.rows()) != b.multiplicity ||
      static_cast<std::size_t>(m.cols()) != b.multiplicity) {
    throw DimensionError("block_embed: block matrix must be m_k x m_k");
  }
  const auto d = static_cast<Eigen::Index>(b.irrep_dim);
  return b.isometry * kron(ComplexMatrix::Identity(d, d), m) * b.isometry.adjoint();
}

IsotypicDecomposition isotypic_decompose(const Representation& r, double tol,
                                         std::uint64_t seed) {
  if (const auto* w = std::get_if<U1Weights>(&r.kind())) return decompose_u1(*w);
  if (const auto* s = std::get_if<SUdTensor>(&r.kind())) return decompose_sud(*s);

  const auto& elems = std::get<FiniteGroup>(r.kind()).unitaries;
  Rng rng(seed);
  std::vector<double> residuals;
  for (int attempt = 0; attempt < kDecomposeAttempts; ++attempt) {
    IsotypicDecomposition dec = decompose_finite_once(elems, r.dim(), tol, rng);
    std::size_t total = 0;
    for (const auto& b : dec.blocks) total += b.size();
    const DecompositionResiduals res = decomposition_residuals(r, dec);
    residuals.push_back(res.max());
    if (total == r.dim() && res.max() <= residual_tol(tol, r.dim())) return dec;
  }
  throw DecompositionFailed("isotypic_decompose: numerical splitting failed", residuals);
}

ComplexMatrix twirl(const Representation& r, const ComplexMatrix& z) {
  if (static_cast<std::size_t>(z.rows()) != r.dim() || !is_square(z)) {
    throw DimensionError("twirl: operator does not act on the carrier");
  }
  if (const auto* w = std::get_if<U1Weights>(&r.kind())) {
    ComplexMatrix out = z;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      for (Eigen::Index j = 0; j < z.cols(); ++j) {
        if (w->weights[i] != w->weights[j]) out(i, j) = 0.0;
      }
    }
    return out;
  }
  if (const auto* f = std::get_if<FiniteGroup>(&r.kind())) return group_average(f->unitaries, z);
  return twirl_via_decomposition(isotypic_decompose(r), z);
}

ComplexMatrix twirl_via_decomposition(const IsotypicDecomposition& dec,
                                      const ComplexMatrix& z) {
  const auto n = static_cast<Eigen::Index>(dec.carrier_dim);
  if (z.rows() != n || z.cols() != n) {
    throw DimensionError("twirl: operator does not act on the carrier");
  }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& b : dec.blocks) {
    out += block_embed(b, block_partial_trace(b, z) / static_cast<double>(b.irrep_dim));
  }
  return out;
}

double commutator_residual(const Representation& r, const ComplexMatrix& z) {
  if (static_cast<std::size_t>(z.rows()) != r.dim() || !is_square(z)) {
    throw DimensionError("commutator_residual: operator does not act on the carrier");
  }
  double worst = 0.0;
  for (const auto& u : r.sample_unitaries()) worst = std::max(worst, (z * u - u * z).norm());
  return worst;
}

double DecompositionResiduals::max() const { return std::max({isometry, resolution, alignment}); }

DecompositionResiduals decomposition_residuals(const Representation& r,
                                               const IsotypicDecomposition& dec) {
  DecompositionResiduals res;
  const auto n = static_cast<Eigen::Index>(dec.carrier_dim);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& b : dec.blocks) {
    const auto s = static_cast<Eigen::Index>(b.size());
    res.isometry = std::max(
        res.isometry, (b.isometry.adjoint() * b.isometry - ComplexMatrix::Identity(s, s)).norm());
    sum += b.projector();
  }
  res.resolution = (sum - ComplexMatrix::Identity(n, n)).norm();
  for (const auto& u : r.sample_unitaries()) {
    for (const auto& b : dec.blocks) {
      const auto d = static_cast<Eigen::Index>(b.irrep_dim);
      const auto m = static_cast<Eigen::Index>(b.multiplicity);
      const ComplexMatrix local = b.isometry.adjoint() * u * b.isometry;
      // pi_k(g) read off the reference copy a = 0.
      ComplexMatrix pi(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) pi(i, j) = local(i * m, j * m);
      }
      const ComplexMatrix expected = b.isometry * kron(pi, ComplexMatrix::Identity(m, m));
      res.alignment = std::max(res.alignment, (u * b.isometry - expected).norm());
    }
  }
  return res;
}

}  // namespace covx
