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

#include "covx/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

namespace covx {

namespace {

using Idx = Eigen::Index;
using Blocks = std::vector<ComplexMatrix>;

Idx ix(std::size_t n) { return static_cast<Idx>(n); }

double block_dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].adjoint() * b[k]).trace().real();
  return s;
}

double block_norm(const Blocks& a) { return std::sqrt(std::max(0.0, block_dot(a, a))); }

Blocks block_axpy(const Blocks& x, double t, const Blocks& y) {
  Blocks out = x;
  for (std::size_t k = 0; k < x.size(); ++k) out[k] += t * y[k];
  return out;
}

Blocks block_diff(const Blocks& a, const Blocks& b) { return block_axpy(a, -1.0, b); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix clip_psd(const ComplexMatrix& m) {
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  const RealVector lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// The feasible set in block coordinates: every block PSD and A(blocks) = b.
// POVM seeds use a single n x n block; channels use the commutant blocks G_k
// with R = (+)_k Y_k (I (x) G_k) Y_k^dagger.
class BlockProblem {
 public:
  explicit BlockProblem(const ConvexSetSpec& set) : set_(set) {
    if (set.kind == ConvexSetSpec::Kind::PovmSeeds) {
      sizes_ = {ix(set.dec.carrier_dim)};
    } else {
      for (const auto& b : set.dec.blocks) sizes_.push_back(ix(b.multiplicity));
    }
    for (Idx s : sizes_) params_ += s * s;
    build_constraint();
  }

  const std::vector<Idx>& sizes() const { return sizes_; }

  Blocks to_blocks(const ComplexMatrix& z) const {
    if (set_.kind == ConvexSetSpec::Kind::PovmSeeds) return {hermitian_part(z)};
    Blocks out;
    for (const auto& b : set_.dec.blocks) {
      out.push_back(hermitian_part(block_partial_trace(b, z)) / static_cast<double>(b.irrep_dim));
    }
    return out;
  }

  ComplexMatrix to_ambient(const Blocks& g) const {
    if (set_.kind == ConvexSetSpec::Kind::PovmSeeds) return g.front();
    const Idx n = ix(set_.dec.carrier_dim);
    ComplexMatrix r = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < g.size(); ++k) r += block_embed(set_.dec.blocks[k], g[k]);
    return hermitian_part(r);
  }

  /// Cost in block coordinates: Tr[W Z] = sum_k Re Tr[C_k G_k].
  Blocks cost(const ComplexMatrix& w) const {
    if (set_.kind == ConvexSetSpec::Kind::PovmSeeds) return {hermitian_part(w)};
    Blocks out;
    for (const auto& b : set_.dec.blocks) out.push_back(hermitian_part(block_partial_trace(b, w)));
    return out;
  }

  RealVector coords(const Blocks& g) const {
    RealVector c(params_);
    Idx off = 0;
    for (const auto& gk : g) {
      const RealVector ck = hermitian_coords(gk);
      c.segment(off, ck.size()) = ck;
      off += ck.size();
    }
    return c;
  }

  Blocks from_coords(const RealVector& c) const {
    Blocks out;
    Idx off = 0;
    for (Idx s : sizes_) {
      out.push_back(hermitian_from_coords(c, static_cast<std::size_t>(s), off));
      off += s * s;
    }
    return out;
  }

  RealVector constraint(const Blocks& g) const { return a_ * coords(g); }
  double affine_residual(const Blocks& g) const { return (constraint(g) - b_).norm(); }

  Blocks project_affine(const Blocks& g) const {
    if (set_.kind == ConvexSetSpec::Kind::PovmSeeds) {
      // A A^* = d_k on block k, so the correction is block-diagonal in closed form.
      ComplexMatrix xi = g.front();
      for (const auto& b : set_.dec.blocks) {
        const auto m = ix(b.multiplicity);
        const ComplexMatrix excess = block_partial_trace(b, g.front()) -
                                     static_cast<double>(b.irrep_dim) * ComplexMatrix::Identity(m, m);
        xi -= block_embed(b, excess / static_cast<double>(b.irrep_dim));
      }
      return {hermitian_part(xi)};
    }
    const RealVector c = coords(g);
    return from_coords(c - pinv_ * (a_ * c - b_));
  }

  Blocks project_psd(const Blocks& g) const {
    Blocks out;
    for (const auto& gk : g) out.push_back(clip_psd(gk));
    return out;
  }

  double psd_violation(const Blocks& g) const {
    double v = 0.0;
    for (const auto& gk : g) v = std::max(v, -min_eigenvalue(gk));
    return v;
  }

  /// Face of the feasible set through g: G_k = V_k H_k V_k^dagger with V_k
  /// spanning the numerical support of G_k.
  struct Face {
    std::vector<ComplexMatrix> v;  // m_k x r_k
    std::vector<ComplexMatrix> h;  // r_k x r_k
    RealMatrix a;                  // constraint map on the face coordinates
    RealVector coords;             // current point in face coordinates
  };

  Face face_of(const Blocks& g, double tol) const {
    double scale = 0.0;
    for (const auto& gk : g) scale = std::max(scale, operator_norm(gk));
    Face f;
    Idx params = 0;
    for (const auto& gk : g) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(gk));
      std::vector<Idx> keep;
      for (Idx i = 0; i < gk.rows(); ++i) {
        if (scale > 0.0 && es.eigenvalues()(i) > tol * scale) keep.push_back(i);
      }
      ComplexMatrix v(gk.rows(), ix(keep.size()));
      for (std::size_t j = 0; j < keep.size(); ++j) v.col(ix(j)) = es.eigenvectors().col(keep[j]);
      f.h.push_back(hermitian_part(v.adjoint() * gk * v));
      f.v.push_back(std::move(v));
      params += ix(keep.size() * keep.size());
    }
    f.a.resize(a_.rows(), params);
    f.coords.resize(params);
    Idx col = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const RealVector hk = hermitian_coords(f.h[k]);
      f.coords.segment(col, hk.size()) = hk;
      for (const auto& e : hermitian_basis(static_cast<std::size_t>(f.v[k].cols()))) {
        Blocks unit;
        for (std::size_t j = 0; j < g.size(); ++j) {
          unit.push_back(j == k ? ComplexMatrix(f.v[k] * e * f.v[k].adjoint())
                                : ComplexMatrix::Zero(sizes_[j], sizes_[j]));
        }
        f.a.col(col++) = constraint(unit);
      }
    }
    return f;
  }

  /// Reduced blocks H_k from face coordinates.
  std::vector<ComplexMatrix> reduced(const Face& f, const RealVector& c) const {
    std::vector<ComplexMatrix> out;
    Idx off = 0;
    for (const auto& v : f.v) {
      const auto r = static_cast<std::size_t>(v.cols());
      out.push_back(hermitian_from_coords(c, r, off));
      off += ix(r * r);
    }
    return out;
  }

  Blocks lift(const Face& f, const std::vector<ComplexMatrix>& h) const {
    Blocks out;
    for (std::size_t k = 0; k < f.v.size(); ++k) {
      out.push_back(hermitian_part(f.v[k] * h[k] * f.v[k].adjoint()));
    }
    return out;
  }

  /// Least-squares solution of the affine constraint on the face through g.
  std::optional<Blocks> snap_to_face(const Blocks& g, double tol, double feas_tol) const {
    const Face f = face_of(g, tol);
    if (f.coords.size() == 0) return std::nullopt;
    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(f.a);
    cod.setThreshold(1e-12);
    const RealVector c = f.coords - cod.solve(f.a * f.coords - b_);
    const auto h = reduced(f, c);
    for (const auto& hk : h) {
      if (hk.size() > 0 && min_eigenvalue(hk) < -feas_tol) return std::nullopt;
    }
    Blocks out = lift(f, h);
    if (affine_residual(out) > feas_tol * 1e-2) return std::nullopt;
    return out;
  }

  /// Moves along face directions with non-negative objective slope until the
  /// support shrinks, until the face is a single point. Returns the vertex
  /// reached (or nullopt if a step left the feasible set numerically).
  std::optional<Blocks> walk_to_vertex(Blocks g, const Blocks& cost, double tol,
                                       double feas_tol) const {
    for (int step = 0; step < 256; ++step) {
      const Face f = face_of(g, tol);
      const Idx p = f.coords.size();
      if (p == 0) return g;
      Eigen::JacobiSVD<RealMatrix> svd(f.a, Eigen::ComputeFullV);
      const RealVector& sv = svd.singularValues();
      const double smax = sv.size() > 0 ? sv(0) : 0.0;
      Idx rank = 0;
      for (Idx i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-10 * std::max(1.0, smax)) ++rank;
      }
      if (rank == p) return g;
      RealVector dir = svd.matrixV().col(p - 1);
      auto dh = reduced(f, dir);
      double slope = 0.0;
      for (std::size_t k = 0; k < f.v.size(); ++k) {
        slope += (f.v[k].adjoint() * cost[k] * f.v[k] * dh[k]).trace().real();
      }
      if (slope < 0.0) {
        for (auto& d : dh) d = -d;
      }
      // Largest t with H_k + t D_k >= 0 for all k.
      double lam = 0.0;
      for (std::size_t k = 0; k < f.v.size(); ++k) {
        if (f.h[k].size() == 0) continue;
        const ComplexMatrix s = psd_inv_sqrt(f.h[k], 1e-14);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(-(s * dh[k] * s)),
                                                        Eigen::EigenvaluesOnly);
        lam = std::max(lam, es.eigenvalues()(es.eigenvalues().size() - 1));
      }
      if (lam <= 0.0) return std::nullopt;  // unbounded face: not a compact set
      std::vector<ComplexMatrix> h = f.h;
      for (std::size_t k = 0; k < h.size(); ++k) h[k] += dh[k] / lam;
      g = lift(f, h);
      auto snapped = snap_to_face(g, tol, feas_tol);
      if (!snapped) return std::nullopt;
      g = std::move(*snapped);
    }
    return std::nullopt;
  }

  const RealVector& target() const { return b_; }

 private:
  void build_constraint() {
    Idx rows = 0;
    std::vector<RealVector> cols;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      for (const auto& e : hermitian_basis(static_cast<std::size_t>(sizes_[k]))) {
        Blocks unit;
        for (std::size_t j = 0; j < sizes_.size(); ++j) {
          unit.push_back(j == k ? e : ComplexMatrix::Zero(sizes_[j], sizes_[j]));
        }
        cols.push_back(apply_map(unit));
        rows = cols.back().size();
      }
    }
    a_.resize(rows, params_);
    for (Idx c = 0; c < params_; ++c) a_.col(c) = cols[static_cast<std::size_t>(c)];

    if (set_.kind == ConvexSetSpec::Kind::PovmSeeds) {
      b_.resize(rows);
      Idx off = 0;
      for (const auto& b : set_.dec.blocks) {
        const auto m = ix(b.multiplicity);
        const RealVector c =
            hermitian_coords(static_cast<double>(b.irrep_dim) * ComplexMatrix::Identity(m, m));
        b_.segment(off, c.size()) = c;
        off += c.size();
      }
    } else {
      b_ = hermitian_coords(hermitian_part(set_.target_k));
      Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(a_);
      cod.setThreshold(1e-12);
      pinv_ = cod.pseudoInverse();
    }
  }

  RealVector apply_map(const Blocks& g) const {
    if (set_.kind == ConvexSetSpec::Kind::PovmSeeds) {
      std::vector<RealVector> parts;
      Idx total = 0;
      for (const auto& b : set_.dec.blocks) {
        parts.push_back(hermitian_coords(hermitian_part(block_partial_trace(b, g.front()))));
        total += parts.back().size();
      }
      RealVector out(total);
      Idx off = 0;
      for (const auto& p : parts) {
        out.segment(off, p.size()) = p;
        off += p.size();
      }
      return out;
    }
    const TensorShape shape{set_.dim_out, set_.dim_in};
    return hermitian_coords(hermitian_part(partial_trace(to_ambient(g), shape, {0})));
  }

  const ConvexSetSpec& set_;
  std::vector<Idx> sizes_;
  Idx params_ = 0;
  RealMatrix a_;
  RealVector b_;
  RealMatrix pinv_;
};

Blocks dykstra(const BlockProblem& p, const Blocks& start, const OptimizerConfig& cfg) {
  const double target = cfg.tol.feas_tol * 1e-2;
  Blocks x = p.project_affine(start);
  if (p.psd_violation(x) <= target) return x;
  Blocks dp(x.size()), dq(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    dp[k] = ComplexMatrix::Zero(x[k].rows(), x[k].cols());
    dq[k] = dp[k];
  }
  double violation = 0.0;
  for (std::size_t it = 0; it < cfg.max_projection_iterations; ++it) {
    const Blocks y = p.project_psd(block_axpy(x, 1.0, dp));
    dp = block_diff(block_axpy(x, 1.0, dp), y);
    const Blocks xn = p.project_affine(block_axpy(y, 1.0, dq));
    dq = block_diff(block_axpy(y, 1.0, dq), xn);
    const double step = block_norm(block_diff(xn, x));
    x = xn;
    violation = p.psd_violation(x);
    if (violation <= target && step <= target) return x;
  }
  if (violation <= cfg.tol.feas_tol) return x;
  throw ProjectionFailed("feasibility projection stalled", violation);
}

struct RunOutcome {
  Blocks best;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

RunOutcome ascend(const BlockProblem& p, const Blocks& cost, Blocks z, const OptimizerConfig& cfg) {
  double cnorm = 0.0;
  for (const auto& c : cost) cnorm = std::max(cnorm, operator_norm(c));
  RunOutcome out{z, block_dot(cost, z), 0, true};
  if (cnorm == 0.0) return out;
  const double eta = 1.0 / cnorm;

  std::deque<double> history{out.value};
  out.converged = false;
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    z = dykstra(p, block_axpy(z, eta, cost), cfg);
    const double v = block_dot(cost, z);
    out.iterations = it;
    if (v > out.value) {
      out.value = v;
      out.best = z;
    }
    history.push_back(v);
    if (history.size() > cfg.stall_window + 1) history.pop_front();
    if (history.size() == cfg.stall_window + 1) {
      double spread = 0.0;
      for (double h : history) spread = std::max(spread, std::abs(h - v));
      if (spread <= cfg.stall_rel_change * std::max(1.0, std::abs(v))) {
        out.converged = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace

ConvexSetSpec ConvexSetSpec::povm_seeds(IsotypicDecomposition dec) {
  ConvexSetSpec s;
  s.kind = Kind::PovmSeeds;
  s.dec = std::move(dec);
  return s;
}

ConvexSetSpec ConvexSetSpec::covariant_channels(IsotypicDecomposition dec, std::size_t dim_in,
                                                std::size_t dim_out, ComplexMatrix k) {
  if (dec.carrier_dim != dim_in * dim_out) {
    throw DimensionError("covariant_channels: decomposition carrier does not match dim_out*dim_in");
  }
  if (!is_square(k) || static_cast<std::size_t>(k.rows()) != dim_in) {
    throw DimensionError("covariant_channels: target K must be dim_in x dim_in");
  }
  ConvexSetSpec s;
  s.kind = Kind::CovariantChannels;
  s.dec = std::move(dec);
  s.target_k = std::move(k);
  s.dim_in = dim_in;
  s.dim_out = dim_out;
  const ComplexMatrix r0 = s.canonical_point();
  const TensorShape shape{dim_out, dim_in};
  if (!is_psd(r0) ||
      operator_norm(partial_trace(r0, shape, {0}) - s.target_k) > kDefaultFeasTol) {
    throw ContractViolation("covariant_channels: no covariant operator has the requested Tr_K");
  }
  return s;
}

ConvexSetSpec ConvexSetSpec::trace_preserving_channels(IsotypicDecomposition dec,
                                                       std::size_t dim_in, std::size_t dim_out) {
  return covariant_channels(std::move(dec), dim_in, dim_out,
                            ComplexMatrix::Identity(ix(dim_in), ix(dim_in)));
}

ComplexMatrix ConvexSetSpec::canonical_point() const {
  const Idx n = ix(dec.carrier_dim);
  if (kind == Kind::PovmSeeds) return ComplexMatrix::Identity(n, n);
  const ComplexMatrix flat =
      kron(ComplexMatrix::Identity(ix(dim_out), ix(dim_out)), target_k) / static_cast<double>(dim_out);
  return twirl_via_decomposition(dec, flat);
}

bool ConvexSetSpec::is_feasible(const ComplexMatrix& z, const Tolerances& tol) const {
  if (!is_square(z) || static_cast<std::size_t>(z.rows()) != dec.carrier_dim) return false;
  if (!is_hermitian(z, tol.feas_tol)) return false;
  const double scale = std::max(1.0, operator_norm(z));
  if (min_eigenvalue(z) < -tol.feas_tol * scale) return false;
  if (kind == Kind::PovmSeeds) {
    for (const auto& b : dec.blocks) {
      const auto m = ix(b.multiplicity);
      const double d = static_cast<double>(b.irrep_dim);
      if (operator_norm(block_partial_trace(b, z) - d * ComplexMatrix::Identity(m, m)) >
          tol.feas_tol * std::max(1.0, d)) {
        return false;
      }
    }
    return true;
  }
  const TensorShape shape{dim_out, dim_in};
  if (operator_norm(partial_trace(z, shape, {0}) - target_k) > tol.feas_tol) return false;
  return operator_norm(twirl_via_decomposition(dec, z) - z) <= tol.feas_tol * scale;
}

ComplexMatrix project_feasible(const ComplexMatrix& z, const ConvexSetSpec& set,
                               const OptimizerConfig& cfg) {
  if (!is_square(z) || static_cast<std::size_t>(z.rows()) != set.dec.carrier_dim) {
    throw DimensionError("project_feasible: operand does not act on the carrier");
  }
  if (!is_hermitian(z, cfg.tol.feas_tol)) {
    throw ContractViolation("project_feasible: operand is not Hermitian");
  }
  const BlockProblem p(set);
  return p.to_ambient(dykstra(p, p.to_blocks(z), cfg));
}

OptimizeResult maximize_linear(const ComplexMatrix& w, const ConvexSetSpec& set,
                               const OptimizerConfig& cfg) {
  if (!is_square(w) || static_cast<std::size_t>(w.rows()) != set.dec.carrier_dim) {
    throw DimensionError("maximize_linear: cost does not act on the carrier");
  }
  if (!is_hermitian(w, cfg.tol.tol)) throw ContractViolation("maximize_linear: cost is not Hermitian");

  const BlockProblem p(set);
  const Blocks cost = p.cost(w);
  const Blocks start = p.to_blocks(set.canonical_point());
  Rng rng(cfg.seed);

  OptimizeResult best;
  bool have = false;
  const std::size_t runs = std::max<std::size_t>(1, cfg.restarts);
  for (std::size_t r = 0; r < runs; ++r) {
    Blocks init = start;
    if (r > 0) {
      const double scale = std::max(1.0, block_norm(start));
      for (auto& b : init) {
        const ComplexMatrix h = random_hermitian(static_cast<std::size_t>(b.rows()), rng);
        b += scale * h / std::max(1.0, h.norm());
      }
      init = dykstra(p, init, cfg);
    }
    RunOutcome run = ascend(p, cost, init, cfg);
    bool polished = false;
    if (cfg.polish) {
      const double support_tol = std::sqrt(cfg.tol.tol) * 1e-2;
      const double floor = run.value - 1e-9 * std::max(1.0, std::abs(run.value));
      if (auto snapped = p.snap_to_face(run.best, support_tol, cfg.tol.feas_tol)) {
        if (block_dot(cost, *snapped) >= floor) {
          run.best = std::move(*snapped);
          run.value = block_dot(cost, run.best);
        }
      }
      if (auto vertex = p.walk_to_vertex(run.best, cost, support_tol, cfg.tol.feas_tol)) {
        if (block_dot(cost, *vertex) >= floor) {
          run.best = std::move(*vertex);
          run.value = block_dot(cost, run.best);
          polished = true;
        }
      }
    }
    if (!have || run.value > best.value + 1e-12 * std::max(1.0, std::abs(best.value))) {
      best.maximizer = p.to_ambient(run.best);
      best.value = (w * best.maximizer).trace().real();
      best.iterations = run.iterations;
      best.converged = run.converged;
      best.restart = r;
      best.polished = polished;
      have = true;
    }
  }
  return best;
}

}  // namespace covx
