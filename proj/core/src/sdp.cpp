// Copyright 2026 The qdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdyn/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "qdyn/error.hpp"

namespace qdyn::sdp {

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kMaxIterations:
      return "max-iterations";
  }
  return "unknown";
}

Index Problem::dim() const {
  Index n = 0;
  for (Index d : block_dims) n += d;
  return n;
}

namespace {

void validate_entries(const std::vector<SparseEntry>& entries,
                      const std::vector<Index>& block_dims, const char* what) {
  std::map<std::tuple<Index, Index, Index>, Complex> sum;
  for (const SparseEntry& e : entries) {
    if (e.block < 0 || e.block >= static_cast<Index>(block_dims.size())) {
      throw ValidationError(std::string(what) + ": block index out of range");
    }
    const Index n = block_dims[static_cast<std::size_t>(e.block)];
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
      throw ValidationError(std::string(what) + ": entry out of range");
    }
    if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
      throw ValidationError(std::string(what) + ": non-finite entry");
    }
    sum[{e.block, e.row, e.col}] += e.value;
  }
  for (const auto& [key, v] : sum) {
    const auto [b, r, c] = key;
    auto it = sum.find({b, c, r});
    const Complex mirror = it == sum.end() ? Complex(0.0) : it->second;
    if (std::abs(v - std::conj(mirror)) > 1e-12 * std::max(1.0, std::abs(v))) {
      throw ValidationError(std::string(what) + ": operator is not Hermitian");
    }
  }
}

}  // namespace

void Problem::validate() const {
  for (Index d : block_dims) {
    if (d < 1) throw ValidationError("SDP block dimension must be >= 1");
  }
  validate_entries(objective, block_dims, "objective");
  for (const Constraint& c : constraints) {
    validate_entries(c.entries, block_dims, "constraint");
    if (!std::isfinite(c.rhs)) throw ValidationError("constraint rhs not finite");
  }
}

HermitianOperator Solution::primal_matrix() const {
  Index n = 0;
  for (const ComplexMatrix& b : primal_blocks) n += b.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Index off = 0;
  for (const ComplexMatrix& b : primal_blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return HermitianOperator::from_hermitian_part(out);
}

RealMatrix embed_matrix(const ComplexMatrix& m) {
  const Index r = m.rows();
  const Index c = m.cols();
  RealMatrix out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

ComplexMatrix unembed_matrix(const RealMatrix& m) {
  const Index n = m.rows() / 2;
  const RealMatrix re = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
  ComplexMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

namespace {

std::vector<RealEntry> embed_entries(const std::vector<SparseEntry>& entries,
                                     const std::vector<Index>& block_dims,
                                     double sign) {
  std::map<std::tuple<Index, Index, Index>, double> acc;
  for (const SparseEntry& e : entries) {
    const Index n = block_dims[static_cast<std::size_t>(e.block)];
    const double re = sign * 0.5 * e.value.real();
    const double im = sign * 0.5 * e.value.imag();
    if (re != 0.0) {
      acc[{e.block, e.row, e.col}] += re;
      acc[{e.block, e.row + n, e.col + n}] += re;
    }
    if (im != 0.0) {
      acc[{e.block, e.row, e.col + n}] -= im;
      acc[{e.block, e.row + n, e.col}] += im;
    }
  }
  std::vector<RealEntry> out;
  out.reserve(acc.size());
  for (const auto& [key, v] : acc) {
    if (v == 0.0) continue;
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
  }
  return out;
}

}  // namespace

RealProblem embed_hermitian(const Problem& problem) {
  RealProblem out;
  for (Index d : problem.block_dims) out.block_dims.push_back(2 * d);
  const double sign = problem.sense == Sense::kMaximize ? -1.0 : 1.0;
  out.objective = embed_entries(problem.objective, problem.block_dims, sign);
  out.constraints.reserve(problem.constraints.size());
  for (const Constraint& c : problem.constraints) {
    out.constraints.push_back(
        {embed_entries(c.entries, problem.block_dims, 1.0), c.rhs});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interior-point method on the real problem

namespace {

using Blocks = std::vector<RealMatrix>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double frobenius(const Blocks& a) { return std::sqrt(inner(a, a)); }

Blocks scaled_identity(const std::vector<Index>& dims, double tau) {
  Blocks out;
  for (Index d : dims) out.push_back(tau * RealMatrix::Identity(d, d));
  return out;
}

struct Entry {
  int row;
  int col;
  double value;
};

// Constraint operators regrouped per block for the Schur complement.
struct Operators {
  std::vector<Index> dims;
  int m = 0;
  std::vector<std::vector<std::vector<Entry>>> by_constraint;  // [i][block]
  std::vector<std::vector<int>> active;  // per block: constraints touching it
  Blocks objective;
  RealVector rhs;

  explicit Operators(const RealProblem& p) : dims(p.block_dims) {
    m = static_cast<int>(p.constraints.size());
    const std::size_t nb = dims.size();
    by_constraint.assign(static_cast<std::size_t>(m),
                         std::vector<std::vector<Entry>>(nb));
    active.assign(nb, {});
    rhs.resize(m);
    for (int i = 0; i < m; ++i) {
      const RealConstraint& c = p.constraints[static_cast<std::size_t>(i)];
      rhs(i) = c.rhs;
      for (const RealEntry& e : c.entries) {
        by_constraint[static_cast<std::size_t>(i)][static_cast<std::size_t>(e.block)]
            .push_back({static_cast<int>(e.row), static_cast<int>(e.col), e.value});
      }
      for (std::size_t k = 0; k < nb; ++k) {
        if (!by_constraint[static_cast<std::size_t>(i)][k].empty()) {
          active[k].push_back(i);
        }
      }
    }
    objective = scaled_identity(dims, 0.0);
    for (const RealEntry& e : p.objective) {
      objective[static_cast<std::size_t>(e.block)](e.row, e.col) += e.value;
    }
  }

  // A(X)_i = tr(A_i X)
  RealVector apply(const Blocks& x) const {
    RealVector out = RealVector::Zero(m);
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      const auto& per_block = by_constraint[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < per_block.size(); ++k) {
        for (const Entry& e : per_block[k]) s += e.value * x[k](e.col, e.row);
      }
      out(i) = s;
    }
    return out;
  }

  // sum_i y_i A_i
  Blocks adjoint(const RealVector& y) const {
    Blocks out = scaled_identity(dims, 0.0);
    for (int i = 0; i < m; ++i) {
      const auto& per_block = by_constraint[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < per_block.size(); ++k) {
        for (const Entry& e : per_block[k]) out[k](e.row, e.col) += y(i) * e.value;
      }
    }
    return out;
  }

  // M_ij = tr(A_i W A_j W)
  RealMatrix schur(const Blocks& w) const {
    RealMatrix out = RealMatrix::Zero(m, m);
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const RealMatrix& wk = w[k];
      const std::vector<int>& act = active[k];
      for (std::size_t ii = 0; ii < act.size(); ++ii) {
        const int i = act[ii];
        const auto& ei = by_constraint[static_cast<std::size_t>(i)][k];
        for (std::size_t jj = ii; jj < act.size(); ++jj) {
          const int j = act[jj];
          const auto& ej = by_constraint[static_cast<std::size_t>(j)][k];
          double s = 0.0;
          for (const Entry& a : ei) {
            for (const Entry& c : ej) {
              s += a.value * c.value * wk(a.col, c.row) * wk(c.col, a.row);
            }
          }
          out(i, j) += s;
        }
      }
    }
    out.triangularView<Eigen::StrictlyLower>() = out.transpose();
    return out;
  }
};

void symmetrize(Blocks& x) {
  for (RealMatrix& b : x) b = 0.5 * (b + b.transpose()).eval();
}

// Largest alpha in (0, inf] with x + alpha dx >= 0, given the Cholesky
// factor of x.
double max_step(const std::vector<Eigen::LLT<RealMatrix>>& chol, const Blocks& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dx.size(); ++k) {
    const auto& l = chol[k].matrixL();
    RealMatrix t = l.solve(dx[k]);
    t = l.solve(t.transpose()).transpose();
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

bool factor_all(const Blocks& x, std::vector<Eigen::LLT<RealMatrix>>& out) {
  out.clear();
  for (const RealMatrix& b : x) {
    out.emplace_back(b);
    if (out.back().info() != Eigen::Success) return false;
  }
  return true;
}

struct RealResult {
  Status status = Status::kMaxIterations;
  Blocks x;
  Blocks z;
  RealVector y;
  double pobj = 0.0;
  double dobj = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  int iterations = 0;
};

RealResult interior_point(const RealProblem& problem, const Tolerances& tol) {
  const Operators ops(problem);
  const int m = ops.m;
  Index n_total = 0;
  for (Index d : ops.dims) n_total += d;

  // Least-squares scalar start tau * I for the equality system.
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < m; ++i) {
    double tr = 0.0;
    for (const auto& per_block : ops.by_constraint[static_cast<std::size_t>(i)]) {
      for (const Entry& e : per_block) {
        if (e.row == e.col) tr += e.value;
      }
    }
    num += tr * ops.rhs(i);
    den += tr * tr;
  }
  const double tau_ls = den > 0.0 ? num / den : 0.0;
  const double norm_c = frobenius(ops.objective);
  const double norm_b = ops.rhs.norm();

  // The least-squares scale is floored so that the start sits well inside
  // both cones; a start close to the boundary stalls the infeasible method.
  double max_a = 0.0;
  double max_ratio = 0.0;
  for (int i = 0; i < m; ++i) {
    double fro = 0.0;
    for (const auto& per_block : ops.by_constraint[static_cast<std::size_t>(i)]) {
      for (const Entry& e : per_block) fro += e.value * e.value;
    }
    fro = std::sqrt(fro);
    max_a = std::max(max_a, fro);
    max_ratio = std::max(max_ratio, (1.0 + std::abs(ops.rhs(i))) / (1.0 + fro));
  }
  const double floor = std::max(10.0, std::sqrt(static_cast<double>(n_total)));
  RealResult r;
  r.x = scaled_identity(ops.dims, std::max({floor, tau_ls, floor * max_ratio}));
  r.z = scaled_identity(ops.dims, std::max({floor, norm_c, max_a}));
  r.y = RealVector::Zero(m);

  std::vector<Eigen::LLT<RealMatrix>> chol_x;
  std::vector<Eigen::LLT<RealMatrix>> chol_z;
  int stalls = 0;
  RealResult best = r;
  double best_merit = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < tol.sdp_max_iterations; ++iter) {
    r.iterations = iter;
    const RealVector ax = ops.apply(r.x);
    const RealVector rp = ops.rhs - ax;
    Blocks rd = ops.objective;
    {
      const Blocks aty = ops.adjoint(r.y);
      for (std::size_t k = 0; k < rd.size(); ++k) rd[k] -= r.z[k] + aty[k];
    }
    r.pobj = inner(ops.objective, r.x);
    r.dobj = ops.rhs.dot(r.y);
    r.pinf = rp.norm() / (1.0 + norm_b);
    r.dinf = frobenius(rd) / (1.0 + norm_c);
    const double gap = r.pobj - r.dobj;
    const double rel_gap = std::abs(gap) / (1.0 + std::abs(r.pobj) + std::abs(r.dobj));

    const double merit = std::max({rel_gap, r.pinf, r.dinf});
    if (merit < best_merit) {
      best_merit = merit;
      best = r;
    }
    if (rel_gap < tol.sdp_relative_gap && std::abs(gap) <= tol.sdp_gap &&
        r.pinf < tol.sdp_feasibility && r.dinf < tol.sdp_feasibility) {
      r.status = Status::kOptimal;
      return r;
    }
    if (r.dobj > tol.sdp_divergence || r.pobj < -tol.sdp_divergence) {
      r.status = Status::kInfeasible;
      return r;
    }

    if (!factor_all(r.x, chol_x) || !factor_all(r.z, chol_z)) break;
    const double mu = inner(r.x, r.z) / static_cast<double>(n_total);

    // Nesterov-Todd scaling: W = G G^T with G^{-1} X G^{-T} = G^T Z G = V
    // diagonal, where L = chol(X) and L^T Z L = Q diag(v^2) Q^T give
    // G = L Q diag(v)^{-1/2}.
    Blocks w;
    Blocks g;
    Blocks g_inv;
    std::vector<RealVector> v;
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      const RealMatrix l = chol_x[k].matrixL();
      RealMatrix s = l.transpose() * r.z[k] * l;
      s = 0.5 * (s + s.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
      const RealVector vk = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt();
      const RealVector quarter = vk.cwiseSqrt();
      const RealMatrix lq = l * es.eigenvectors();
      g.push_back(lq * quarter.cwiseInverse().asDiagonal());
      g_inv.push_back(quarter.asDiagonal() *
                      l.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors()).transpose());
      w.push_back(g.back() * g.back().transpose());
      v.push_back(vk);
    }
    symmetrize(w);

    // The Schur matrix is positive definite in exact arithmetic; near the
    // optimum rounding can break that, so the diagonal is perturbed until
    // Cholesky succeeds. Refinement below removes the perturbation error.
    RealMatrix schur = ops.schur(w);
    Eigen::LLT<RealMatrix> schur_fact(schur);
    const double diag_scale = std::max(schur.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    for (double shift = 1e-15; schur_fact.info() != Eigen::Success && shift < 1e-6;
         shift *= 10.0) {
      RealMatrix shifted = schur;
      shifted.diagonal().array() += shift * diag_scale;
      schur_fact.compute(shifted);
    }
    if (schur_fact.info() != Eigen::Success) break;

    Blocks wrw;
    for (std::size_t k = 0; k < w.size(); ++k) wrw.push_back(w[k] * rd[k] * w[k]);
    const RealVector a_wrw = ops.apply(wrw);

    // Scaled complementarity: V K + K V = 2 sigma mu I - 2 V^2 - T with
    // K = dX^ + dZ^; then dX + W dZ W = G K G^T.
    auto direction = [&](double sigma, const Blocks* second_order, Blocks& dx,
                         RealVector& dy, Blocks& dz) {
      Blocks rc;
      for (std::size_t k = 0; k < r.x.size(); ++k) {
        const Index n = ops.dims[k];
        RealMatrix rhs_k = RealMatrix::Zero(n, n);
        for (Index i = 0; i < n; ++i) {
          rhs_k(i, i) = 2.0 * (sigma * mu - v[k](i) * v[k](i));
        }
        if (second_order != nullptr) rhs_k -= (*second_order)[k];
        RealMatrix kmat(n, n);
        for (Index j = 0; j < n; ++j) {
          for (Index i = 0; i < n; ++i) kmat(i, j) = rhs_k(i, j) / (v[k](i) + v[k](j));
        }
        rc.push_back(g[k] * kmat * g[k].transpose());
      }
      const RealVector rhs = rp - ops.apply(rc) + a_wrw;
      // Refinement against the operator form, not the assembled matrix,
      // so that rounding in the Schur assembly is corrected too.
      dy = schur_fact.solve(rhs);
      for (int pass = 0; pass < 2; ++pass) {
        const Blocks at = ops.adjoint(dy);
        Blocks wat;
        for (std::size_t k = 0; k < w.size(); ++k) wat.push_back(w[k] * at[k] * w[k]);
        dy += schur_fact.solve(rhs - ops.apply(wat));
      }
      const Blocks aty = ops.adjoint(dy);
      dz.clear();
      dx.clear();
      for (std::size_t k = 0; k < r.x.size(); ++k) {
        dz.push_back(rd[k] - aty[k]);
        dx.push_back(rc[k] - w[k] * dz[k] * w[k]);
      }
      symmetrize(dx);
      symmetrize(dz);
    };

    Blocks dx;
    Blocks dz;
    RealVector dy;
    direction(0.0, nullptr, dx, dy, dz);
    double ap = std::min(1.0, max_step(chol_x, dx));
    double ad = std::min(1.0, max_step(chol_z, dz));
    Blocks x_aff = r.x;
    Blocks z_aff = r.z;
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      x_aff[k] += ap * dx[k];
      z_aff[k] += ad * dz[k];
    }
    const double mu_aff = inner(x_aff, z_aff) / static_cast<double>(n_total);
    const double ratio = std::clamp(mu_aff / mu, 0.0, 1.0);
    const double sigma = std::clamp(ratio * ratio * ratio, 0.0, 1.0);

    Blocks corr;
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      const RealMatrix dxs = g_inv[k] * dx[k] * g_inv[k].transpose();
      const RealMatrix dzs = g[k].transpose() * dz[k] * g[k];
      const RealMatrix t = dxs * dzs;
      corr.push_back(t + t.transpose());
    }
    direction(sigma, &corr, dx, dy, dz);
    ap = std::min(1.0, tol.sdp_step_fraction * max_step(chol_x, dx));
    ad = std::min(1.0, tol.sdp_step_fraction * max_step(chol_z, dz));
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      r.x[k] += ap * dx[k];
      r.z[k] += ad * dz[k];
    }
    r.y += ad * dy;
    symmetrize(r.x);
    symmetrize(r.z);

    stalls = (ap < 1e-3 && ad < 1e-3) ? stalls + 1 : 0;
    if (stalls >= 3) break;
  }
  // Not converged: hand back the iterate closest to optimality.
  best.status = Status::kMaxIterations;
  return best;
}

}  // namespace

Solution solve(const Problem& problem, const Tolerances& tol) {
  problem.validate();
  const RealProblem real = embed_hermitian(problem);
  RealResult rr = interior_point(real, tol);

  Solution sol;
  sol.status = rr.status;
  sol.iterations = rr.iterations;
  const double sign = problem.sense == Sense::kMaximize ? -1.0 : 1.0;
  sol.primal_value = sign * rr.pobj;
  sol.dual_value = sign * rr.dobj;
  sol.duality_gap = std::abs(rr.pobj - rr.dobj);
  sol.primal_residual = rr.pinf;
  sol.dual_residual = rr.dinf;
  sol.dual_vector = sign * rr.y;
  for (std::size_t k = 0; k < rr.x.size(); ++k) {
    sol.primal_blocks.push_back(unembed_matrix(rr.x[k]));
    sol.dual_slack_blocks.push_back(unembed_matrix(sign * rr.z[k]));
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Builder

namespace terms {

using Triples = std::vector<std::tuple<Index, Index, Complex>>;

LinearTerm identity(Index block, double scale) {
  return {block, [scale](Index a, Index b, Triples& out) {
            out.emplace_back(a, b, scale);
          }};
}

LinearTerm kron_identity_left(Index block, Index left_dim, Index right_dim,
                              double scale) {
  return {block, [=](Index a, Index b, Triples& out) {
            if (a / right_dim != b / right_dim) return;
            (void)left_dim;
            out.emplace_back(a % right_dim, b % right_dim, scale);
          }};
}

LinearTerm kron_identity_right(Index block, Index left_dim, Index right_dim,
                               double scale) {
  return {block, [=](Index a, Index b, Triples& out) {
            if (a % right_dim != b % right_dim) return;
            (void)left_dim;
            out.emplace_back(a / right_dim, b / right_dim, scale);
          }};
}

LinearTerm scalar_times(Index block, ComplexMatrix m) {
  return {block, [m = std::move(m)](Index a, Index b, Triples& out) {
            if (m(a, b) != Complex(0.0)) out.emplace_back(0, 0, m(a, b));
          }};
}

LinearTerm sub_block(Index block, Index row_offset, Index col_offset, double scale) {
  return {block, [=](Index a, Index b, Triples& out) {
            out.emplace_back(row_offset + a, col_offset + b, scale);
          }};
}

LinearTerm partial_trace_right(Index block, Index left_dim, Index right_dim,
                               double scale) {
  return {block, [=](Index a, Index b, Triples& out) {
            (void)left_dim;
            for (Index k = 0; k < right_dim; ++k) {
              out.emplace_back(a * right_dim + k, b * right_dim + k, scale);
            }
          }};
}

LinearTerm compressed_kron_identity_left(Index block, Index left_dim,
                                         Index right_dim, ComplexMatrix v,
                                         double scale) {
  return {block, [=, v = std::move(v)](Index a, Index b, Triples& out) {
            // (V^dag (1 (x) X) V)_ab = sum_{l,r,s} conj(V(l r, a)) X(r, s) V(l s, b)
            for (Index r = 0; r < right_dim; ++r) {
              for (Index s = 0; s < right_dim; ++s) {
                Complex c = 0.0;
                for (Index l = 0; l < left_dim; ++l) {
                  c += std::conj(v(l * right_dim + r, a)) * v(l * right_dim + s, b);
                }
                if (std::abs(c) > 1e-15) out.emplace_back(r, s, scale * c);
              }
            }
          }};
}

}  // namespace terms

Index Builder::add_block(Index dim) {
  if (dim < 1) throw ValidationError("SDP block dimension must be >= 1");
  problem_.block_dims.push_back(dim);
  return static_cast<Index>(problem_.block_dims.size()) - 1;
}

void Builder::add_objective(Index block, const ComplexMatrix& c) {
  for (Index j = 0; j < c.cols(); ++j) {
    for (Index i = 0; i < c.rows(); ++i) {
      if (c(i, j) != Complex(0.0)) problem_.objective.push_back({block, i, j, c(i, j)});
    }
  }
}

namespace {

// Coalesces duplicate coordinates and drops numerically zero entries.
std::vector<SparseEntry> coalesce(const std::vector<SparseEntry>& in) {
  std::map<std::tuple<Index, Index, Index>, Complex> acc;
  for (const SparseEntry& e : in) acc[{e.block, e.row, e.col}] += e.value;
  std::vector<SparseEntry> out;
  for (const auto& [key, v] : acc) {
    if (std::abs(v) < 1e-15) continue;
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v});
  }
  return out;
}

}  // namespace

void Builder::add_hermitian_equality(Index n, const std::vector<LinearTerm>& terms,
                                     const ComplexMatrix& rhs) {
  if (rhs.rows() != n || rhs.cols() != n) {
    throw ValidationError("hermitian equality: rhs has wrong shape");
  }
  const Complex half(0.5, 0.0);
  const Complex half_over_i(0.0, -0.5);  // 1 / (2i)
  std::vector<std::tuple<Index, Index, Complex>> triples;
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      std::vector<SparseEntry> re_entries;
      std::vector<SparseEntry> im_entries;
      for (const LinearTerm& term : terms) {
        triples.clear();
        term.expand(a, b, triples);
        for (const auto& [row, col, coef] : triples) {
          // tr(A X) = sum A(c, r) X(r, c)
          re_entries.push_back({term.block, col, row, coef * half});
          re_entries.push_back({term.block, row, col, std::conj(coef) * half});
          if (a != b) {
            im_entries.push_back({term.block, col, row, coef * half_over_i});
            im_entries.push_back({term.block, row, col, -std::conj(coef) * half_over_i});
          }
        }
      }
      problem_.constraints.push_back({coalesce(re_entries), rhs(a, b).real()});
      if (a != b) {
        problem_.constraints.push_back({coalesce(im_entries), rhs(a, b).imag()});
      }
    }
  }
}

void Builder::add_trace_equality(
    const std::vector<std::pair<Index, ComplexMatrix>>& terms, double rhs) {
  std::vector<SparseEntry> entries;
  for (const auto& [block, mat] : terms) {
    // tr(M X) = sum M(r, c) X(c, r)
    for (Index j = 0; j < mat.cols(); ++j) {
      for (Index i = 0; i < mat.rows(); ++i) {
        if (mat(i, j) != Complex(0.0)) entries.push_back({block, i, j, mat(i, j)});
      }
    }
  }
  problem_.constraints.push_back({coalesce(entries), rhs});
}

}  // namespace qdyn::sdp
