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

// Small dense semidefinite programs over block-diagonal Hermitian variables.
//
// Problems are stated in the standard primal form
//
//     minimize (or maximize)  tr(C X)
//     subject to              tr(A_i X) = b_i,   X = diag(X_1, ..., X_k) >= 0
//
// where every block X_j is a complex Hermitian matrix. The solver maps the
// problem onto real symmetric blocks via [[Re, -Im], [Im, Re]] and runs a
// primal-dual path-following interior-point method with Nesterov-Todd
// scaling. Operators are stored as sparse entry lists, so equality systems
// that pin individual matrix entries stay cheap.

#ifndef QDYN_SDP_HPP
#define QDYN_SDP_HPP

#include <functional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qdyn/linalg.hpp"
#include "qdyn/tolerances.hpp"

namespace qdyn::sdp {

enum class Sense { kMinimize, kMaximize };
enum class Status { kOptimal, kInfeasible, kMaxIterations };

std::string to_string(Status status);

/// Nonzero entry of a block-diagonal Hermitian operator. Lists contain both
/// (row, col) and (col, row) for off-diagonal entries.
struct SparseEntry {
  Index block = 0;
  Index row = 0;
  Index col = 0;
  Complex value;
};

struct Constraint {
  std::vector<SparseEntry> entries;
  double rhs = 0.0;
};

struct Problem {
  std::vector<Index> block_dims;
  std::vector<SparseEntry> objective;
  std::vector<Constraint> constraints;
  Sense sense = Sense::kMinimize;

  Index dim() const;
  /// Throws ValidationError on out-of-range or non-Hermitian entry lists.
  void validate() const;
};

struct Solution {
  Status status = Status::kMaxIterations;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double duality_gap = 0.0;
  double primal_residual = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_residual = 0.0;
  int iterations = 0;
  std::vector<ComplexMatrix> primal_blocks;
  std::vector<ComplexMatrix> dual_slack_blocks;
  RealVector dual_vector;

  bool optimal() const { return status == Status::kOptimal; }
  /// Block-diagonal assembly of `primal_blocks`.
  HermitianOperator primal_matrix() const;
};

// ---------------------------------------------------------------------------
// Real symmetric embedding

struct RealEntry {
  Index block = 0;
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

struct RealConstraint {
  std::vector<RealEntry> entries;
  double rhs = 0.0;
};

/// Real symmetric problem, always a minimization.
struct RealProblem {
  std::vector<Index> block_dims;
  std::vector<RealEntry> objective;
  std::vector<RealConstraint> constraints;
};

/// [[Re M, -Im M], [Im M, Re M]]. A Hermitian n x n input maps to a real
/// symmetric 2n x 2n matrix carrying each eigenvalue twice.
RealMatrix embed_matrix(const ComplexMatrix& m);

/// Inverse of embed_matrix on the structured subspace (averages the
/// redundant copies).
ComplexMatrix unembed_matrix(const RealMatrix& m);

/// Maps every operator through embed_matrix / 2 so that
/// tr(A~ X~) = tr(A X) for X~ = embed_matrix(X). Optimal values are
/// unchanged; a maximization is returned as the minimization of -C.
RealProblem embed_hermitian(const Problem& problem);

/// Runs the interior-point method. Deterministic for identical input.
Solution solve(const Problem& problem, const Tolerances& tol = kTol);

// ---------------------------------------------------------------------------
// Problem construction helpers

/// Contribution of one variable block to the entries of a matrix-valued
/// linear expression. `expand(a, b, out)` appends (row, col, coefficient)
/// triples such that entry (a, b) of the expression contains
/// coefficient * X_block(row, col).
struct LinearTerm {
  Index block = 0;
  std::function<void(Index, Index, std::vector<std::tuple<Index, Index, Complex>>&)>
      expand;
};

namespace terms {

/// scale * X.
LinearTerm identity(Index block, double scale = 1.0);
/// scale * (1_left (x) X), X of size right_dim.
LinearTerm kron_identity_left(Index block, Index left_dim, Index right_dim,
                              double scale = 1.0);
/// scale * (X (x) 1_right), X of size left_dim.
LinearTerm kron_identity_right(Index block, Index left_dim, Index right_dim,
                               double scale = 1.0);
/// x * M for a 1 x 1 block x.
LinearTerm scalar_times(Index block, ComplexMatrix m);
/// The sub-matrix X[row_offset + a, col_offset + b].
LinearTerm sub_block(Index block, Index row_offset, Index col_offset,
                     double scale = 1.0);
/// tr_right(X) for X on left (x) right.
LinearTerm partial_trace_right(Index block, Index left_dim, Index right_dim,
                               double scale = 1.0);
/// V^dagger (1_left (x) X) V, X of size right_dim, V of shape
/// (left_dim * right_dim) x k.
LinearTerm compressed_kron_identity_left(Index block, Index left_dim,
                                         Index right_dim, ComplexMatrix v,
                                         double scale = 1.0);

}  // namespace terms

class Builder {
 public:
  explicit Builder(Sense sense) { problem_.sense = sense; }

  /// Adds a Hermitian PSD block of size `dim`; returns its index.
  Index add_block(Index dim);

  /// objective += tr(C X_block).
  void add_objective(Index block, const ComplexMatrix& c);

  /// Imposes sum_k term_k(X) = rhs for an n x n Hermitian expression:
  /// one real constraint per diagonal entry and two per strict upper entry.
  void add_hermitian_equality(Index n, const std::vector<LinearTerm>& terms,
                              const ComplexMatrix& rhs);

  /// sum_k tr(M_k X_{block_k}) = rhs.
  void add_trace_equality(const std::vector<std::pair<Index, ComplexMatrix>>& terms,
                          double rhs);

  const Problem& problem() const { return problem_; }
  Problem build() && { return std::move(problem_); }

 private:
  Problem problem_;
};

}  // namespace qdyn::sdp

#endif  // QDYN_SDP_HPP
