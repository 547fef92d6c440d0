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

#ifndef QDYN_LINALG_HPP
#define QDYN_LINALG_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qdyn/tolerances.hpp"

namespace qdyn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Dims = std::vector<Index>;

/// Dense Hermitian operator on a (possibly composite) Hilbert space.
///
/// The stored matrix is always exactly Hermitian: the validating constructor
/// rejects inputs whose anti-Hermitian part exceeds `kTol.hermiticity`, then
/// keeps the Hermitian part. `subsystem_dims` describes the tensor factors in
/// order; their product equals `dim()`.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Validating constructor. Throws ValidationError on non-square,
  /// non-finite, non-Hermitian input or inconsistent subsystem dims.
  explicit HermitianOperator(ComplexMatrix matrix, Dims subsystem_dims = {});

  /// Keeps the Hermitian part of `matrix` without checking how far it was
  /// from Hermitian. Used for results of Hermiticity-preserving arithmetic.
  static HermitianOperator from_hermitian_part(const ComplexMatrix& matrix,
                                               Dims subsystem_dims = {});

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const Dims& subsystem_dims() const { return dims_; }
  std::size_t num_subsystems() const { return dims_.size(); }
  double trace() const { return matrix_.trace().real(); }

  /// Same matrix, new subsystem structure (product must match).
  HermitianOperator with_dims(Dims subsystem_dims) const;

 private:
  ComplexMatrix matrix_;
  Dims dims_;
};

/// Positive semidefinite operator with unit trace, or trace <= 1 for the
/// subnormalized variant that smoothing balls contain.
class DensityOperator {
 public:
  DensityOperator() = default;

  /// Throws ValidationError unless PSD and unit trace.
  explicit DensityOperator(HermitianOperator op);

  /// Throws ValidationError unless PSD and 0 <= trace <= 1.
  static DensityOperator subnormalized(HermitianOperator op);

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  Index dim() const { return op_.dim(); }
  const Dims& subsystem_dims() const { return op_.subsystem_dims(); }
  double trace() const { return op_.trace(); }
  bool normalized() const { return normalized_; }

  operator const HermitianOperator&() const { return op_; }  // NOLINT

 private:
  DensityOperator(HermitianOperator op, bool normalized)
      : op_(std::move(op)), normalized_(normalized) {}

  HermitianOperator op_;
  bool normalized_ = true;
};

struct EigenDecomposition {
  RealVector values;     // descending
  ComplexMatrix vectors; // columns are the matching eigenvectors
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
EigenDecomposition herm_eig(const HermitianOperator& h);
/// Throws ValidationError if `m` is not Hermitian.
EigenDecomposition herm_eig(const ComplexMatrix& m);

RealVector eigenvalues(const HermitianOperator& h);
double min_eigenvalue(const HermitianOperator& h);
double max_eigenvalue(const HermitianOperator& h);

/// Sum of singular values. Throws ValidationError for non-square input.
double trace_norm(const ComplexMatrix& m);

/// Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1^2. For subnormalized inputs
/// the generalized form (||sqrt(rho) sqrt(sigma)||_1 +
/// sqrt((1 - tr rho)(1 - tr sigma)))^2 is used, which reduces to the
/// ordinary one when either argument has unit trace.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// ||sqrt(p) sqrt(q)||_1^2 for arbitrary PSD operators (no normalization).
double fidelity_psd(const HermitianOperator& p, const HermitianOperator& q);

/// sqrt(1 - F).
double purified_distance(const DensityOperator& rho,
                         const DensityOperator& sigma);

/// Trace over every subsystem not listed in `keep`. Kept subsystems retain
/// their original order. Throws ValidationError on a bad index.
HermitianOperator partial_trace(const HermitianOperator& h,
                                std::span<const std::size_t> keep);
HermitianOperator partial_trace(const HermitianOperator& h,
                                std::initializer_list<std::size_t> keep);

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Transpose of one tensor factor.
HermitianOperator partial_transpose(const HermitianOperator& h,
                                    std::size_t subsystem);

/// Reorders tensor factors: factor k of the result is factor perm[k] of `h`.
HermitianOperator permute_subsystems(const HermitianOperator& h,
                                     std::span<const std::size_t> perm);
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims,
                                 std::span<const std::size_t> perm);

/// Swaps the two factors of a bipartite operator.
HermitianOperator swap_bipartite(const HermitianOperator& h);

/// f applied to the spectrum, eigenvalues in [-sqrt_clamp, 0) clamped to 0.
HermitianOperator psd_sqrt(const HermitianOperator& h);
/// h^power restricted to the support of h (eigenvalues above support_cutoff).
HermitianOperator psd_power_on_support(const HermitianOperator& h, double power);
HermitianOperator support_projector(const HermitianOperator& h,
                                    double cutoff = kTol.support_cutoff);

bool is_psd(const HermitianOperator& h, double tol = kTol.psd);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);
bool is_isometry(const ComplexMatrix& v, double tol = 1e-10);

HermitianOperator identity_operator(Index dim);
DensityOperator maximally_mixed(Index dim);
/// Phi = |Phi><Phi| with |Phi> = sum_i |ii> / sqrt(d), dims {d, d}.
DensityOperator maximally_entangled(Index dim);
/// Unnormalized |Gamma><Gamma| = d * Phi.
ComplexMatrix gamma_operator(Index dim);
DensityOperator pure_state(const ComplexVector& psi, Dims subsystem_dims = {});
DensityOperator basis_state(Index dim, Index k);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace qdyn

#endif  // QDYN_LINALG_HPP
