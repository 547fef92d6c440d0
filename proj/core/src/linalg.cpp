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

#include "qdyn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdyn/error.hpp"

namespace qdyn {
namespace {

Index product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1},
                         std::multiplies<Index>());
}

Dims normalize_dims(Dims dims, Index dim) {
  if (dims.empty()) return Dims{dim};
  for (Index d : dims) {
    if (d < 1) throw ValidationError("subsystem dimension must be >= 1");
  }
  if (product(dims) != dim) {
    throw ValidationError("subsystem dims multiply to " +
                          std::to_string(product(dims)) + ", expected " +
                          std::to_string(dim));
  }
  return dims;
}

// Row-major strides: the last subsystem varies fastest.
std::vector<Index> strides_of(const Dims& dims) {
  std::vector<Index> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * dims[k];
  }
  return strides;
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix matrix, Dims subsystem_dims) {
  if (matrix.rows() != matrix.cols()) {
    throw ValidationError("Hermitian operator must be square");
  }
  if (!matrix.allFinite()) {
    throw ValidationError("matrix has non-finite entries");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double skew = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (matrix.size() > 0 && skew > kTol.hermiticity * scale) {
    throw ValidationError("matrix is not Hermitian (max |M - M^dagger| = " +
                          std::to_string(skew) + ")");
  }
  dims_ = normalize_dims(std::move(subsystem_dims), matrix.rows());
  matrix_ = (matrix + matrix.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::from_hermitian_part(
    const ComplexMatrix& matrix, Dims subsystem_dims) {
  if (matrix.rows() != matrix.cols()) {
    throw ValidationError("Hermitian operator must be square");
  }
  HermitianOperator h;
  h.dims_ = normalize_dims(std::move(subsystem_dims), matrix.rows());
  h.matrix_ = (matrix + matrix.adjoint()) * 0.5;
  return h;
}

HermitianOperator HermitianOperator::with_dims(Dims subsystem_dims) const {
  HermitianOperator h = *this;
  h.dims_ = normalize_dims(std::move(subsystem_dims), dim());
  return h;
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > kTol.trace) {
    throw ValidationError("density operator must have unit trace, got " +
                          std::to_string(op_.trace()));
  }
  if (!is_psd(op_)) {
    throw ValidationError("density operator must be positive semidefinite");
  }
}

DensityOperator DensityOperator::subnormalized(HermitianOperator op) {
  const double tr = op.trace();
  if (tr > 1.0 + kTol.trace || tr < -kTol.trace) {
    throw ValidationError("subnormalized state must have trace in [0, 1]");
  }
  if (!is_psd(op)) {
    throw ValidationError("subnormalized state must be positive semidefinite");
  }
  const bool unit = std::abs(tr - 1.0) <= kTol.trace;
  return DensityOperator(std::move(op), unit);
}

EigenDecomposition herm_eig(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("Hermitian eigensolver did not converge");
  }
  // Eigen returns ascending order.
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

EigenDecomposition herm_eig(const ComplexMatrix& m) {
  return herm_eig(HermitianOperator(m));
}

RealVector eigenvalues(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

double min_eigenvalue(const HermitianOperator& h) {
  return eigenvalues(h).minCoeff();
}

double max_eigenvalue(const HermitianOperator& h) {
  return eigenvalues(h).maxCoeff();
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("trace norm requires a square matrix");
  }
  if (m.size() == 0) return 0.0;
  const double skew = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew == 0.0) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m,
                                                        Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double fidelity_psd(const HermitianOperator& p, const HermitianOperator& q) {
  if (p.dim() != q.dim()) throw ValidationError("fidelity: dimension mismatch");
  const ComplexMatrix sp = psd_sqrt(p).matrix();
  const ComplexMatrix inner = sp * q.matrix() * sp;
  const RealVector ev = eigenvalues(HermitianOperator::from_hermitian_part(inner));
  double root = 0.0;
  for (double v : ev) root += std::sqrt(std::max(v, 0.0));
  return root * root;
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError("fidelity: dimension mismatch");
  }
  const double overlap = std::sqrt(fidelity_psd(rho.op(), sigma.op()));
  const double deficit = std::max(0.0, 1.0 - rho.trace()) *
                         std::max(0.0, 1.0 - sigma.trace());
  const double root = overlap + std::sqrt(deficit);
  return std::clamp(root * root, 0.0, 1.0);
}

double purified_distance(const DensityOperator& rho,
                         const DensityOperator& sigma) {
  return std::sqrt(std::max(0.0, 1.0 - fidelity(rho, sigma)));
}

HermitianOperator partial_trace(const HermitianOperator& h,
                                std::span<const std::size_t> keep) {
  const Dims& dims = h.subsystem_dims();
  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  for (std::size_t k : keep) {
    if (k >= n) throw ValidationError("partial_trace: subsystem index out of range");
    if (kept[k]) throw ValidationError("partial_trace: repeated subsystem index");
    kept[k] = true;
  }
  std::vector<std::size_t> keep_sorted(keep.begin(), keep.end());
  std::sort(keep_sorted.begin(), keep_sorted.end());

  Dims kept_dims;
  Dims traced_dims;
  for (std::size_t k = 0; k < n; ++k) {
    (kept[k] ? kept_dims : traced_dims).push_back(dims[k]);
  }
  const std::vector<Index> strides = strides_of(dims);
  const Index dk = product(kept_dims);
  const Index dt = product(traced_dims);

  // offset tables: linear index in the full space for each kept / traced
  // multi-index.
  auto offsets = [&](bool want_kept, Index count) {
    std::vector<Index> table(static_cast<std::size_t>(count), 0);
    for (Index lin = 0; lin < count; ++lin) {
      Index rem = lin;
      Index off = 0;
      for (std::size_t k = n; k-- > 0;) {
        if (kept[k] != want_kept) continue;
        off += (rem % dims[k]) * strides[k];
        rem /= dims[k];
      }
      table[static_cast<std::size_t>(lin)] = off;
    }
    return table;
  };
  const std::vector<Index> kept_off = offsets(true, dk);
  const std::vector<Index> traced_off = offsets(false, dt);

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  const ComplexMatrix& m = h.matrix();
  for (Index i = 0; i < dk; ++i) {
    for (Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (Index t : traced_off) {
        acc += m(kept_off[static_cast<std::size_t>(i)] + t,
                 kept_off[static_cast<std::size_t>(j)] + t);
      }
      out(i, j) = acc;
    }
  }
  if (kept_dims.empty()) kept_dims.push_back(1);
  return HermitianOperator::from_hermitian_part(out, kept_dims);
}

HermitianOperator partial_trace(const HermitianOperator& h,
                                std::initializer_list<std::size_t> keep) {
  return partial_trace(h, std::span<const std::size_t>(keep.begin(), keep.size()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  Dims dims = a.subsystem_dims();
  dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
  return HermitianOperator::from_hermitian_part(kron(a.matrix(), b.matrix()),
                                                std::move(dims));
}

HermitianOperator partial_transpose(const HermitianOperator& h,
                                    std::size_t subsystem) {
  const Dims& dims = h.subsystem_dims();
  if (subsystem >= dims.size()) {
    throw ValidationError("partial_transpose: subsystem index out of range");
  }
  const std::vector<Index> strides = strides_of(dims);
  const Index stride = strides[subsystem];
  const Index d = dims[subsystem];
  const ComplexMatrix& m = h.matrix();
  ComplexMatrix out(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r) {
    const Index rd = (r / stride) % d;
    for (Index c = 0; c < m.cols(); ++c) {
      const Index cd = (c / stride) % d;
      // swap the selected digit between row and column
      const Index r2 = r + (cd - rd) * stride;
      const Index c2 = c + (rd - cd) * stride;
      out(r2, c2) = m(r, c);
    }
  }
  return HermitianOperator::from_hermitian_part(out, dims);
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const Dims& dims,
                                 std::span<const std::size_t> perm) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw ValidationError("permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw ValidationError("invalid permutation");
    seen[p] = true;
  }
  Dims new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[perm[k]];
  const std::vector<Index> old_strides = strides_of(dims);
  const Index total = product(dims);
  std::vector<Index> map(static_cast<std::size_t>(total));
  for (Index lin = 0; lin < total; ++lin) {
    Index rem = lin;
    Index old = 0;
    for (std::size_t k = n; k-- > 0;) {
      old += (rem % new_dims[k]) * old_strides[perm[k]];
      rem /= new_dims[k];
    }
    map[static_cast<std::size_t>(lin)] = old;
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < total; ++i) {
    for (Index j = 0; j < total; ++j) {
      out(i, j) = m(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

HermitianOperator permute_subsystems(const HermitianOperator& h,
                                     std::span<const std::size_t> perm) {
  const Dims& dims = h.subsystem_dims();
  ComplexMatrix out = permute_subsystems(h.matrix(), dims, perm);
  Dims new_dims(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) new_dims[k] = dims[perm[k]];
  return HermitianOperator::from_hermitian_part(out, std::move(new_dims));
}

HermitianOperator swap_bipartite(const HermitianOperator& h) {
  if (h.num_subsystems() != 2) {
    throw ValidationError("swap_bipartite requires exactly two subsystems");
  }
  const std::size_t perm[] = {1, 0};
  return permute_subsystems(h, perm);
}

namespace {

HermitianOperator spectral_map(const HermitianOperator& h, auto&& f) {
  const EigenDecomposition eig = herm_eig(h);
  RealVector mapped(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) mapped(i) = f(eig.values(i));
  ComplexMatrix out = eig.vectors * mapped.cast<Complex>().asDiagonal() *
                      eig.vectors.adjoint();
  return HermitianOperator::from_hermitian_part(out, h.subsystem_dims());
}

}  // namespace

HermitianOperator psd_sqrt(const HermitianOperator& h) {
  return spectral_map(h, [](double v) {
    if (v < 0.0) {
      if (v < -kTol.sqrt_clamp) {
        throw ValidationError("psd_sqrt: operator has a negative eigenvalue " +
                              std::to_string(v));
      }
      return 0.0;
    }
    return std::sqrt(v);
  });
}

HermitianOperator psd_power_on_support(const HermitianOperator& h, double power) {
  return spectral_map(h, [power](double v) {
    return v > kTol.support_cutoff ? std::pow(v, power) : 0.0;
  });
}

HermitianOperator support_projector(const HermitianOperator& h, double cutoff) {
  return spectral_map(h, [cutoff](double v) { return v > cutoff ? 1.0 : 0.0; });
}

bool is_psd(const HermitianOperator& h, double tol) {
  if (h.dim() == 0) return true;
  return min_eigenvalue(h) >= -tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return is_isometry(u, tol);
}

bool is_isometry(const ComplexMatrix& v, double tol) {
  const ComplexMatrix gram = v.adjoint() * v;
  return (gram - ComplexMatrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff() <=
         tol;
}

HermitianOperator identity_operator(Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

DensityOperator maximally_mixed(Index dim) {
  return DensityOperator(HermitianOperator(
      ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

ComplexMatrix gamma_operator(Index dim) {
  ComplexMatrix g = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < dim; ++j) g(i * dim + i, j * dim + j) = 1.0;
  }
  return g;
}

DensityOperator maximally_entangled(Index dim) {
  return DensityOperator(HermitianOperator(
      gamma_operator(dim) / static_cast<double>(dim), Dims{dim, dim}));
}

DensityOperator pure_state(const ComplexVector& psi, Dims subsystem_dims) {
  const double norm = psi.norm();
  if (norm == 0.0) throw ValidationError("pure_state: zero vector");
  const ComplexVector unit = psi / norm;
  return DensityOperator(HermitianOperator::from_hermitian_part(
      unit * unit.adjoint(), std::move(subsystem_dims)));
}

DensityOperator basis_state(Index dim, Index k) {
  if (k < 0 || k >= dim) throw ValidationError("basis_state: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return pure_state(v);
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace qdyn
