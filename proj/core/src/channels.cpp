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

#include "qdyn/channels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qdyn/error.hpp"

namespace qdyn {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(name) + ": p must lie in [0, 1]");
  }
}

ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& kraus) {
  ComplexMatrix s = ComplexMatrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const ComplexMatrix& k : kraus) s += k.adjoint() * k;
  return s;
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus)
    : QuantumChannel(std::move(kraus), true) {}

QuantumChannel QuantumChannel::cp_map(std::vector<ComplexMatrix> kraus) {
  return QuantumChannel(std::move(kraus), false);
}

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus, bool require_tp)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError("channel needs at least one Kraus operator");
  out_dim_ = kraus_.front().rows();
  in_dim_ = kraus_.front().cols();
  if (in_dim_ < 1 || out_dim_ < 1) throw ValidationError("empty Kraus operator");
  for (const ComplexMatrix& k : kraus_) {
    if (k.rows() != out_dim_ || k.cols() != in_dim_) {
      throw ValidationError("Kraus operators must share one shape");
    }
    if (!k.allFinite()) throw ValidationError("non-finite Kraus entry");
  }
  const ComplexMatrix s = kraus_sum(kraus_);
  const ComplexMatrix id = ComplexMatrix::Identity(in_dim_, in_dim_);
  const double defect = (s - id).norm();
  trace_preserving_ = defect <= kTol.kraus_completeness;
  if (require_tp && !trace_preserving_) {
    throw ValidationError("Kraus operators violate completeness: ||sum K^dag K - 1|| = " +
                          std::to_string(defect));
  }
  if (!require_tp && s.trace().real() > static_cast<double>(in_dim_) + kTol.trace) {
    throw ValidationError("CP map has tr(Gamma) > input dimension");
  }
}

ComplexMatrix QuantumChannel::operator()(const ComplexMatrix& x) const {
  if (x.rows() != in_dim_ || x.cols() != in_dim_) {
    throw ValidationError("channel input has wrong dimension");
  }
  ComplexMatrix out = ComplexMatrix::Zero(out_dim_, out_dim_);
  for (const ComplexMatrix& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

std::string to_string(ChannelFamily family) {
  switch (family) {
    case ChannelFamily::kDepolarizing:
      return "depolarizing";
    case ChannelFamily::kDephasing1:
      return "dephasing1";
    case ChannelFamily::kDephasing2:
      return "dephasing2";
    case ChannelFamily::kReplacer:
      return "replacer";
    case ChannelFamily::kUnitary:
      return "unitary";
    case ChannelFamily::kPovm:
      return "povm";
  }
  return "unknown";
}

std::optional<ChannelFamily> parse_channel_family(const std::string& name) {
  for (ChannelFamily f :
       {ChannelFamily::kDepolarizing, ChannelFamily::kDephasing1, ChannelFamily::kDephasing2,
        ChannelFamily::kReplacer, ChannelFamily::kUnitary, ChannelFamily::kPovm}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

QuantumChannel depolarizing_channel(double p) {
  check_probability(p, "depolarizing");
  const double a = std::sqrt(1.0 - p);
  const double b = std::sqrt(p / 3.0);
  return QuantumChannel({a * ComplexMatrix::Identity(2, 2), b * pauli_x(), b * pauli_y(),
                         b * pauli_z()});
}

QuantumChannel dephasing1_channel(double p) {
  check_probability(p, "dephasing1");
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return QuantumChannel({std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2),
                         std::sqrt(p) * p0, std::sqrt(p) * p1});
}

QuantumChannel dephasing2_channel(double p) {
  check_probability(p, "dephasing2");
  return QuantumChannel(
      {std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2), std::sqrt(p) * pauli_z()});
}

QuantumChannel replacer_channel(const DensityOperator& omega, Index in_dim) {
  if (in_dim < 1) throw ValidationError("replacer: input dimension must be >= 1");
  const EigenDecomposition e = herm_eig(omega.op());
  std::vector<ComplexMatrix> kraus;
  for (Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) <= kTol.support_cutoff) continue;
    for (Index j = 0; j < in_dim; ++j) {
      ComplexMatrix kr = ComplexMatrix::Zero(omega.dim(), in_dim);
      kr.col(j) = std::sqrt(e.values(k)) * e.vectors.col(k);
      kraus.push_back(std::move(kr));
    }
  }
  // Renormalize the retained spectrum so completeness holds exactly.
  double kept = 0.0;
  for (Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) > kTol.support_cutoff) kept += e.values(k);
  }
  for (ComplexMatrix& k : kraus) k /= std::sqrt(kept);
  return QuantumChannel(std::move(kraus));
}

QuantumChannel replacer_via_swap(const DensityOperator& omega) {
  const Index d = omega.dim();
  ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) swap(b * d + a, a * d + b) = 1.0;
  }
  const EigenDecomposition e = herm_eig(omega.op());
  std::vector<ComplexMatrix> kraus;
  for (Index k = 0; k < d; ++k) {
    if (e.values(k) <= kTol.support_cutoff) continue;
    // Environment starts in the eigenvector |w_k> with weight w_k.
    ComplexMatrix prepare = ComplexMatrix::Zero(d * d, d);
    for (Index a = 0; a < d; ++a) {
      for (Index b = 0; b < d; ++b) prepare(a * d + b, a) = e.vectors(b, k);
    }
    const ComplexMatrix u = swap * prepare;
    for (Index j = 0; j < d; ++j) {
      ComplexMatrix kr(d, d);
      for (Index a = 0; a < d; ++a) kr.row(a) = u.row(a * d + j);
      kraus.push_back(std::sqrt(e.values(k)) * kr);
    }
  }
  double kept = 0.0;
  for (Index k = 0; k < d; ++k) {
    if (e.values(k) > kTol.support_cutoff) kept += e.values(k);
  }
  for (ComplexMatrix& k : kraus) k /= std::sqrt(kept);
  return QuantumChannel(std::move(kraus));
}

QuantumChannel unitary_channel(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || !is_unitary(u)) {
    throw ValidationError("unitary channel requires a unitary matrix");
  }
  return QuantumChannel({u});
}

QuantumChannel isometry_channel(const ComplexMatrix& v) {
  if (!is_isometry(v)) throw ValidationError("isometry channel requires V^dag V = 1");
  return QuantumChannel({v});
}

QuantumChannel identity_channel(Index dim) {
  return QuantumChannel({ComplexMatrix::Identity(dim, dim)});
}

QuantumChannel measurement_channel(const std::vector<ComplexMatrix>& povm) {
  if (povm.empty()) throw ValidationError("POVM must have at least one element");
  const Index d = povm.front().rows();
  const Index outcomes = static_cast<Index>(povm.size());
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  std::vector<ComplexMatrix> kraus;
  for (Index x = 0; x < outcomes; ++x) {
    const ComplexMatrix& lam = povm[static_cast<std::size_t>(x)];
    if (lam.rows() != d || lam.cols() != d) {
      throw ValidationError("POVM elements must share one square shape");
    }
    const HermitianOperator h(lam);
    const EigenDecomposition e = herm_eig(h);
    if (e.values(d - 1) < -kTol.psd) throw ValidationError("POVM element is not PSD");
    total += lam;
    for (Index k = 0; k < d; ++k) {
      if (e.values(k) <= kTol.support_cutoff) continue;
      ComplexMatrix kr = ComplexMatrix::Zero(outcomes, d);
      kr.row(x) = std::sqrt(e.values(k)) * e.vectors.col(k).adjoint();
      kraus.push_back(std::move(kr));
    }
  }
  if ((total - ComplexMatrix::Identity(d, d)).norm() > kTol.kraus_completeness) {
    throw ValidationError("POVM elements do not sum to the identity");
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel random_channel(Index in_dim, Index out_dim, Index env_dim,
                              HaarSampler& sampler) {
  if (out_dim * env_dim < in_dim) {
    throw ValidationError("random channel: out_dim * env_dim must be >= in_dim");
  }
  const ComplexMatrix u = sampler.unitary(out_dim * env_dim);
  std::vector<ComplexMatrix> kraus(static_cast<std::size_t>(env_dim),
                                   ComplexMatrix(out_dim, in_dim));
  for (Index e = 0; e < env_dim; ++e) {
    for (Index a = 0; a < out_dim; ++a) {
      kraus[static_cast<std::size_t>(e)].row(a) = u.row(a * env_dim + e).head(in_dim);
    }
  }
  return QuantumChannel(std::move(kraus));
}

ComplexMatrix choi_matrix(const QuantumChannel& n) {
  const Index din = n.in_dim();
  const Index dout = n.out_dim();
  ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
  for (const ComplexMatrix& k : n.kraus()) {
    // (1 (x) K)|Gamma> = sum_i |i> (x) K|i>
    ComplexVector v(din * dout);
    for (Index i = 0; i < din; ++i) v.segment(i * dout, dout) = k.col(i);
    j.noalias() += v * v.adjoint();
  }
  return j;
}

ChoiState choi_state(const QuantumChannel& n) {
  const ComplexMatrix j = choi_matrix(n) / static_cast<double>(n.in_dim());
  HermitianOperator op =
      HermitianOperator::from_hermitian_part(j, Dims{n.in_dim(), n.out_dim()});
  if (n.trace_preserving()) return {DensityOperator(std::move(op)), n.in_dim(), n.out_dim()};
  return {DensityOperator::subnormalized(std::move(op)), n.in_dim(), n.out_dim()};
}

DensityOperator apply(const QuantumChannel& n, const DensityOperator& rho,
                      std::size_t acting_subsystem) {
  const Dims& dims = rho.subsystem_dims();
  if (acting_subsystem >= dims.size()) {
    throw ValidationError("apply: subsystem index out of range");
  }
  if (dims[acting_subsystem] != n.in_dim()) {
    throw ValidationError("apply: subsystem dimension does not match channel input");
  }
  Index before = 1;
  Index after = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k < acting_subsystem) before *= dims[k];
    if (k > acting_subsystem) after *= dims[k];
  }
  Dims out_dims = dims;
  out_dims[acting_subsystem] = n.out_dim();
  const ComplexMatrix id_before = ComplexMatrix::Identity(before, before);
  const ComplexMatrix id_after = ComplexMatrix::Identity(after, after);
  const Index dim_out = before * n.out_dim() * after;
  ComplexMatrix out = ComplexMatrix::Zero(dim_out, dim_out);
  for (const ComplexMatrix& k : n.kraus()) {
    const ComplexMatrix full = kron(id_before, kron(k, id_after));
    out.noalias() += full * rho.matrix() * full.adjoint();
  }
  HermitianOperator op = HermitianOperator::from_hermitian_part(out, out_dims);
  if (n.trace_preserving() && rho.normalized()) return DensityOperator(std::move(op));
  return DensityOperator::subnormalized(std::move(op));
}

DensityOperator apply(const QuantumChannel& n, const DensityOperator& rho) {
  if (rho.subsystem_dims().size() != 1) {
    return apply(n, DensityOperator(rho.op().with_dims({rho.dim()})), 0);
  }
  return apply(n, rho, 0);
}

IsometryExtension stinespring_isometry(const QuantumChannel& n) {
  const Index env = static_cast<Index>(n.num_kraus());
  ComplexMatrix v = ComplexMatrix::Zero(n.out_dim() * env, n.in_dim());
  for (Index e = 0; e < env; ++e) {
    const ComplexMatrix& k = n.kraus()[static_cast<std::size_t>(e)];
    for (Index a = 0; a < n.out_dim(); ++a) v.row(a * env + e) = k.row(a);
  }
  return {v, n.in_dim(), n.out_dim(), env};
}

DensityOperator apply_isometry(const IsometryExtension& v, const DensityOperator& rho) {
  if (rho.dim() != v.in_dim) throw ValidationError("isometry input has wrong dimension");
  const ComplexMatrix out = v.isometry * rho.matrix() * v.isometry.adjoint();
  HermitianOperator op =
      HermitianOperator::from_hermitian_part(out, Dims{v.out_dim, v.env_dim});
  if (rho.normalized()) return DensityOperator(std::move(op));
  return DensityOperator::subnormalized(std::move(op));
}

bool is_ppt(const QuantumChannel& n, double tol) {
  const ChoiState c = choi_state(n);
  return min_eigenvalue(partial_transpose(c.state, 0)) >= -tol;
}

QuantumChannel compose(const QuantumChannel& n2, const QuantumChannel& n1) {
  if (n2.in_dim() != n1.out_dim()) throw ValidationError("compose: dimension mismatch");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(n2.num_kraus() * n1.num_kraus());
  for (const ComplexMatrix& b : n2.kraus()) {
    for (const ComplexMatrix& a : n1.kraus()) kraus.push_back(b * a);
  }
  if (n1.trace_preserving() && n2.trace_preserving()) return QuantumChannel(std::move(kraus));
  return QuantumChannel::cp_map(std::move(kraus));
}

QuantumChannel tensor_channels(const QuantumChannel& n, const QuantumChannel& m) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(n.num_kraus() * m.num_kraus());
  for (const ComplexMatrix& a : n.kraus()) {
    for (const ComplexMatrix& b : m.kraus()) kraus.push_back(kron(a, b));
  }
  if (n.trace_preserving() && m.trace_preserving()) return QuantumChannel(std::move(kraus));
  return QuantumChannel::cp_map(std::move(kraus));
}

QuantumChannel make_named_channel(const ChannelSpec& spec) {
  switch (spec.family) {
    case ChannelFamily::kDepolarizing:
      return depolarizing_channel(spec.p);
    case ChannelFamily::kDephasing1:
      return dephasing1_channel(spec.p);
    case ChannelFamily::kDephasing2:
      return dephasing2_channel(spec.p);
    case ChannelFamily::kReplacer: {
      if (!spec.omega) throw ValidationError("replacer: omega is required");
      const DensityOperator omega{HermitianOperator(*spec.omega)};
      return replacer_channel(omega, spec.in_dim.value_or(omega.dim()));
    }
    case ChannelFamily::kUnitary:
      return unitary_channel(spec.unitary.value_or(ComplexMatrix::Identity(2, 2)));
    case ChannelFamily::kPovm:
      return measurement_channel(spec.povm);
  }
  throw ValidationError("unknown channel family");
}

QuantumChannel qubit_family_member(ChannelFamily family, double p) {
  check_probability(p, "family member");
  switch (family) {
    case ChannelFamily::kDepolarizing:
      return depolarizing_channel(p);
    case ChannelFamily::kDephasing1:
      return dephasing1_channel(p);
    case ChannelFamily::kDephasing2:
      return dephasing2_channel(p);
    case ChannelFamily::kReplacer: {
      ComplexMatrix omega = ComplexMatrix::Zero(2, 2);
      omega(0, 0) = 1.0 - p;
      omega(1, 1) = p;
      return replacer_channel(DensityOperator(HermitianOperator(omega)), 2);
    }
    case ChannelFamily::kUnitary: {
      const double half = 0.5 * std::numbers::pi * p;
      const ComplexMatrix u = std::cos(half) * ComplexMatrix::Identity(2, 2) -
                              Complex(0.0, std::sin(half)) * pauli_x();
      return unitary_channel(u);
    }
    case ChannelFamily::kPovm:
      break;
  }
  throw ValidationError("no one-parameter qubit member for this family");
}

// ---------------------------------------------------------------------------
// Diamond distance

namespace {

void check_same_shape(const QuantumChannel& n, const QuantumChannel& m) {
  if (n.in_dim() != m.in_dim() || n.out_dim() != m.out_dim()) {
    throw ValidationError("diamond distance: channels have different dimensions");
  }
}

DiamondResult finish(const sdp::Solution& sol, double scale) {
  return {scale * sol.primal_value, scale * sol.duality_gap, sol.status, sol.iterations};
}

}  // namespace

DiamondResult diamond_distance_sdp(const QuantumChannel& n, const QuantumChannel& m,
                                   const Tolerances& tol) {
  check_same_shape(n, m);
  if (!n.trace_preserving() || !m.trace_preserving()) {
    return diamond_distance_general_sdp(n, m, tol);
  }
  const Index din = n.in_dim();
  const Index dout = n.out_dim();
  const Index dim = din * dout;
  const ComplexMatrix j = choi_matrix(n) - choi_matrix(m);

  sdp::Builder b(sdp::Sense::kMaximize);
  const Index w = b.add_block(dim);
  const Index s = b.add_block(dim);
  const Index rho = b.add_block(din);
  b.add_objective(w, j);
  b.add_hermitian_equality(dim,
                           {sdp::terms::identity(w), sdp::terms::identity(s),
                            sdp::terms::kron_identity_right(rho, din, dout, -1.0)},
                           ComplexMatrix::Zero(dim, dim));
  b.add_trace_equality({{rho, ComplexMatrix::Identity(din, din)}}, 1.0);
  return finish(sdp::solve(std::move(b).build(), tol), 1.0);
}

DiamondResult diamond_distance_general_sdp(const QuantumChannel& n,
                                           const QuantumChannel& m,
                                           const Tolerances& tol) {
  check_same_shape(n, m);
  const Index din = n.in_dim();
  const Index dout = n.out_dim();
  const Index dim = din * dout;
  const ComplexMatrix j = choi_matrix(n) - choi_matrix(m);

  sdp::Builder b(sdp::Sense::kMaximize);
  const Index y = b.add_block(2 * dim);
  const Index rho0 = b.add_block(din);
  const Index rho1 = b.add_block(din);
  ComplexMatrix c = ComplexMatrix::Zero(2 * dim, 2 * dim);
  c.block(dim, 0, dim, dim) = 0.5 * j;
  c.block(0, dim, dim, dim) = 0.5 * j.adjoint();
  b.add_objective(y, c);
  b.add_hermitian_equality(dim,
                           {sdp::terms::sub_block(y, 0, 0),
                            sdp::terms::kron_identity_right(rho0, din, dout, -1.0)},
                           ComplexMatrix::Zero(dim, dim));
  b.add_hermitian_equality(dim,
                           {sdp::terms::sub_block(y, dim, dim),
                            sdp::terms::kron_identity_right(rho1, din, dout, -1.0)},
                           ComplexMatrix::Zero(dim, dim));
  b.add_trace_equality({{rho0, ComplexMatrix::Identity(din, din)}}, 1.0);
  b.add_trace_equality({{rho1, ComplexMatrix::Identity(din, din)}}, 1.0);
  return finish(sdp::solve(std::move(b).build(), tol), 0.5);
}

double diamond_distance(const QuantumChannel& n, const QuantumChannel& m) {
  const DiamondResult r = diamond_distance_sdp(n, m);
  if (r.status != sdp::Status::kOptimal) {
    throw SolverError("diamond distance SDP ended with status " + sdp::to_string(r.status));
  }
  return std::max(0.0, r.value);
}

}  // namespace qdyn
