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

// Quantum channels in Kraus form, their Choi states and Stinespring
// isometries, and the named qubit families.
//
// Conventions: the Choi state of N : L(A') -> L(A) lives on R (x) A with the
// reference first, Phi^N = (id_R (x) N)(Phi_RA'), normalized by 1/|A'|.
// A Stinespring isometry V : A' -> A (x) E stacks Kraus operators as
// V = sum_i K_i (x) |i>_E, so the environment index varies fastest.

#ifndef QDYN_CHANNELS_HPP
#define QDYN_CHANNELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdyn/haar.hpp"
#include "qdyn/linalg.hpp"
#include "qdyn/sdp.hpp"

namespace qdyn {

/// Completely positive map given by Kraus operators, each out_dim x in_dim.
/// The default constructor path enforces trace preservation; `cp_map`
/// admits trace-decreasing maps.
class QuantumChannel {
 public:
  QuantumChannel() = default;

  /// Throws ValidationError on shape mismatch or if
  /// ||sum K^dagger K - 1|| exceeds the completeness tolerance.
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus);

  /// Completely positive map with tr(Gamma) <= in_dim, i.e. trace
  /// non-increasing on average. Used for the decoupling map T.
  static QuantumChannel cp_map(std::vector<ComplexMatrix> kraus);

  Index in_dim() const { return in_dim_; }
  Index out_dim() const { return out_dim_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t num_kraus() const { return kraus_.size(); }
  bool trace_preserving() const { return trace_preserving_; }

  /// sum_i K_i X K_i^dagger for an in_dim x in_dim matrix X.
  ComplexMatrix operator()(const ComplexMatrix& x) const;

 private:
  QuantumChannel(std::vector<ComplexMatrix> kraus, bool require_tp);

  std::vector<ComplexMatrix> kraus_;
  Index in_dim_ = 0;
  Index out_dim_ = 0;
  bool trace_preserving_ = true;
};

enum class ChannelFamily {
  kDepolarizing,
  kDephasing1,
  kDephasing2,
  kReplacer,
  kUnitary,
  kPovm,
};

std::string to_string(ChannelFamily family);
/// Accepts the lower-case names used by to_string.
std::optional<ChannelFamily> parse_channel_family(const std::string& name);

/// Parameters for make_named_channel. Only the fields relevant to `family`
/// are read: `p` for the noise families, `omega` (and `in_dim`) for the
/// replacer, `unitary` for the unitary family and `povm` for measurements.
struct ChannelSpec {
  ChannelFamily family = ChannelFamily::kDepolarizing;
  double p = 0.0;
  std::optional<ComplexMatrix> omega;
  std::optional<ComplexMatrix> unitary;
  std::vector<ComplexMatrix> povm;
  std::optional<Index> in_dim;
};

QuantumChannel make_named_channel(const ChannelSpec& spec);

/// One-parameter qubit member of a family for p in [0, 1]: the noise
/// families at p, the replacer with omega = diag(1-p, p) and the unitary
/// exp(-i p pi X / 2). Throws ValidationError for the povm family.
QuantumChannel qubit_family_member(ChannelFamily family, double p);

/// Kraus {sqrt(1-p) 1, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z}.
QuantumChannel depolarizing_channel(double p);
/// Kraus {sqrt(1-p) 1, sqrt(p) |0><0|, sqrt(p) |1><1|}.
QuantumChannel dephasing1_channel(double p);
/// Kraus {sqrt(1-p) 1, sqrt(p) Z}.
QuantumChannel dephasing2_channel(double p);
/// rho -> tr(rho) omega for inputs of dimension in_dim.
QuantumChannel replacer_channel(const DensityOperator& omega, Index in_dim);
/// Same map realized by swapping the input with an environment prepared
/// in omega and discarding the environment.
QuantumChannel replacer_via_swap(const DensityOperator& omega);
QuantumChannel unitary_channel(const ComplexMatrix& u);
/// rho -> V rho V^dagger for an isometry V.
QuantumChannel isometry_channel(const ComplexMatrix& v);
QuantumChannel identity_channel(Index dim);
/// rho -> sum_x tr(Lambda_x rho) |x><x|. Throws ValidationError unless the
/// elements are PSD and sum to the identity.
QuantumChannel measurement_channel(const std::vector<ComplexMatrix>& povm);
/// Channel with a Haar-random Stinespring isometry into out_dim * env_dim.
QuantumChannel random_channel(Index in_dim, Index out_dim, Index env_dim,
                              HaarSampler& sampler);

struct ChoiState {
  DensityOperator state;  // subsystem dims {in_dim, out_dim}
  Index in_dim = 0;
  Index out_dim = 0;
};

ChoiState choi_state(const QuantumChannel& n);

/// Unnormalized Choi operator Gamma^N = sum_ij |i><j| (x) N(|i><j|) on
/// R (x) A, so that Phi^N = Gamma^N / in_dim.
ComplexMatrix choi_matrix(const QuantumChannel& n);

/// Applies `n` to tensor factor `acting_subsystem` of `rho`. The result keeps
/// the other factors in place and replaces that factor's dimension by
/// out_dim. Throws ValidationError on a dimension mismatch.
DensityOperator apply(const QuantumChannel& n, const DensityOperator& rho,
                      std::size_t acting_subsystem);
/// Single-system form.
DensityOperator apply(const QuantumChannel& n, const DensityOperator& rho);

struct IsometryExtension {
  ComplexMatrix isometry;  // (out_dim * env_dim) x in_dim
  Index in_dim = 0;
  Index out_dim = 0;
  Index env_dim = 0;
};

IsometryExtension stinespring_isometry(const QuantumChannel& n);

/// V rho V^dagger on A (x) E with subsystem dims {out_dim, env_dim}.
DensityOperator apply_isometry(const IsometryExtension& v, const DensityOperator& rho);

/// True iff the partial transpose of the Choi state has smallest eigenvalue
/// at least -tol.
bool is_ppt(const QuantumChannel& n, double tol = kTol.ppt);

/// n2 after n1.
QuantumChannel compose(const QuantumChannel& n2, const QuantumChannel& n1);
/// n acting on the first factor, m on the second.
QuantumChannel tensor_channels(const QuantumChannel& n, const QuantumChannel& m);

struct DiamondResult {
  double value = 0.0;  // 1/2 ||N - M||_diamond
  double duality_gap = 0.0;
  sdp::Status status = sdp::Status::kMaxIterations;
  int iterations = 0;
};

/// 1/2 ||N - M||_diamond by semidefinite programming on the Choi operator of
/// the difference. Trace-preserving pairs use the single-block formulation
///   max tr(J W)  s.t.  0 <= W <= rho_R (x) 1_A,  tr rho_R = 1,
/// other pairs the two-density formulation. Does not throw on solver
/// failure; inspect `status`.
DiamondResult diamond_distance_sdp(const QuantumChannel& n, const QuantumChannel& m,
                                   const Tolerances& tol = kTol);

/// The two-density formulation, valid for any Hermiticity-preserving
/// difference:
///   max Re tr(J X)  s.t.  [[rho0 (x) 1, X], [X^dagger, rho1 (x) 1]] >= 0.
DiamondResult diamond_distance_general_sdp(const QuantumChannel& n,
                                           const QuantumChannel& m,
                                           const Tolerances& tol = kTol);

/// Value of diamond_distance_sdp; throws SolverError unless optimal.
double diamond_distance(const QuantumChannel& n, const QuantumChannel& m);

}  // namespace qdyn

#endif  // QDYN_CHANNELS_HPP
