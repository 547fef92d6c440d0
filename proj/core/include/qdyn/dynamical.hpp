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

// Min-entropy of a quantum channel N : A' -> A, its sampled variational
// forms, smoothing and continuity. Values are in bits.
//
// Input scans draw every sample from its own stream derive_seed(seed, i),
// so results depend on the master seed only, never on the worker count.

#ifndef QDYN_DYNAMICAL_HPP
#define QDYN_DYNAMICAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qdyn/channels.hpp"
#include "qdyn/entropies.hpp"

namespace qdyn {

/// Largest eigenvalue of the normalized Choi state.
double choi_lambda_max(const QuantumChannel& n);

/// -log(|A'| lambda_max(Phi^N)).
double channel_min_entropy(const QuantumChannel& n);

/// The same value by the SDP route: cond_min_entropy_down_sdp on the Choi
/// state with A conditioned on R.
SdpEstimate channel_min_entropy_sdp(const QuantumChannel& n, const Tolerances& tol = kTol);

/// Pure input psi on R (x) A' with |R| = |A'|.
struct ScanInput {
  std::string name;
  ComplexVector psi;
};

/// Scan candidates that need no randomness: the maximally entangled state,
/// product states |0>|k>, and the purification whose R-marginal is that of
/// the top Choi eigenvector.
std::vector<ScanInput> structured_inputs(const QuantumChannel& n);

/// Haar-random input number `index` under master seed `seed`.
ComplexVector haar_input(Index in_dim, std::uint64_t seed, int index);

/// R-marginal of the top eigenvector of the Choi state.
HermitianOperator choi_top_marginal(const QuantumChannel& n);

struct ScanOptions {
  int n_samples = 200;      // Haar-random inputs, on top of the structured ones
  std::uint64_t seed = 42;
  int workers = 1;
  /// Skip the SDP for an input whose closed-form down-variant entropy already
  /// reaches the structured minimum; exact since S^down <= S^up.
  bool prune = true;
  /// Nelder-Mead refinement from the best input, in SDP evaluations.
  int refine_evaluations = 0;
  Tolerances tol = kTol;
};

struct ChannelEntropyReport {
  double s_min = 0.0;          // closed form
  double lambda_max = 0.0;     // of the normalized Choi state
  double closed_form = 0.0;
  double sdp_value = 0.0;
  double sdp_gap = 0.0;
  double inf_scan_value = 0.0;
  std::string scan_argmin;     // description of the minimizing input
  int n_scan_samples = 0;      // inputs evaluated, structured included
  int n_pruned = 0;
  int n_failed = 0;
  bool sdp_agrees = false;     // |closed_form - sdp_value| <= 1e-6
  bool scan_consistent = false;  // inf_scan_value >= s_min - 1e-6
};

/// Minimum of S_min^up(A|R) over pure inputs psi_RA' with |R| = |A'|: the
/// maximally entangled state, product basis states, a Choi-derived input
/// and `n_samples` Haar-random states, optionally refined.
ChannelEntropyReport channel_min_entropy_scan(const QuantumChannel& n,
                                              const ScanOptions& options = {});

/// log of the best sampled |A| F(M (x) N(psi), Phi) over channels M, each
/// value obtained from its own singlet-fidelity SDP. Never exceeds
/// -S_min[N] beyond solver accuracy.
SdpEstimate singlet_fidelity_dual(const QuantumChannel& n, const ScanOptions& options = {});

/// log of the best sampled |A| F(V rho V^dagger, pi_A (x) sigma_E) over
/// inputs rho and environment states sigma, with V a Stinespring isometry.
SdpEstimate env_decoupling_dual(const QuantumChannel& n, const ScanOptions& options = {});

/// log(|A| max_M F(M (x) id(rho_RA), Phi)) for a state on R (x) A, which
/// equals -S_min^up(A|R). Maximizes tr(G J) over Choi matrices J of M.
SdpEstimate singlet_fidelity_sdp(const HermitianOperator& rho_ra,
                                 const Tolerances& tol = kTol);

/// (1 - t) N + t R^pi, with R^pi the completely depolarizing channel.
QuantumChannel mix_with_depolarizer(const QuantumChannel& n, double t);

struct ChannelSmoothingBound {
  double value = 0.0;  // certified lower bound on the smoothed channel entropy
  double t = 0.0;      // mixing weight of the witness channel
  double purified_distance_bound = 0.0;
};

/// S_min of (1 - t) N + t R^pi at t = 1 - sqrt(1 - eps^2). Joint concavity
/// of the root fidelity gives F >= (1 - t)^2 on every input, so the witness
/// lies in the eps-ball.
ChannelSmoothingBound smooth_channel_min_entropy_lower_bound(double eps,
                                                             const QuantumChannel& n);

struct ChannelSmoothingReport {
  double channel_bound = 0.0;        // smooth_channel_min_entropy_lower_bound
  double min_witness_value = 0.0;    // min over psi of S^up(A|R) at M(psi)
  double min_upper_bound = 0.0;      // min over psi of the hypothesis bound
  double max_state_distance = 0.0;   // max over psi of P(N(psi), M(psi))
  int n_inputs = 0;
  int violations = 0;
  bool pass = false;
};

/// Checks S^eps_min[N] <= S^eps_min(A|R)_{N(psi)} on sampled psi through two
/// routes: the witness chain channel_bound <= S^up(A|R)_{M(psi)} with
/// M(psi) in the eps-ball of N(psi), and channel_bound <= the hypothesis
/// testing upper bound on S^eps_min(A|R)_{N(psi)}.
ChannelSmoothingReport channel_smoothing_check(double eps, const QuantumChannel& n,
                                               const ScanOptions& options);

struct ContinuityReport {
  double lhs = 0.0;    // |S_min[N] - S_min[M]|
  double rhs = 0.0;    // |A| min(|A|, |A'|) delta / ln 2
  double delta = 0.0;  // half diamond distance
  double duality_gap = 0.0;
  bool pass = false;
};

/// Throws SolverError if the diamond SDP fails.
ContinuityReport continuity_check(const QuantumChannel& n, const QuantumChannel& m);

/// |S_min[U2 o N o U1] - S_min[N]| <= 1e-9 for unitaries U1 on A', U2 on A.
bool unitary_covariance_check(const QuantumChannel& n, const ComplexMatrix& u1,
                              const ComplexMatrix& u2);

struct CompositionProbe {
  double composite = 0.0;  // S_min[N2 o N1]
  double first = 0.0;      // S_min[N1]
  double second = 0.0;     // S_min[N2]
};

/// Reports the entropies of a composition and its parts without asserting
/// an order between them.
CompositionProbe composition_probe(const QuantumChannel& n2, const QuantumChannel& n1);

}  // namespace qdyn

#endif  // QDYN_DYNAMICAL_HPP
