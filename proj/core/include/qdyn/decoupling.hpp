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

// Monte Carlo checks of decoupling under Haar-random unitaries on A, and
// the subsystem search behind the decoupling erasure protocol.
//
// Each Monte Carlo run draws one master key from the caller's sampler and
// gives sample i its own stream derive_seed(key, i), so reports depend on
// the sampler state and n only, never on the worker count.

#ifndef QDYN_DECOUPLING_HPP
#define QDYN_DECOUPLING_HPP

#include <string>

#include "qdyn/channels.hpp"
#include "qdyn/haar.hpp"
#include "qdyn/thermo.hpp"

namespace qdyn {

struct DecouplingReport {
  int n_samples = 0;       // samples that entered the mean
  double mean_lhs = 0.0;
  double std_err = 0.0;    // sample standard deviation / sqrt(n_samples)
  double bound_rhs = 0.0;
  double epsilon = 0.0;
  bool pass = false;       // mean_lhs <= bound_rhs + 3 std_err
  int n_failed = 0;        // samples skipped after an SDP failure
  double max_duality_gap = 0.0;
};

/// JSON object {n_samples, mean_lhs, std_err, bound_rhs, epsilon, pass}.
std::string to_json(const DecouplingReport& report);

/// Estimates the average of ||T(U phi U^dagger) - phi_R (x) T(pi_A)||_1 over
/// Haar U on A and compares it with
///   2^(-(S_min(A|R)_phi + S_min(A|B)_{Phi^T}) / 2) + 12 eps,
/// where the entropies are the up variants, exact at eps = 0 and certified
/// smoothing lower bounds otherwise. phi has dims {|R|, |A|}; T maps A to B
/// with tr Gamma^T <= |A|.
DecouplingReport decouple_states_mc(const DensityOperator& phi_ra, const QuantumChannel& t,
                                    int n, double eps, HaarSampler& sampler, int workers = 1);

/// Estimates the average of ||T o U o N - T o R^pi||_diamond over Haar U on
/// A, one diamond SDP per sample, against
///   2^(-(S_min[N] + S_min(A|B)_{Phi^T}) / 2) + 12 eps.
/// Samples whose SDP fails are skipped and counted in n_failed.
DecouplingReport decouple_channel_mc(const QuantumChannel& n, const QuantumChannel& t, int count,
                                     double eps, HaarSampler& sampler, int workers = 1);

struct SubsystemSearchResult {
  Index a1_dim = 1;
  double trace_distance_to_product = 0.0;  // 1/2 ||phi_RA1 - phi_R (x) pi_A1||_1
  double delta_prime = 0.0;
  ComplexMatrix unitary_used;
  /// 1/2 (log|A| + S_min(A|R)) + log(2 delta' - 12 eps).
  double guaranteed_log_a1 = 0.0;
  /// a1_dim reaches the guaranteed size (trivially true when it is below 1).
  bool meets_guarantee = false;
  int tries = 0;
};

/// For each tensor split A = A1 (x) A2 of the computational basis, largest
/// |A1| first, draws up to max_tries Haar unitaries on A and keeps the first
/// split with distance <= delta'. Falls back to |A1| = 1 at distance 0.
/// phi is pure with dims {|R|, |A|, |E|}. Throws ValidationError unless
/// delta' > 6 eps.
SubsystemSearchResult find_decoupled_subsystem(const DensityOperator& phi_rae,
                                               double delta_prime, double eps,
                                               HaarSampler& sampler, int max_tries = 50);

struct ErasureProtocolReport {
  WorkCost protocol;       // (log|A| - 2 log|A1|) k_B T ln 2
  WorkCost entropy_bound;  // (-S_min(A|R) - 2 log(2 delta' - 12 eps)) k_B T ln 2
  SubsystemSearchResult search;
  /// protocol <= entropy_bound + 1e-9 whenever the search met its guarantee.
  bool consistent = false;
};

ErasureProtocolReport erasure_protocol_work(const DensityOperator& phi_rae, double delta_prime,
                                            double eps, double temperature_kelvin,
                                            HaarSampler& sampler, int max_tries = 50);

}  // namespace qdyn

#endif  // QDYN_DECOUPLING_HPP
