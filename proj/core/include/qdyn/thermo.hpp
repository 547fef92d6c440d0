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

// Work costs of erasing and preparing states and channels.
//
// Costs are computed in bits (units of k_B T ln 2) and converted to joules
// last. A negative cost is work that can be extracted.

#ifndef QDYN_THERMO_HPP
#define QDYN_THERMO_HPP

#include <string>

#include "qdyn/channels.hpp"
#include "qdyn/dynamical.hpp"
#include "qdyn/entropies.hpp"

namespace qdyn {

/// Boltzmann constant in J/K (exact SI value).
inline constexpr double kBoltzmann = 1.380649e-23;

/// 300 K unless the environment variable KELVIN_DEFAULT holds a positive
/// number.
double default_temperature();

/// How a reported number relates to the quantity it stands for.
enum class Certification {
  kExact,           // closed form or optimal SDP value
  kCertifiedLower,  // provably <= the quantity
  kCertifiedUpper,  // provably >= the quantity
  kSampled,         // extremum over sampled inputs
};

/// "exact", "certified-lower", "certified-upper" or "sampled".
std::string to_string(Certification c);

struct WorkCost {
  double bits = 0.0;
  double temperature_kelvin = 300.0;
  double joules = 0.0;  // bits k_B T ln 2
  Certification certification = Certification::kExact;

  bool extractable() const { return bits < 0.0; }
};

/// Throws ValidationError unless temperature_kelvin > 0 and bits is not NaN.
WorkCost make_work_cost(double bits, double temperature_kelvin,
                        Certification certification = Certification::kExact);

/// -S_min^{down,mu}(A|B). mu = 0 is exact; mu > 0 negates the certified
/// smoothing lower bound and is tagged certified-upper.
WorkCost resource_prep_cost_state(const DensityOperator& rho_ab, double mu,
                                  double temperature_kelvin);

/// S_H^mu(A|B). Throws SolverError if the SDP for mu > 0 fails.
WorkCost resource_eras_cost_state(const DensityOperator& rho_ab, double mu,
                                  double temperature_kelvin);

struct SumBoundReport {
  double sum_bits = 0.0;          // erasure plus preparation
  double lower_bound_bits = 0.0;  // -inf when vacuous
  bool vacuous = false;           // 1 - mu/(1 - mu^2) <= 0
  bool pass = false;
  /// exact at mu = 0; certified-upper otherwise, since the preparation term
  /// comes from a smoothing lower bound.
  Certification certification = Certification::kExact;
};

/// Checks that erasure plus preparation is at least 0 at mu = 0, and at
/// least log(1 - mu/(1 - mu^2)) - 2 for mu > 0.
SumBoundReport sum_bound_check(const DensityOperator& rho_ab, double mu,
                               const Tolerances& tol = kTol);

struct CostReport {
  double mu = 0.0;
  WorkCost prep_cost;   // sup over pure psi_RA' of the state cost of N(psi), A|R
  WorkCost eras_cost;   // sup over mixed rho_A' of the state cost of V rho V^dagger, A|E
  double eras_pure_bits = 0.0;  // the same sup restricted to pure inputs
  double s_min_channel = 0.0;
  std::string attained_inputs;
  int n_inputs = 0;
  int n_failed = 0;
  /// prep <= -(smoothed channel entropy lower bound) + 1e-6 and
  /// eras <= -S_min[N] + log(1 - mu) + 1e-6.
  bool upper_bounds_hold = false;
  /// At mu = 0: both costs within 0.02 bits of -S_min[N] and neither above
  /// it by more than 1e-6. Always true for mu > 0.
  bool zero_error_identity_holds = false;
  std::string certification;
};

/// Channel preparation and erasure costs by scanning inputs: the structured
/// candidates of the dynamical scan plus `n_samples` Haar-random inputs.
CostReport channel_costs(const QuantumChannel& n, double mu, double temperature_kelvin,
                         const ScanOptions& options = {});

/// JSON object {mu, temperature_kelvin, prep_bits, eras_bits, prep_joules,
/// eras_joules, s_min_channel, certification}.
std::string to_json(const CostReport& report);

struct AdversarialBound {
  WorkCost bound;            // -(smoothed channel entropy lower bound) + delta
  double probability = 0.0;  // 1 - sqrt(2^(-delta/2) + 12 eps), clamped to [0, 1]
  bool probability_valid = false;  // false when the unclamped value is negative
};

/// Requires eps in [0, 1) and delta > 0.
AdversarialBound adversarial_erasure_bound(const QuantumChannel& n, double eps, double delta,
                                           double temperature_kelvin);

struct ReconciliationReport {
  double adversarial_bits = 0.0;   // adversarial_erasure_bound
  double zero_error_bits = 0.0;    // -S_min[N]
  double sampled_eras_bits = 0.0;  // channel_costs at mu = 0
  double delta = 0.0;
  /// adversarial_bits <= zero_error_bits + delta + 1e-9.
  bool pass = false;
};

/// Relates the adversarial erasure bound at (eps, delta) to the zero-error
/// erasure cost. Smoothing toward the depolarizer never lowers the channel
/// entropy, so the bound cannot exceed the zero-error cost plus delta.
ReconciliationReport reconciliation_report(const QuantumChannel& n, double eps, double delta,
                                           double temperature_kelvin,
                                           const ScanOptions& options = {});

struct WorkExtraction {
  WorkCost extraction;  // pure to maximally mixed, -d bits
  WorkCost erasure;     // maximally mixed to pure, +d bits
};

/// Energy ledger for d qubits. Throws ValidationError for d < 0.
WorkExtraction work_extraction_ledger(int d_qubits, double temperature_kelvin);

}  // namespace qdyn

#endif  // QDYN_THERMO_HPP
