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

// State-level divergences and conditional entropies, in bits.
//
// Conditional quantities take a bipartite operator with subsystem dims
// {|A|, |B|} and condition on the second factor. Support decisions use the
// eigenvalue cutoff Tolerances::support_cutoff.

#ifndef QDYN_ENTROPIES_HPP
#define QDYN_ENTROPIES_HPP

#include <limits>
#include <string>

#include "qdyn/linalg.hpp"
#include "qdyn/sdp.hpp"

namespace qdyn {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Value of a quantity obtained from one SDP solve.
struct SdpEstimate {
  double value = 0.0;
  double duality_gap = 0.0;
  sdp::Status status = sdp::Status::kMaxIterations;
  int iterations = 0;

  bool optimal() const { return status == sdp::Status::kOptimal; }
};

// ---------------------------------------------------------------------------
// Divergences

/// log inf{lambda : lambda sigma >= rho}; +inf when supp(rho) is not inside
/// supp(sigma). rho may be subnormalized, sigma any PSD operator.
double d_max(const HermitianOperator& rho, const HermitianOperator& sigma,
             const Tolerances& tol = kTol);

/// The same quantity as log of min{lambda : lambda sigma - rho >= 0} solved
/// as an SDP, for cross-checking the spectral formula.
SdpEstimate d_max_sdp(const HermitianOperator& rho, const HermitianOperator& sigma,
                      const Tolerances& tol = kTol);

/// tr rho (log rho - log sigma); +inf on a support violation.
double relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma,
                        const Tolerances& tol = kTol);

/// -log tr(Pi_rho sigma), the alpha -> 0 Petz limit.
double d_zero(const HermitianOperator& rho, const HermitianOperator& sigma,
              const Tolerances& tol = kTol);

/// (1/(alpha-1)) log tr(rho^alpha sigma^(1-alpha)) for finite alpha >= 0;
/// alpha = 0 gives d_zero and alpha = 1 the relative entropy. Data
/// processing holds on (0, 2]. +inf on a support violation for alpha > 1.
double petz_renyi(double alpha, const HermitianOperator& rho,
                  const HermitianOperator& sigma, const Tolerances& tol = kTol);

/// (1/(alpha-1)) log tr((sigma^g rho sigma^g)^alpha), g = (1-alpha)/(2 alpha),
/// for alpha >= 1/2. alpha = 1 gives the relative entropy and alpha = +inf
/// gives d_max. +inf on a support violation for alpha > 1.
double sandwiched_renyi(double alpha, const HermitianOperator& rho,
                        const HermitianOperator& sigma, const Tolerances& tol = kTol);

/// -log min{tr(Lambda sigma) : 0 <= Lambda <= 1, tr(rho Lambda) >= 1 - eps}.
/// eps = 0 uses the closed form d_zero; eps in (0, 1) solves an SDP.
SdpEstimate d_hypothesis_sdp(double eps, const HermitianOperator& rho,
                             const HermitianOperator& sigma, const Tolerances& tol = kTol);
/// Value of d_hypothesis_sdp; throws SolverError unless optimal.
double d_hypothesis(double eps, const HermitianOperator& rho,
                    const HermitianOperator& sigma, const Tolerances& tol = kTol);

// ---------------------------------------------------------------------------
// Conditional entropies

/// -log min{tr X_B : 1_A (x) X_B >= rho_AB}.
SdpEstimate cond_min_entropy_up_sdp(const HermitianOperator& rho_ab,
                                    const Tolerances& tol = kTol);
/// Value of cond_min_entropy_up_sdp; throws SolverError unless optimal.
double cond_min_entropy_up(const HermitianOperator& rho_ab, const Tolerances& tol = kTol);

/// -D_max(rho_AB || 1_A (x) rho_B) with rho_B the marginal of the argument.
double cond_min_entropy_down(const HermitianOperator& rho_ab, const Tolerances& tol = kTol);

/// cond_min_entropy_down through d_max_sdp.
SdpEstimate cond_min_entropy_down_sdp(const HermitianOperator& rho_ab,
                                      const Tolerances& tol = kTol);

/// sup over states sigma_B of -D_H^eps(rho_AB || 1_A (x) sigma_B). At
/// eps = 0 this is log lambda_max(tr_A Pi_rho); for eps in (0, 1) it is the
/// log of max mu(1-eps) - tr Z over mu >= 0, Z >= 0, states sigma with
/// mu rho <= 1 (x) sigma + Z.
SdpEstimate cond_hypothesis_entropy_sdp(double eps, const HermitianOperator& rho_ab,
                                        const Tolerances& tol = kTol);
double cond_hypothesis_entropy(double eps, const HermitianOperator& rho_ab,
                               const Tolerances& tol = kTol);

/// max over states sigma_B of F(rho_AB, 1_A (x) sigma_B), by an SDP over the
/// support of rho. `value` holds the fidelity.
SdpEstimate max_product_fidelity_sdp(const HermitianOperator& rho_ab,
                                     const Tolerances& tol = kTol);

/// Sandwiched order-1/2 conditional entropy sup_sigma log F(rho, 1 (x) sigma).
double cond_renyi_half_up(const HermitianOperator& rho_ab, const Tolerances& tol = kTol);

// ---------------------------------------------------------------------------
// Smoothing

enum class MinEntropyVariant { kUp, kDown };

std::string to_string(MinEntropyVariant variant);

struct SmoothingBound {
  double value = 0.0;            // certified lower bound, bits
  double purified_distance = 0.0;  // of the witness from the center
  std::string witness;           // description of the attaining candidate
};

/// Certified lower bound on the eps-smoothed min-entropy: the entropy of an
/// explicit subnormalized witness inside the purified-distance ball. The
/// witnesses are scalings of (1-t) rho + t Delta over a fixed t grid for
/// directions Delta in {pi_A (x) rho_B, pi_AB, rho without its top
/// eigencomponent}; t = 0 is always included, so the bound never falls
/// below the unsmoothed value and is nondecreasing in eps.
/// Requires unit-trace rho and eps in [0, 1).
SmoothingBound smooth_min_entropy_lower_bound(double eps, const DensityOperator& rho_ab,
                                              MinEntropyVariant variant,
                                              const Tolerances& tol = kTol);

/// Certified upper bound S_H^{1-eps^2-mu}(A|B) + log(4(1-eps^2)/mu^2) on
/// the eps-smoothed up-variant min-entropy, for eps in (0, 1) and
/// mu in (0, 1-eps^2]. Throws SolverError if the S_H SDP fails.
double smooth_min_entropy_upper_bound(double eps, double mu, const DensityOperator& rho_ab,
                                      const Tolerances& tol = kTol);

}  // namespace qdyn

#endif  // QDYN_ENTROPIES_HPP
