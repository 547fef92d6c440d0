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

#ifndef QDYN_TOLERANCES_HPP
#define QDYN_TOLERANCES_HPP

namespace qdyn {

/// Numerical thresholds shared by every module.
struct Tolerances {
  /// Elementwise |M - M^dagger| allowed for a Hermitian operator.
  double hermiticity = 1e-12;
  /// Smallest eigenvalue accepted as "positive semidefinite".
  double psd = 1e-10;
  /// |tr(rho) - 1| accepted for a normalized state.
  double trace = 1e-10;
  /// Eigenvalues in [-sqrt_clamp, 0) are clamped to zero before matrix roots.
  double sqrt_clamp = 1e-10;
  /// Rank decision rule for support projectors.
  double support_cutoff = 1e-9;
  /// ||sum K^dagger K - 1|| accepted for a trace-preserving Kraus list.
  double kraus_completeness = 1e-10;
  /// Minimum eigenvalue of a partial transpose accepted as PPT.
  double ppt = 1e-10;
  /// Interior-point stopping rule: relative duality gap.
  double sdp_relative_gap = 1e-8;
  /// Interior-point stopping rule: relative primal/dual residual.
  double sdp_feasibility = 1e-8;
  /// Absolute duality gap an optimal certificate must meet.
  double sdp_gap = 1e-7;
  /// Dual objective magnitude that signals primal infeasibility.
  double sdp_divergence = 1e10;
  int sdp_max_iterations = 200;
  double sdp_step_fraction = 0.98;
};

inline constexpr Tolerances kTol{};

}  // namespace qdyn

#endif  // QDYN_TOLERANCES_HPP
