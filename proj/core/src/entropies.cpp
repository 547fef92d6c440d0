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

#include "qdyn/entropies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "qdyn/error.hpp"

namespace qdyn {
namespace {

void check_same_dim(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError("divergence arguments must have equal dimension");
  }
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("eps must lie in [0, 1)");
}

struct Bipartite {
  Index a = 0;
  Index b = 0;
};

Bipartite bipartite_dims(const HermitianOperator& h) {
  if (h.num_subsystems() != 2) {
    throw ValidationError("conditional entropy needs subsystem dims {|A|, |B|}");
  }
  return {h.subsystem_dims()[0], h.subsystem_dims()[1]};
}

/// f applied to the eigenvalues above `cutoff`; the rest map to zero.
ComplexMatrix spectral_on_support(const HermitianOperator& h,
                                  const std::function<double(double)>& f, double cutoff) {
  const EigenDecomposition e = herm_eig(h);
  RealVector g = RealVector::Zero(e.values.size());
  for (Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > cutoff) g(i) = f(e.values(i));
  }
  return e.vectors * g.asDiagonal() * e.vectors.adjoint();
}

/// True when rho has weight above the cutoff outside supp(sigma).
bool support_violated(const HermitianOperator& rho, const HermitianOperator& sigma,
                      const Tolerances& tol) {
  const ComplexMatrix outside = ComplexMatrix::Identity(sigma.dim(), sigma.dim()) -
                                support_projector(sigma, tol.support_cutoff).matrix();
  return (outside * rho.matrix()).trace().real() > tol.support_cutoff;
}

/// tr(M^alpha) for PSD M. Eigenvalues below the rounding floor relative to
/// the largest one are dropped, since alpha < 1 would amplify them.
double trace_power(const HermitianOperator& m, double alpha) {
  const RealVector ev = eigenvalues(m);
  const double floor = 1e-14 * std::max(ev.maxCoeff(), 0.0);
  double s = 0.0;
  for (const double v : ev) {
    if (v > floor) s += std::pow(v, alpha);
  }
  return s;
}

SdpEstimate to_estimate(const sdp::Solution& s, double value) {
  SdpEstimate e;
  e.value = value;
  e.duality_gap = s.duality_gap;
  e.status = s.status;
  e.iterations = s.iterations;
  return e;
}

double require_optimal(const SdpEstimate& e, const char* what) {
  if (!e.optimal()) {
    throw SolverError(std::string(what) + " SDP ended with status " +
                      sdp::to_string(e.status));
  }
  return e.value;
}

double safe_log2(double x) { return x > 0.0 ? std::log2(x) : -kInfinity; }

}  // namespace

// ---------------------------------------------------------------------------
// Divergences

double d_max(const HermitianOperator& rho, const HermitianOperator& sigma,
             const Tolerances& tol) {
  check_same_dim(rho, sigma);
  if (support_violated(rho, sigma, tol)) return kInfinity;
  const ComplexMatrix s = spectral_on_support(
      sigma, [](double v) { return 1.0 / std::sqrt(v); }, tol.support_cutoff);
  const double lambda =
      max_eigenvalue(HermitianOperator::from_hermitian_part(s * rho.matrix() * s));
  return safe_log2(lambda);
}

SdpEstimate d_max_sdp(const HermitianOperator& rho, const HermitianOperator& sigma,
                      const Tolerances& tol) {
  check_same_dim(rho, sigma);
  const Index n = rho.dim();
  sdp::Builder b(sdp::Sense::kMinimize);
  const Index lambda = b.add_block(1);
  const Index slack = b.add_block(n);
  b.add_objective(lambda, ComplexMatrix::Identity(1, 1));
  b.add_hermitian_equality(n,
                           {sdp::terms::scalar_times(lambda, sigma.matrix()),
                            sdp::terms::identity(slack, -1.0)},
                           rho.matrix());
  const sdp::Solution sol = sdp::solve(std::move(b).build(), tol);
  return to_estimate(sol, safe_log2(sol.primal_value));
}

double relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma,
                        const Tolerances& tol) {
  check_same_dim(rho, sigma);
  if (support_violated(rho, sigma, tol)) return kInfinity;
  const auto log2f = [](double v) { return std::log2(v); };
  const ComplexMatrix log_rho = spectral_on_support(rho, log2f, tol.support_cutoff);
  const ComplexMatrix log_sigma = spectral_on_support(sigma, log2f, tol.support_cutoff);
  return (rho.matrix() * (log_rho - log_sigma)).trace().real();
}

double d_zero(const HermitianOperator& rho, const HermitianOperator& sigma,
              const Tolerances& tol) {
  check_same_dim(rho, sigma);
  const ComplexMatrix pi = support_projector(rho, tol.support_cutoff).matrix();
  return -safe_log2((pi * sigma.matrix()).trace().real());
}

double petz_renyi(double alpha, const HermitianOperator& rho,
                  const HermitianOperator& sigma, const Tolerances& tol) {
  check_same_dim(rho, sigma);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("Petz order must be finite and >= 0");
  }
  if (alpha == 0.0) return d_zero(rho, sigma, tol);
  if (alpha == 1.0) return relative_entropy(rho, sigma, tol);
  if (alpha > 1.0 && support_violated(rho, sigma, tol)) return kInfinity;
  const ComplexMatrix ra = spectral_on_support(
      rho, [alpha](double v) { return std::pow(v, alpha); }, tol.support_cutoff);
  const ComplexMatrix sb = spectral_on_support(
      sigma, [alpha](double v) { return std::pow(v, 1.0 - alpha); }, tol.support_cutoff);
  const double q = (ra * sb).trace().real();
  if (q <= 0.0) return alpha < 1.0 ? kInfinity : -kInfinity;
  return std::log2(q) / (alpha - 1.0);
}

double sandwiched_renyi(double alpha, const HermitianOperator& rho,
                        const HermitianOperator& sigma, const Tolerances& tol) {
  check_same_dim(rho, sigma);
  if (!(alpha >= 0.5)) throw ValidationError("sandwiched order must be >= 1/2");
  if (std::isinf(alpha)) return d_max(rho, sigma, tol);
  if (alpha == 1.0) return relative_entropy(rho, sigma, tol);
  if (alpha > 1.0 && support_violated(rho, sigma, tol)) return kInfinity;
  const double g = (1.0 - alpha) / (2.0 * alpha);
  const ComplexMatrix sg = spectral_on_support(
      sigma, [g](double v) { return std::pow(v, g); }, tol.support_cutoff);
  const HermitianOperator m =
      HermitianOperator::from_hermitian_part(sg * rho.matrix() * sg);
  const double q = trace_power(m, alpha);
  if (q <= 0.0) return alpha < 1.0 ? kInfinity : -kInfinity;
  return std::log2(q) / (alpha - 1.0);
}

SdpEstimate d_hypothesis_sdp(double eps, const HermitianOperator& rho,
                             const HermitianOperator& sigma, const Tolerances& tol) {
  check_same_dim(rho, sigma);
  check_eps(eps);
  if (eps == 0.0) {
    SdpEstimate e;
    e.value = d_zero(rho, sigma, tol);
    e.status = sdp::Status::kOptimal;
    return e;
  }
  const Index n = rho.dim();
  sdp::Builder b(sdp::Sense::kMinimize);
  const Index lambda = b.add_block(n);
  const Index slack = b.add_block(n);
  const Index s = b.add_block(1);
  b.add_objective(lambda, sigma.matrix());
  b.add_hermitian_equality(n, {sdp::terms::identity(lambda), sdp::terms::identity(slack)},
                           ComplexMatrix::Identity(n, n));
  b.add_trace_equality({{lambda, rho.matrix()}, {s, -ComplexMatrix::Identity(1, 1)}},
                       1.0 - eps);
  const sdp::Solution sol = sdp::solve(std::move(b).build(), tol);
  return to_estimate(sol, -safe_log2(sol.primal_value));
}

double d_hypothesis(double eps, const HermitianOperator& rho,
                    const HermitianOperator& sigma, const Tolerances& tol) {
  return require_optimal(d_hypothesis_sdp(eps, rho, sigma, tol), "hypothesis testing");
}

// ---------------------------------------------------------------------------
// Conditional entropies

SdpEstimate cond_min_entropy_up_sdp(const HermitianOperator& rho_ab, const Tolerances& tol) {
  const Bipartite d = bipartite_dims(rho_ab);
  const Index n = rho_ab.dim();
  sdp::Builder b(sdp::Sense::kMinimize);
  const Index x = b.add_block(d.b);
  const Index slack = b.add_block(n);
  b.add_objective(x, ComplexMatrix::Identity(d.b, d.b));
  b.add_hermitian_equality(n,
                           {sdp::terms::kron_identity_left(x, d.a, d.b),
                            sdp::terms::identity(slack, -1.0)},
                           rho_ab.matrix());
  const sdp::Solution sol = sdp::solve(std::move(b).build(), tol);
  return to_estimate(sol, -safe_log2(sol.primal_value));
}

double cond_min_entropy_up(const HermitianOperator& rho_ab, const Tolerances& tol) {
  return require_optimal(cond_min_entropy_up_sdp(rho_ab, tol), "min-entropy");
}

double cond_min_entropy_down(const HermitianOperator& rho_ab, const Tolerances& tol) {
  const Bipartite d = bipartite_dims(rho_ab);
  const HermitianOperator rho_b = partial_trace(rho_ab, {1});
  return -d_max(rho_ab, tensor(identity_operator(d.a), rho_b), tol);
}

SdpEstimate cond_min_entropy_down_sdp(const HermitianOperator& rho_ab,
                                      const Tolerances& tol) {
  const Bipartite d = bipartite_dims(rho_ab);
  const HermitianOperator rho_b = partial_trace(rho_ab, {1});
  SdpEstimate e = d_max_sdp(rho_ab, tensor(identity_operator(d.a), rho_b), tol);
  e.value = -e.value;
  return e;
}

SdpEstimate cond_hypothesis_entropy_sdp(double eps, const HermitianOperator& rho_ab,
                                        const Tolerances& tol) {
  check_eps(eps);
  const Bipartite d = bipartite_dims(rho_ab);
  if (eps == 0.0) {
    const HermitianOperator pi =
        support_projector(rho_ab, tol.support_cutoff).with_dims({d.a, d.b});
    SdpEstimate e;
    e.value = safe_log2(max_eigenvalue(partial_trace(pi, {1})));
    e.status = sdp::Status::kOptimal;
    return e;
  }
  const Index n = rho_ab.dim();
  sdp::Builder b(sdp::Sense::kMaximize);
  const Index mu = b.add_block(1);
  const Index sigma = b.add_block(d.b);
  const Index z = b.add_block(n);
  const Index slack = b.add_block(n);
  b.add_objective(mu, ComplexMatrix::Constant(1, 1, 1.0 - eps));
  b.add_objective(z, -ComplexMatrix::Identity(n, n));
  b.add_hermitian_equality(n,
                           {sdp::terms::kron_identity_left(sigma, d.a, d.b),
                            sdp::terms::identity(z),
                            sdp::terms::scalar_times(mu, -rho_ab.matrix()),
                            sdp::terms::identity(slack, -1.0)},
                           ComplexMatrix::Zero(n, n));
  b.add_trace_equality({{sigma, ComplexMatrix::Identity(d.b, d.b)}}, 1.0);
  const sdp::Solution sol = sdp::solve(std::move(b).build(), tol);
  return to_estimate(sol, safe_log2(sol.primal_value));
}

double cond_hypothesis_entropy(double eps, const HermitianOperator& rho_ab,
                               const Tolerances& tol) {
  return require_optimal(cond_hypothesis_entropy_sdp(eps, rho_ab, tol),
                         "hypothesis testing entropy");
}

SdpEstimate max_product_fidelity_sdp(const HermitianOperator& rho_ab, const Tolerances& tol) {
  const Bipartite d = bipartite_dims(rho_ab);
  // F(rho, tau) = F(D, V^dag tau V) for rho = V D V^dag on its support.
  const EigenDecomposition e = herm_eig(rho_ab);
  Index r = 0;
  while (r < e.values.size() && e.values(r) > tol.support_cutoff) ++r;
  if (r == 0) throw ValidationError("fidelity of the zero operator");
  const ComplexMatrix v = e.vectors.leftCols(r);
  const ComplexMatrix dmat = e.values.head(r).cast<Complex>().asDiagonal();

  sdp::Builder b(sdp::Sense::kMaximize);
  const Index y = b.add_block(2 * r);
  const Index sigma = b.add_block(d.b);
  ComplexMatrix c = ComplexMatrix::Zero(2 * r, 2 * r);
  c.topRightCorner(r, r) = 0.5 * ComplexMatrix::Identity(r, r);
  c.bottomLeftCorner(r, r) = 0.5 * ComplexMatrix::Identity(r, r);
  b.add_objective(y, c);
  b.add_hermitian_equality(r, {sdp::terms::sub_block(y, 0, 0)}, dmat);
  b.add_hermitian_equality(r,
                           {sdp::terms::sub_block(y, r, r),
                            sdp::terms::compressed_kron_identity_left(sigma, d.a, d.b, v,
                                                                      -1.0)},
                           ComplexMatrix::Zero(r, r));
  b.add_trace_equality({{sigma, ComplexMatrix::Identity(d.b, d.b)}}, 1.0);
  const sdp::Solution sol = sdp::solve(std::move(b).build(), tol);
  const double root = std::max(0.0, sol.primal_value);
  return to_estimate(sol, root * root);
}

double cond_renyi_half_up(const HermitianOperator& rho_ab, const Tolerances& tol) {
  return safe_log2(require_optimal(max_product_fidelity_sdp(rho_ab, tol), "fidelity"));
}

// ---------------------------------------------------------------------------
// Smoothing

std::string to_string(MinEntropyVariant variant) {
  return variant == MinEntropyVariant::kUp ? "up" : "down";
}

namespace {

constexpr std::array<double, 9> kSmoothingGrid = {0.005, 0.01, 0.02, 0.05, 0.1,
                                                  0.2,   0.35, 0.5,  0.75};

struct Direction {
  std::string name;
  ComplexMatrix state;
};

std::vector<Direction> smoothing_directions(const DensityOperator& rho, Index da, Index db) {
  std::vector<Direction> out;
  const HermitianOperator rho_b = partial_trace(rho.op(), {1});
  out.push_back({"pi_A (x) rho_B",
                 tensor(maximally_mixed(da).op(), rho_b).matrix()});
  out.push_back({"pi_AB", maximally_mixed(da * db).matrix()});
  const EigenDecomposition e = herm_eig(rho.op());
  const double top = e.values(0);
  if (top < 1.0 - 1e-9) {
    const ComplexVector v = e.vectors.col(0);
    out.push_back({"rho without top eigencomponent",
                   (rho.matrix() - top * v * v.adjoint()) / (1.0 - top)});
  }
  return out;
}

}  // namespace

SmoothingBound smooth_min_entropy_lower_bound(double eps, const DensityOperator& rho_ab,
                                              MinEntropyVariant variant,
                                              const Tolerances& tol) {
  check_eps(eps);
  if (!rho_ab.normalized()) throw ValidationError("smoothing center must have unit trace");
  const Bipartite d = bipartite_dims(rho_ab.op());
  const bool up = variant == MinEntropyVariant::kUp;
  const double target = 1.0 - eps * eps;

  // Up variant: a normalized candidate with F(rho, cand) = f >= 1 - eps^2
  // scaled by (1 - eps^2)/f stays in the ball and gains log(f/(1-eps^2)).
  const auto entropy_of = [&](const HermitianOperator& cand) -> std::pair<bool, double> {
    if (!up) return {true, cond_min_entropy_down(cand, tol)};
    const SdpEstimate e = cond_min_entropy_up_sdp(cand, tol);
    return {e.optimal(), e.value};
  };

  SmoothingBound best;
  {
    const auto [ok, h] = entropy_of(rho_ab.op());
    if (!ok) throw SolverError("min-entropy SDP failed at the smoothing center");
    best.value = up ? h - std::log2(target) : h;
    best.purified_distance = up ? eps : 0.0;
    best.witness = up && eps > 0.0 ? "scaled center" : "center";
  }
  if (eps == 0.0) return best;

  for (const Direction& dir : smoothing_directions(rho_ab, d.a, d.b)) {
    for (const double t : kSmoothingGrid) {
      const HermitianOperator cand = HermitianOperator::from_hermitian_part(
          (1.0 - t) * rho_ab.matrix() + t * dir.state, {d.a, d.b});
      const double f = fidelity_psd(rho_ab.op(), cand);
      if (!(f >= target)) continue;
      const auto [ok, h] = entropy_of(cand);
      if (!ok) continue;
      const double value = up ? h + std::log2(f) - std::log2(target) : h;
      if (value > best.value) {
        best.value = value;
        best.purified_distance = up ? eps : std::sqrt(std::max(0.0, 1.0 - f));
        best.witness = dir.name + ", t = " + std::to_string(t);
      }
    }
  }
  return best;
}

double smooth_min_entropy_upper_bound(double eps, double mu, const DensityOperator& rho_ab,
                                      const Tolerances& tol) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
  const double room = 1.0 - eps * eps;
  if (!(mu > 0.0 && mu <= room)) throw ValidationError("mu must lie in (0, 1 - eps^2]");
  const double level = std::max(0.0, room - mu);
  return cond_hypothesis_entropy(level, rho_ab.op(), tol) +
         std::log2(4.0 * room / (mu * mu));
}

}  // namespace qdyn
