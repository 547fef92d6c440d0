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

#include "qdyn/dynamical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "qdyn/error.hpp"
#include "qdyn/haar.hpp"
#include "qdyn/parallel.hpp"

namespace qdyn {
namespace {

/// (sqrt(omega) (x) 1)|Gamma>, a purification with R-marginal omega.
ComplexVector purification_with_marginal(const HermitianOperator& omega) {
  const Index d = omega.dim();
  const ComplexMatrix root = psd_sqrt(omega).matrix();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (Index r = 0; r < d; ++r) {
    for (Index i = 0; i < d; ++i) psi(r * d + i) = root(r, i);
  }
  return psi / psi.norm();
}

}  // namespace

HermitianOperator choi_top_marginal(const QuantumChannel& n) {
  const ChoiState c = choi_state(n);
  const EigenDecomposition e = herm_eig(c.state.op());
  const ComplexVector v = e.vectors.col(0);
  const HermitianOperator top = HermitianOperator::from_hermitian_part(
      v * v.adjoint(), {c.in_dim, c.out_dim});
  return partial_trace(top, {0});
}

std::vector<ScanInput> structured_inputs(const QuantumChannel& n) {
  std::vector<ScanInput> out;
  const Index d = n.in_dim();
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  out.push_back({"maximally entangled", phi});
  for (Index k = 0; k < d; ++k) {
    ComplexVector prod = ComplexVector::Zero(d * d);
    prod(k) = 1.0;  // |0>_R |k>_A'
    out.push_back({"product |0>|" + std::to_string(k) + ">", prod});
  }
  out.push_back({"choi-derived", purification_with_marginal(choi_top_marginal(n))});
  return out;
}

ComplexVector haar_input(Index d, std::uint64_t seed, int index) {
  HaarSampler s(d * d, derive_seed(seed, static_cast<std::uint64_t>(index)));
  return s.pure_vector(d * d);
}

namespace {

/// N(psi) with A first and R second.
HermitianOperator output_a_given_r(const QuantumChannel& n, const ComplexVector& psi) {
  const Index d = n.in_dim();
  const DensityOperator in = pure_state(psi, {d, d});
  return swap_bipartite(apply(n, in, 1).op());
}

/// N(psi) with R first and A second.
HermitianOperator output_r_then_a(const QuantumChannel& n, const ComplexVector& psi) {
  const Index d = n.in_dim();
  return apply(n, pure_state(psi, {d, d}), 1).op();
}

struct SampleResult {
  bool pruned = false;
  bool failed = false;
  double value = 0.0;
};

/// Nelder-Mead (GSL nmsimplex2) on the real and imaginary parts of a
/// vector; returns the best value seen and its argument.
std::pair<double, ComplexVector> simplex_minimize(
    const std::function<double(const ComplexVector&)>& f, const ComplexVector& start,
    int max_evaluations) {
  const std::size_t n = static_cast<std::size_t>(start.size());
  struct Ctx {
    const std::function<double(const ComplexVector&)>* f;
    std::size_t n;
    double best;
    ComplexVector arg;
    int evals;
  } ctx{&f, n, kInfinity, start, 0};

  gsl_multimin_function fn;
  fn.n = 2 * n;
  fn.params = &ctx;
  fn.f = [](const gsl_vector* x, void* p) -> double {
    auto* c = static_cast<Ctx*>(p);
    ComplexVector v(static_cast<Index>(c->n));
    for (std::size_t i = 0; i < c->n; ++i) {
      v(static_cast<Index>(i)) = {gsl_vector_get(x, 2 * i), gsl_vector_get(x, 2 * i + 1)};
    }
    const double norm = v.norm();
    if (!(norm > 1e-12)) return 1e6;
    v /= norm;
    ++c->evals;
    const double value = (*c->f)(v);
    if (value < c->best) {
      c->best = value;
      c->arg = v;
    }
    return std::isfinite(value) ? value : 1e6;
  };

  gsl_vector* x = gsl_vector_alloc(2 * n);
  gsl_vector* step = gsl_vector_alloc(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, 2 * i, start(static_cast<Index>(i)).real());
    gsl_vector_set(x, 2 * i + 1, start(static_cast<Index>(i)).imag());
  }
  gsl_vector_set_all(step, 0.1);
  gsl_multimin_fminimizer* m =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2 * n);
  gsl_multimin_fminimizer_set(m, &fn, x, step);
  while (ctx.evals < max_evaluations) {
    if (gsl_multimin_fminimizer_iterate(m) != 0) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-6) == GSL_SUCCESS) break;
  }
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return {ctx.best, ctx.arg};
}

}  // namespace

double choi_lambda_max(const QuantumChannel& n) {
  return max_eigenvalue(choi_state(n).state.op());
}

double channel_min_entropy(const QuantumChannel& n) {
  return -std::log2(static_cast<double>(n.in_dim()) * choi_lambda_max(n));
}

SdpEstimate channel_min_entropy_sdp(const QuantumChannel& n, const Tolerances& tol) {
  return cond_min_entropy_down_sdp(swap_bipartite(choi_state(n).state.op()), tol);
}

ChannelEntropyReport channel_min_entropy_scan(const QuantumChannel& n,
                                              const ScanOptions& options) {
  if (options.n_samples < 1) throw ValidationError("scan needs n_samples >= 1");
  if (!n.trace_preserving()) throw ValidationError("scan needs a trace-preserving channel");
  ChannelEntropyReport rep;
  rep.lambda_max = choi_lambda_max(n);
  rep.closed_form = -std::log2(static_cast<double>(n.in_dim()) * rep.lambda_max);
  rep.s_min = rep.closed_form;
  const SdpEstimate sdp = channel_min_entropy_sdp(n, options.tol);
  rep.sdp_value = sdp.value;
  rep.sdp_gap = sdp.duality_gap;
  rep.sdp_agrees = sdp.optimal() && std::abs(sdp.value - rep.closed_form) <= 1e-6;

  const auto up_at = [&](const ComplexVector& psi) {
    return cond_min_entropy_up_sdp(output_a_given_r(n, psi), options.tol);
  };

  double best = kInfinity;
  ComplexVector best_psi;
  for (const ScanInput& c : structured_inputs(n)) {
    const SdpEstimate e = up_at(c.psi);
    ++rep.n_scan_samples;
    if (!e.optimal()) {
      ++rep.n_failed;
      continue;
    }
    if (e.value < best) {
      best = e.value;
      best_psi = c.psi;
      rep.scan_argmin = c.name;
    }
  }

  // The pruning threshold is fixed before the parallel phase, which keeps
  // every count independent of the worker count.
  const double threshold = best;
  std::vector<SampleResult> results(static_cast<std::size_t>(options.n_samples));
  parallel_for(options.n_samples, options.workers, [&](int i) {
    SampleResult& r = results[static_cast<std::size_t>(i)];
    const ComplexVector psi = haar_input(n.in_dim(), options.seed, i);
    const HermitianOperator out = output_a_given_r(n, psi);
    if (options.prune && std::isfinite(threshold) &&
        cond_min_entropy_down(out, options.tol) >= threshold) {
      r.pruned = true;
      return;
    }
    const SdpEstimate e = cond_min_entropy_up_sdp(out, options.tol);
    r.failed = !e.optimal();
    r.value = e.value;
  });
  for (int i = 0; i < options.n_samples; ++i) {
    const SampleResult& r = results[static_cast<std::size_t>(i)];
    ++rep.n_scan_samples;
    if (r.pruned) {
      ++rep.n_pruned;
      continue;
    }
    if (r.failed) {
      ++rep.n_failed;
      continue;
    }
    if (r.value < best) {
      best = r.value;
      best_psi = haar_input(n.in_dim(), options.seed, i);
      rep.scan_argmin = "haar sample " + std::to_string(i);
    }
  }

  if (options.refine_evaluations > 0 && best_psi.size() > 0) {
    const auto f = [&](const ComplexVector& psi) {
      const SdpEstimate e = up_at(psi);
      return e.optimal() ? e.value : kInfinity;
    };
    const auto [value, arg] = simplex_minimize(f, best_psi, options.refine_evaluations);
    (void)arg;
    if (value < best) {
      best = value;
      rep.scan_argmin += " (refined)";
    }
  }
  rep.inf_scan_value = best;
  rep.scan_consistent = best >= rep.s_min - 1e-6;
  return rep;
}

SdpEstimate singlet_fidelity_sdp(const HermitianOperator& rho_ra, const Tolerances& tol) {
  if (rho_ra.num_subsystems() != 2) {
    throw ValidationError("singlet fidelity needs subsystem dims {|R|, |A|}");
  }
  const Index dr = rho_ra.subsystem_dims()[0];
  const Index da = rho_ra.subsystem_dims()[1];
  // tr(Phi (id (x) M)(rho)) = tr(G J) with J the Choi matrix of M on R (x) A'
  // and G's (r', r) block equal to (rho^{(r r')})^T / |A|.
  const ComplexMatrix& rho = rho_ra.matrix();
  ComplexMatrix g(dr * da, dr * da);
  for (Index r = 0; r < dr; ++r) {
    for (Index rp = 0; rp < dr; ++rp) {
      g.block(rp * da, r * da, da, da) =
          rho.block(r * da, rp * da, da, da).transpose() / static_cast<double>(da);
    }
  }
  sdp::Builder b(sdp::Sense::kMaximize);
  const Index j = b.add_block(dr * da);
  b.add_objective(j, g);
  b.add_hermitian_equality(dr, {sdp::terms::partial_trace_right(j, dr, da)},
                           ComplexMatrix::Identity(dr, dr));
  const sdp::Solution sol = sdp::solve(std::move(b).build(), tol);
  SdpEstimate e;
  e.value = sol.primal_value > 0.0 ? std::log2(static_cast<double>(da) * sol.primal_value)
                                   : -kInfinity;
  e.duality_gap = sol.duality_gap;
  e.status = sol.status;
  e.iterations = sol.iterations;
  return e;
}

namespace {

/// Max over results, reporting the worst gap among those kept.
SdpEstimate best_of(const std::vector<SdpEstimate>& all, int* failed) {
  SdpEstimate out;
  out.value = -kInfinity;
  bool any = false;
  for (const SdpEstimate& e : all) {
    if (!e.optimal()) {
      if (failed != nullptr) ++*failed;
      continue;
    }
    any = true;
    out.value = std::max(out.value, e.value);
    out.duality_gap = std::max(out.duality_gap, std::abs(e.duality_gap));
    out.iterations = std::max(out.iterations, e.iterations);
  }
  out.status = any ? sdp::Status::kOptimal : sdp::Status::kMaxIterations;
  return out;
}

}  // namespace

SdpEstimate singlet_fidelity_dual(const QuantumChannel& n, const ScanOptions& options) {
  if (options.n_samples < 1) throw ValidationError("scan needs n_samples >= 1");
  std::vector<SdpEstimate> all;
  for (const ScanInput& c : structured_inputs(n)) {
    all.push_back(singlet_fidelity_sdp(output_r_then_a(n, c.psi), options.tol));
  }
  const SdpEstimate structured = best_of(all, nullptr);
  const double threshold = structured.optimal() ? structured.value : kInfinity;
  std::vector<SdpEstimate> sampled(static_cast<std::size_t>(options.n_samples));
  parallel_for(options.n_samples, options.workers, [&](int i) {
    const ComplexVector psi = haar_input(n.in_dim(), options.seed, i);
    const HermitianOperator out = output_r_then_a(n, psi);
    SdpEstimate& e = sampled[static_cast<std::size_t>(i)];
    // -S^down >= -S^up = the sample's value, so a low -S^down cannot win.
    if (options.prune && std::isfinite(threshold) &&
        -cond_min_entropy_down(swap_bipartite(out), options.tol) <= threshold) {
      e.status = sdp::Status::kOptimal;
      e.value = -kInfinity;
      return;
    }
    e = singlet_fidelity_sdp(out, options.tol);
  });
  all.insert(all.end(), sampled.begin(), sampled.end());
  return best_of(all, nullptr);
}

SdpEstimate env_decoupling_dual(const QuantumChannel& n, const ScanOptions& options) {
  if (options.n_samples < 1) throw ValidationError("scan needs n_samples >= 1");
  const IsometryExtension v = stinespring_isometry(n);
  const Index d = n.in_dim();
  std::vector<DensityOperator> inputs;
  inputs.push_back(maximally_mixed(d));
  for (Index k = 0; k < d; ++k) inputs.push_back(basis_state(d, k));
  {
    const HermitianOperator omega = choi_top_marginal(n);
    inputs.push_back(DensityOperator(
        HermitianOperator::from_hermitian_part(omega.matrix().transpose() / omega.trace())));
  }
  const std::size_t n_structured = inputs.size();
  std::vector<SdpEstimate> all(n_structured + static_cast<std::size_t>(options.n_samples));
  for (std::size_t k = 0; k < n_structured; ++k) {
    all[k] = max_product_fidelity_sdp(apply_isometry(v, inputs[k]), options.tol);
  }
  parallel_for(options.n_samples, options.workers, [&](int i) {
    HaarSampler s(d, derive_seed(options.seed, static_cast<std::uint64_t>(i)));
    all[n_structured + static_cast<std::size_t>(i)] =
        max_product_fidelity_sdp(apply_isometry(v, s.mixed_state(d)), options.tol);
  });
  for (SdpEstimate& e : all) e.value = e.value > 0.0 ? std::log2(e.value) : -kInfinity;
  return best_of(all, nullptr);
}

QuantumChannel mix_with_depolarizer(const QuantumChannel& n, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("mixing weight must lie in [0, 1]");
  if (!n.trace_preserving()) throw ValidationError("mixing needs a trace-preserving channel");
  std::vector<ComplexMatrix> kraus;
  if (t < 1.0) {
    for (const ComplexMatrix& k : n.kraus()) kraus.push_back(std::sqrt(1.0 - t) * k);
  }
  if (t > 0.0) {
    const Index dout = n.out_dim();
    const double scale = std::sqrt(t / static_cast<double>(dout));
    for (Index a = 0; a < dout; ++a) {
      for (Index j = 0; j < n.in_dim(); ++j) {
        ComplexMatrix k = ComplexMatrix::Zero(dout, n.in_dim());
        k(a, j) = scale;
        kraus.push_back(std::move(k));
      }
    }
  }
  return QuantumChannel(std::move(kraus));
}

ChannelSmoothingBound smooth_channel_min_entropy_lower_bound(double eps,
                                                             const QuantumChannel& n) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("eps must lie in [0, 1)");
  ChannelSmoothingBound b;
  b.t = 1.0 - std::sqrt(1.0 - eps * eps);
  b.purified_distance_bound = std::sqrt(std::max(0.0, 1.0 - (1.0 - b.t) * (1.0 - b.t)));
  b.value = eps == 0.0 ? channel_min_entropy(n)
                       : channel_min_entropy(mix_with_depolarizer(n, b.t));
  return b;
}

ChannelSmoothingReport channel_smoothing_check(double eps, const QuantumChannel& n,
                                               const ScanOptions& options) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("eps must lie in [0, 1)");
  const ChannelSmoothingBound cb = smooth_channel_min_entropy_lower_bound(eps, n);
  const QuantumChannel m = mix_with_depolarizer(n, cb.t);
  std::vector<ComplexVector> inputs;
  for (const ScanInput& c : structured_inputs(n)) inputs.push_back(c.psi);
  for (int i = 0; i < options.n_samples; ++i) {
    inputs.push_back(haar_input(n.in_dim(), options.seed, i));
  }

  struct Row {
    double witness = kInfinity;
    double upper = kInfinity;
    double distance = 0.0;
    bool violated = false;
  };
  std::vector<Row> rows(inputs.size());
  const double room = 1.0 - eps * eps;
  parallel_for(static_cast<int>(inputs.size()), options.workers, [&](int i) {
    Row& row = rows[static_cast<std::size_t>(i)];
    const ComplexVector& psi = inputs[static_cast<std::size_t>(i)];
    const HermitianOperator on = output_a_given_r(n, psi);
    const HermitianOperator om = output_a_given_r(m, psi);
    row.distance = purified_distance(DensityOperator(on), DensityOperator(om));
    const SdpEstimate w = cond_min_entropy_up_sdp(om, options.tol);
    if (w.optimal()) row.witness = w.value;
    if (eps > 0.0) {
      for (const double mu : {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0}) {
        if (mu > room) continue;
        try {
          row.upper = std::min(
              row.upper, smooth_min_entropy_upper_bound(eps, mu, DensityOperator(on), options.tol));
        } catch (const SolverError&) {
        }
      }
    } else {
      const SdpEstimate u = cond_min_entropy_up_sdp(on, options.tol);
      if (u.optimal()) row.upper = u.value;
    }
    row.violated = row.distance > eps + 1e-9 || cb.value > row.witness + 1e-6 ||
                   cb.value > row.upper + 1e-6 || !w.optimal();
  });

  ChannelSmoothingReport rep;
  rep.channel_bound = cb.value;
  rep.min_witness_value = kInfinity;
  rep.min_upper_bound = kInfinity;
  for (const Row& row : rows) {
    ++rep.n_inputs;
    rep.min_witness_value = std::min(rep.min_witness_value, row.witness);
    rep.min_upper_bound = std::min(rep.min_upper_bound, row.upper);
    rep.max_state_distance = std::max(rep.max_state_distance, row.distance);
    if (row.violated) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

ContinuityReport continuity_check(const QuantumChannel& n, const QuantumChannel& m) {
  if (n.in_dim() != m.in_dim() || n.out_dim() != m.out_dim()) {
    throw ValidationError("continuity check needs channels with equal dimensions");
  }
  const DiamondResult d = diamond_distance_sdp(n, m);
  if (d.status != sdp::Status::kOptimal) {
    throw SolverError("diamond distance SDP ended with status " + sdp::to_string(d.status));
  }
  ContinuityReport r;
  r.delta = std::max(0.0, d.value);
  r.duality_gap = d.duality_gap;
  r.lhs = std::abs(channel_min_entropy(n) - channel_min_entropy(m));
  const double da = static_cast<double>(n.out_dim());
  const double dmin = std::min(da, static_cast<double>(n.in_dim()));
  r.rhs = da * dmin * r.delta / std::numbers::ln2;
  r.pass = r.lhs <= r.rhs + 1e-9;
  return r;
}

bool unitary_covariance_check(const QuantumChannel& n, const ComplexMatrix& u1,
                              const ComplexMatrix& u2) {
  const QuantumChannel c = compose(unitary_channel(u2), compose(n, unitary_channel(u1)));
  return std::abs(channel_min_entropy(c) - channel_min_entropy(n)) <= 1e-9;
}

CompositionProbe composition_probe(const QuantumChannel& n2, const QuantumChannel& n1) {
  return {channel_min_entropy(compose(n2, n1)), channel_min_entropy(n1),
          channel_min_entropy(n2)};
}

}  // namespace qdyn
