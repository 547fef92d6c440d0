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

#include "qdyn/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "qdyn/dynamical.hpp"
#include "qdyn/entropies.hpp"
#include "qdyn/error.hpp"
#include "qdyn/parallel.hpp"

namespace qdyn {
namespace {

void check_epsilon(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in [0, 1)");
}

/// S_min^up(A|B) of an operator on A (x) B; the certified smoothing lower
/// bound when eps > 0 and the operator is a normalized state.
double up_entropy(double eps, const HermitianOperator& rho_ab) {
  if (eps > 0.0 && std::abs(rho_ab.trace() - 1.0) <= kTol.trace) {
    return smooth_min_entropy_lower_bound(eps, DensityOperator(rho_ab), MinEntropyVariant::kUp)
        .value;
  }
  return cond_min_entropy_up(rho_ab);
}

/// Choi operator of T normalized by the input dimension, dims {|A|, |B|}.
HermitianOperator normalized_choi(const QuantumChannel& t) {
  return HermitianOperator::from_hermitian_part(
      choi_matrix(t) / static_cast<double>(t.in_dim()), {t.in_dim(), t.out_dim()});
}

double decoupling_bound(double s_first, double s_t, double eps) {
  return std::exp2(-0.5 * (s_first + s_t)) + 12.0 * eps;
}

/// Mean, standard error and pass flag over the kept samples.
void summarize(const std::vector<double>& values, DecouplingReport& r) {
  r.n_samples = static_cast<int>(values.size());
  if (values.empty()) return;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean_lhs = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean_lhs) * (v - r.mean_lhs);
    const double var = ss / static_cast<double>(values.size() - 1);
    r.std_err = std::sqrt(var / static_cast<double>(values.size()));
  }
  r.pass = r.mean_lhs <= r.bound_rhs + 3.0 * r.std_err;
}

bool is_pure(const DensityOperator& rho) {
  return std::abs(rho.trace() - 1.0) <= kTol.trace &&
         std::abs(rho.matrix().squaredNorm() - 1.0) <= 1e-9;
}

}  // namespace

std::string to_json(const DecouplingReport& report) {
  const nlohmann::ordered_json j = {
      {"n_samples", report.n_samples}, {"mean_lhs", report.mean_lhs},
      {"std_err", report.std_err},     {"bound_rhs", report.bound_rhs},
      {"epsilon", report.epsilon},     {"pass", report.pass},
  };
  return j.dump();
}

DecouplingReport decouple_states_mc(const DensityOperator& phi_ra, const QuantumChannel& t,
                                    int n, double eps, HaarSampler& sampler, int workers) {
  check_epsilon(eps);
  if (n < 1) throw ValidationError("decoupling needs at least one sample");
  const Dims& dims = phi_ra.subsystem_dims();
  if (dims.size() != 2 || dims[1] != t.in_dim()) {
    throw ValidationError("phi must have dims {|R|, |A|} with |A| the input dimension of T");
  }
  const Index da = dims[1];
  DecouplingReport r;
  r.epsilon = eps;
  r.bound_rhs = decoupling_bound(up_entropy(eps, swap_bipartite(phi_ra.op())),
                                 up_entropy(eps, normalized_choi(t)), eps);

  const HermitianOperator phi_r = partial_trace(phi_ra.op(), {0});
  const ComplexMatrix target = kron(phi_r.matrix(), t(maximally_mixed(da).matrix()));
  const std::uint64_t key = sampler.rng().next_u64();
  std::vector<double> lhs(static_cast<std::size_t>(n));
  parallel_for(n, workers, [&](int i) {
    HaarSampler s(da, derive_seed(key, static_cast<std::uint64_t>(i)));
    const ComplexMatrix u = haar_unitary(da, s);
    std::vector<ComplexMatrix> rotated;
    for (const ComplexMatrix& k : t.kraus()) rotated.push_back(k * u);
    const DensityOperator out = apply(QuantumChannel::cp_map(std::move(rotated)), phi_ra, 1);
    lhs[static_cast<std::size_t>(i)] = trace_norm(out.matrix() - target);
  });
  summarize(lhs, r);
  return r;
}

DecouplingReport decouple_channel_mc(const QuantumChannel& n, const QuantumChannel& t, int count,
                                     double eps, HaarSampler& sampler, int workers) {
  check_epsilon(eps);
  if (count < 1) throw ValidationError("decoupling needs at least one sample");
  if (!n.trace_preserving()) throw ValidationError("N must be trace preserving");
  if (n.out_dim() != t.in_dim()) throw ValidationError("T must act on the output of N");
  const Index da = n.out_dim();
  DecouplingReport r;
  r.epsilon = eps;
  const double s_n =
      eps > 0.0 ? smooth_channel_min_entropy_lower_bound(eps, n).value : channel_min_entropy(n);
  r.bound_rhs = decoupling_bound(s_n, up_entropy(eps, normalized_choi(t)), eps);

  const QuantumChannel reference =
      compose(t, replacer_channel(maximally_mixed(da), n.in_dim()));
  const std::uint64_t key = sampler.rng().next_u64();
  std::vector<DiamondResult> samples(static_cast<std::size_t>(count));
  parallel_for(count, workers, [&](int i) {
    HaarSampler s(da, derive_seed(key, static_cast<std::uint64_t>(i)));
    const QuantumChannel rotated = compose(t, compose(unitary_channel(haar_unitary(da, s)), n));
    samples[static_cast<std::size_t>(i)] = diamond_distance_sdp(rotated, reference);
  });
  std::vector<double> lhs;
  for (const DiamondResult& d : samples) {
    if (d.status != sdp::Status::kOptimal) {
      ++r.n_failed;
      continue;
    }
    r.max_duality_gap = std::max(r.max_duality_gap, std::abs(d.duality_gap));
    lhs.push_back(2.0 * std::max(0.0, d.value));
  }
  summarize(lhs, r);
  return r;
}

SubsystemSearchResult find_decoupled_subsystem(const DensityOperator& phi_rae,
                                               double delta_prime, double eps,
                                               HaarSampler& sampler, int max_tries) {
  check_epsilon(eps);
  if (!(delta_prime > 6.0 * eps)) {
    throw ValidationError("delta' must exceed 6 eps for the subsystem bound to be defined");
  }
  if (max_tries < 1) throw ValidationError("max_tries must be at least 1");
  const Dims& dims = phi_rae.subsystem_dims();
  if (dims.size() != 3) throw ValidationError("phi must have dims {|R|, |A|, |E|}");
  if (!is_pure(phi_rae)) throw ValidationError("phi must be pure");
  const Index dr = dims[0];
  const Index da = dims[1];
  const Index de = dims[2];

  const HermitianOperator phi_ra = partial_trace(phi_rae.op(), {0, 1});
  const HermitianOperator phi_r = partial_trace(phi_ra, {0});
  SubsystemSearchResult res;
  res.delta_prime = delta_prime;
  res.guaranteed_log_a1 = 0.5 * (std::log2(static_cast<double>(da)) +
                                 up_entropy(eps, swap_bipartite(phi_ra))) +
                          std::log2(2.0 * delta_prime - 12.0 * eps);
  res.unitary_used = ComplexMatrix::Identity(da, da);

  const auto distance = [&](const ComplexMatrix& u, Index d1) {
    const ComplexMatrix full = kron(ComplexMatrix::Identity(dr, dr),
                                    kron(u, ComplexMatrix::Identity(de, de)));
    const HermitianOperator rotated = HermitianOperator::from_hermitian_part(
        full * phi_rae.matrix() * full.adjoint(), {dr, d1, da / d1, de});
    const HermitianOperator ra1 = partial_trace(rotated, {0, 1});
    const ComplexMatrix product = kron(phi_r.matrix(), maximally_mixed(d1).matrix());
    return 0.5 * trace_norm(ra1.matrix() - product);
  };

  bool found = false;
  for (Index d1 = da; d1 > 1 && !found; --d1) {
    if (da % d1 != 0) continue;
    // The full split is unitarily invariant, so one evaluation decides it.
    const int tries = d1 == da ? 1 : max_tries;
    for (int k = 0; k < tries; ++k) {
      const ComplexMatrix u =
          d1 == da ? ComplexMatrix::Identity(da, da) : haar_unitary(da, sampler);
      ++res.tries;
      const double dist = distance(u, d1);
      if (dist <= delta_prime) {
        res.a1_dim = d1;
        res.trace_distance_to_product = dist;
        res.unitary_used = u;
        found = true;
        break;
      }
    }
  }
  res.meets_guarantee =
      std::log2(static_cast<double>(res.a1_dim)) >= res.guaranteed_log_a1 - 1e-12;
  return res;
}

ErasureProtocolReport erasure_protocol_work(const DensityOperator& phi_rae, double delta_prime,
                                            double eps, double temperature_kelvin,
                                            HaarSampler& sampler, int max_tries) {
  ErasureProtocolReport rep;
  rep.search = find_decoupled_subsystem(phi_rae, delta_prime, eps, sampler, max_tries);
  const Index da = phi_rae.subsystem_dims()[1];
  const double s = up_entropy(eps, swap_bipartite(partial_trace(phi_rae.op(), {0, 1})));
  const double protocol_bits = std::log2(static_cast<double>(da)) -
                               2.0 * std::log2(static_cast<double>(rep.search.a1_dim));
  const double bound_bits = -s - 2.0 * std::log2(2.0 * delta_prime - 12.0 * eps);
  rep.protocol = make_work_cost(protocol_bits, temperature_kelvin);
  rep.entropy_bound = make_work_cost(bound_bits, temperature_kelvin,
                                     eps > 0.0 ? Certification::kCertifiedUpper
                                               : Certification::kExact);
  rep.consistent = !rep.search.meets_guarantee || protocol_bits <= bound_bits + 1e-9;
  return rep;
}

}  // namespace qdyn
