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

#include <cmath>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "qdyn/decoupling.hpp"
#include "qdyn/error.hpp"

using namespace qdyn;

namespace {

/// Partial trace over the second qubit of a two-qubit system.
QuantumChannel trace_second_qubit() {
  std::vector<ComplexMatrix> kraus;
  for (int j = 0; j < 2; ++j) {
    ComplexMatrix bra = ComplexMatrix::Zero(1, 2);
    bra(0, j) = 1.0;
    kraus.push_back(kron(ComplexMatrix::Identity(2, 2), bra));
  }
  return QuantumChannel(kraus);
}

ComplexVector bell_vector() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

/// (1_R (x) V)|Phi> for the Stinespring isometry V of a qubit channel,
/// dims {2, 2, |E|}.
DensityOperator stinespring_on_bell(const QuantumChannel& n) {
  const IsometryExtension v = stinespring_isometry(n);
  const ComplexMatrix full = kron(ComplexMatrix::Identity(2, 2), v.isometry);
  return pure_state(full * bell_vector(), {2, 2, v.env_dim});
}

}  // namespace

TEST_CASE("haar unitaries are unitary and twirl to the maximally mixed state") {
  HaarSampler s(4, 1);
  for (int i = 0; i < 1000; ++i) CHECK(is_unitary(haar_unitary(4, s), 1e-10));
  HaarSampler one(1, 2);
  CHECK(std::abs(std::abs(haar_unitary(1, one)(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("states: maximally entangled input with identity map") {
  // Oracle: trace norm of Phi - pi (x) pi from its Jacobi spectrum.
  const oracle::CMat phi = maximally_entangled(2).matrix();
  const double expected = oracle::trace_norm(phi - oracle::CMat::Identity(4, 4) / 4.0);
  CHECK(expected == doctest::Approx(1.5).epsilon(1e-12));

  HaarSampler s(2, 7);
  const DecouplingReport r = decouple_states_mc(maximally_entangled(2), identity_channel(2), 200,
                                                0.0, s);
  CHECK(r.n_samples == 200);
  CHECK(r.mean_lhs == doctest::Approx(expected).epsilon(1e-9));
  CHECK(r.std_err < 1e-9);
  CHECK(r.bound_rhs == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.pass);
}

TEST_CASE("states: product input is already decoupled") {
  const DensityOperator pp(tensor(maximally_mixed(2).op(), maximally_mixed(2).op()));
  HaarSampler s(2, 8);
  const DecouplingReport r = decouple_states_mc(pp, identity_channel(2), 50, 0.0, s);
  CHECK(r.mean_lhs < 1e-12);
  CHECK(r.pass);
}

TEST_CASE("states: random pure inputs with a partial trace never violate the bound") {
  HaarSampler g(16, 11);
  for (int i = 0; i < 100; ++i) {
    const DensityOperator phi = pure_state(g.pure_vector(16), {4, 4});
    const DecouplingReport r = decouple_states_mc(phi, trace_second_qubit(), 50, 0.0, g);
    CHECK(r.mean_lhs >= 0.0);
    CHECK(r.pass);
  }
}

TEST_CASE("states: reports depend on the seed only, not on the worker count") {
  HaarSampler g(16, 12);
  const DensityOperator phi = pure_state(g.pure_vector(16), {4, 4});
  HaarSampler a(4, 99);
  HaarSampler b(4, 99);
  const DecouplingReport one = decouple_states_mc(phi, trace_second_qubit(), 64, 0.0, a, 1);
  const DecouplingReport four = decouple_states_mc(phi, trace_second_qubit(), 64, 0.0, b, 4);
  CHECK(one.mean_lhs == four.mean_lhs);
  CHECK(one.std_err == four.std_err);
}

TEST_CASE("states: estimates agree across master seeds within three standard errors") {
  HaarSampler g(16, 13);
  const DensityOperator phi = pure_state(g.pure_vector(16), {4, 4});
  HaarSampler a(4, 1);
  HaarSampler b(4, 2);
  const DecouplingReport ra = decouple_states_mc(phi, trace_second_qubit(), 400, 0.0, a);
  const DecouplingReport rb = decouple_states_mc(phi, trace_second_qubit(), 400, 0.0, b);
  const double sigma = std::hypot(ra.std_err, rb.std_err);
  CHECK(std::abs(ra.mean_lhs - rb.mean_lhs) <= 3.0 * sigma);
}

TEST_CASE("states: smoothing only loosens the bound") {
  HaarSampler s(2, 14);
  HaarSampler t(2, 14);
  const DecouplingReport exact =
      decouple_states_mc(maximally_entangled(2), identity_channel(2), 20, 0.0, s);
  const DecouplingReport smooth =
      decouple_states_mc(maximally_entangled(2), identity_channel(2), 20, 0.01, t);
  CHECK(smooth.epsilon == 0.01);
  CHECK(smooth.pass);
  CHECK(smooth.mean_lhs == doctest::Approx(exact.mean_lhs).epsilon(1e-12));
}

TEST_CASE("channel: the depolarizer is invariant under unitaries") {
  HaarSampler s(2, 20);
  const DecouplingReport r = decouple_channel_mc(replacer_channel(maximally_mixed(2), 2),
                                                 identity_channel(2), 20, 0.0, s);
  CHECK(r.mean_lhs < 1e-7);
  CHECK(r.n_failed == 0);
  CHECK(r.pass);
}

TEST_CASE("channel: identity against the depolarizer") {
  HaarSampler s(2, 21);
  const DecouplingReport r =
      decouple_channel_mc(identity_channel(2), identity_channel(2), 30, 0.0, s);
  CHECK(r.mean_lhs == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(r.std_err < 1e-9);
  CHECK(r.bound_rhs == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.max_duality_gap <= 1e-7);
  CHECK(r.pass);
}

TEST_CASE("channel: unitary N gives a constant per-sample value") {
  HaarSampler g(2, 22);
  HaarSampler s(2, 23);
  const DecouplingReport r =
      decouple_channel_mc(unitary_channel(g.unitary(2)), identity_channel(2), 30, 0.0, s);
  CHECK(r.std_err < 1e-9);
  CHECK(r.pass);
}

TEST_CASE("channel: two-qubit depolarizing with a partial trace") {
  for (double p : {0.2, 0.5, 0.8}) {
    const QuantumChannel n = tensor_channels(depolarizing_channel(p), depolarizing_channel(p));
    HaarSampler s(4, 24);
    const DecouplingReport r = decouple_channel_mc(n, trace_second_qubit(), 40, 0.0, s, 2);
    CHECK(r.n_failed == 0);
    CHECK(r.max_duality_gap <= 1e-7);
    CHECK(r.pass);
  }
}

TEST_CASE("reports serialize with the fixed field names") {
  HaarSampler s(2, 30);
  const DecouplingReport r =
      decouple_states_mc(maximally_entangled(2), identity_channel(2), 5, 0.0, s);
  const nlohmann::json j = nlohmann::json::parse(to_json(r));
  CHECK(j.size() == 6);
  for (const char* key : {"n_samples", "mean_lhs", "std_err", "bound_rhs", "epsilon", "pass"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["pass"].get<bool>());
  CHECK(j["n_samples"].get<int>() == 5);
}

TEST_CASE("invalid inputs are rejected") {
  HaarSampler s(2, 31);
  CHECK_THROWS_AS(decouple_states_mc(maximally_entangled(2), identity_channel(2), 5, 1.0, s),
                  ValidationError);
  CHECK_THROWS_AS(decouple_states_mc(maximally_entangled(2), identity_channel(4), 5, 0.0, s),
                  ValidationError);
  CHECK_THROWS_AS(decouple_states_mc(maximally_entangled(2), identity_channel(2), 0, 0.0, s),
                  ValidationError);
}

TEST_CASE("subsystem search: decoupled reference keeps all of A") {
  // psi_R = |0>, A = two qubits in pi (x) pi purified by E.
  ComplexVector v = ComplexVector::Zero(2 * 4 * 4);
  for (int a = 0; a < 4; ++a) v(a * 4 + a) = 0.5;  // R index 0
  const DensityOperator phi = pure_state(v, {2, 4, 4});
  HaarSampler s(4, 40);
  const SubsystemSearchResult r = find_decoupled_subsystem(phi, 0.01, 0.0, s);
  CHECK(r.a1_dim == 4);
  CHECK(r.trace_distance_to_product < 1e-12);
  CHECK(r.meets_guarantee);
}

TEST_CASE("subsystem search: maximally entangled A only admits the trivial split") {
  const DensityOperator phi(maximally_entangled(4).op().with_dims({4, 4, 1}));
  HaarSampler s(4, 41);
  const SubsystemSearchResult r = find_decoupled_subsystem(phi, 0.1, 0.0, s, 20);
  CHECK(r.guaranteed_log_a1 < 0.0);
  CHECK(r.a1_dim == 1);
  CHECK(r.trace_distance_to_product == 0.0);
  CHECK(r.meets_guarantee);
}

TEST_CASE("subsystem search: depolarizing Stinespring output") {
  // Oracle: Phi^N = -0.2 Phi + 1.2 pi (x) pi at p = 0.9, so the distance of
  // the full split is 0.1 ||Phi - pi (x) pi||_1.
  const oracle::CMat phi = maximally_entangled(2).matrix();
  const double expected = 0.1 * oracle::trace_norm(phi - oracle::CMat::Identity(4, 4) / 4.0);
  HaarSampler s(2, 42);
  const SubsystemSearchResult r =
      find_decoupled_subsystem(stinespring_on_bell(depolarizing_channel(0.9)), 0.2, 0.0, s);
  CHECK(r.a1_dim == 2);
  CHECK(r.trace_distance_to_product == doctest::Approx(expected).epsilon(1e-9));
  CHECK(r.trace_distance_to_product <= r.delta_prime);
}

TEST_CASE("subsystem search rejects undefined bounds and mixed inputs") {
  HaarSampler s(2, 43);
  const DensityOperator pure = stinespring_on_bell(depolarizing_channel(0.9));
  CHECK_THROWS_AS(find_decoupled_subsystem(pure, 0.06, 0.01, s), ValidationError);
  CHECK_THROWS_AS(erasure_protocol_work(pure, 0.05, 0.01, 300.0, s), ValidationError);
  const DensityOperator mixed(
      tensor(maximally_mixed(2).op(), maximally_mixed(4).op()).with_dims({2, 2, 2}));
  CHECK_THROWS_AS(find_decoupled_subsystem(mixed, 0.1, 0.0, s), ValidationError);
}

TEST_CASE("erasure protocol work") {
  HaarSampler s(4, 50);
  ComplexVector v = ComplexVector::Zero(2 * 4 * 4);
  for (int a = 0; a < 4; ++a) v(a * 4 + a) = 0.5;
  const ErasureProtocolReport free = erasure_protocol_work(pure_state(v, {2, 4, 4}), 0.01, 0.0,
                                                           300.0, s);
  CHECK(free.protocol.bits == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(free.protocol.extractable());
  CHECK(free.consistent);

  const DensityOperator ent(maximally_entangled(4).op().with_dims({4, 4, 1}));
  const ErasureProtocolReport full = erasure_protocol_work(ent, 0.1, 0.0, 300.0, s, 10);
  CHECK(full.protocol.bits == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(full.consistent);
  CHECK(full.protocol.joules ==
        doctest::Approx(oracle::landauer_joules(2.0, 300.0)).epsilon(1e-12));
}

TEST_CASE("erasure protocol entropy bound against the adversarial bound of the channel") {
  // S^up(A|R) at the Choi state is at least S_min[N], so the entropy-form
  // bound cannot exceed -S_min[N] - 2 log(2 delta').
  const double delta_prime = 0.2;
  const double slack = -2.0 * std::log2(2.0 * delta_prime);
  for (const QuantumChannel& n :
       {identity_channel(2), depolarizing_channel(0.9), dephasing2_channel(0.3)}) {
    HaarSampler s(2, 51);
    const ErasureProtocolReport w =
        erasure_protocol_work(stinespring_on_bell(n), delta_prime, 0.0, 300.0, s);
    const AdversarialBound adv = adversarial_erasure_bound(n, 0.0, slack, 300.0);
    CHECK(w.entropy_bound.bits <= adv.bound.bits + 1e-6);
    CHECK(w.consistent);
  }
}
