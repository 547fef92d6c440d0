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

#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qdyn/dynamical.hpp"
#include "qdyn/error.hpp"

using namespace qdyn;

namespace {

QuantumChannel depolarizer() { return replacer_channel(maximally_mixed(2), 2); }

ScanOptions small_scan(int n, std::uint64_t seed = 42) {
  ScanOptions o;
  o.n_samples = n;
  o.seed = seed;
  return o;
}

std::vector<QuantumChannel> named_families(double p) {
  return {depolarizing_channel(p), dephasing1_channel(p), dephasing2_channel(p)};
}

}  // namespace

TEST_CASE("closed form matches the Bell-basis oracle") {
  for (int k = 0; k <= 20; ++k) {
    const double p = k / 20.0;
    CHECK(-channel_min_entropy(depolarizing_channel(p)) ==
          doctest::Approx(oracle::neg_smin_via_bell(oracle::depolarizing_kraus(p))).epsilon(1e-9));
    CHECK(-channel_min_entropy(dephasing1_channel(p)) ==
          doctest::Approx(oracle::neg_smin_via_bell(oracle::dephasing1_kraus(p))).epsilon(1e-9));
    CHECK(-channel_min_entropy(dephasing2_channel(p)) ==
          doctest::Approx(oracle::neg_smin_via_bell(oracle::dephasing2_kraus(p))).epsilon(1e-9));
  }
}

TEST_CASE("channel min-entropy examples") {
  CHECK(channel_min_entropy(identity_channel(2)) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(channel_min_entropy(depolarizer()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(channel_min_entropy(depolarizing_channel(0.75)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(channel_min_entropy(depolarizing_channel(1.0)) ==
        doctest::Approx(-std::log2(2.0 / 3.0)).epsilon(1e-12));
  CHECK(std::abs(channel_min_entropy(dephasing1_channel(1.0))) < 1e-12);
}

TEST_CASE("closed form and SDP routes agree") {
  HaarSampler s(2, 31);
  for (int i = 0; i < 20; ++i) {
    const QuantumChannel n = random_channel(2, 2, 1 + i % 4, s);
    const SdpEstimate e = channel_min_entropy_sdp(n);
    REQUIRE(e.optimal());
    CHECK(e.value == doctest::Approx(channel_min_entropy(n)).epsilon(1e-6));
  }
}

TEST_CASE("channel min-entropy lies within the dimension bounds") {
  HaarSampler s(2, 32);
  const std::vector<std::array<Index, 3>> shapes = {{2, 2, 1}, {2, 3, 2}, {3, 2, 3}, {2, 2, 4}};
  for (const auto& sh : shapes) {
    for (int i = 0; i < 10; ++i) {
      const QuantumChannel n = random_channel(sh[0], sh[1], sh[2], s);
      const double v = channel_min_entropy(n);
      CHECK(v >= -std::log2(static_cast<double>(std::min(sh[0], sh[1]))) - 1e-9);
      CHECK(v <= std::log2(static_cast<double>(sh[1])) + 1e-9);
    }
  }
}

TEST_CASE("the minimum -log|A'| is attained exactly by isometries") {
  HaarSampler s(2, 33);
  CHECK(channel_min_entropy(unitary_channel(s.unitary(2))) ==
        doctest::Approx(-1.0).epsilon(1e-9));
  const ComplexMatrix v = s.unitary(3).leftCols(2);
  CHECK(channel_min_entropy(isometry_channel(v)) == doctest::Approx(-1.0).epsilon(1e-9));
  for (int k = 1; k <= 9; ++k) {
    for (const QuantumChannel& n : named_families(k / 10.0)) {
      CHECK(channel_min_entropy(n) > -1.0 + 1e-6);
    }
  }
}

TEST_CASE("input scan") {
  const ChannelEntropyReport id = channel_min_entropy_scan(identity_channel(2), small_scan(50));
  CHECK(id.inf_scan_value == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(id.scan_consistent);
  CHECK(id.sdp_agrees);

  const ChannelEntropyReport r = channel_min_entropy_scan(depolarizer(), small_scan(50));
  CHECK(r.inf_scan_value == doctest::Approx(1.0).epsilon(1e-6));

  const ChannelEntropyReport d = channel_min_entropy_scan(depolarizing_channel(0.5), small_scan(100));
  CHECK(d.inf_scan_value >= -1e-6);
  CHECK(d.inf_scan_value <= 0.05);
  CHECK(d.n_scan_samples == 100 + 4);
}

TEST_CASE("unpruned scan stays above the closed form") {
  HaarSampler s(2, 34);
  for (int i = 0; i < 3; ++i) {
    const QuantumChannel n = random_channel(2, 2, 2, s);
    ScanOptions o = small_scan(40, 7 + static_cast<std::uint64_t>(i));
    o.prune = false;
    o.refine_evaluations = 40;
    const ChannelEntropyReport rep = channel_min_entropy_scan(n, o);
    CHECK(rep.n_pruned == 0);
    CHECK(rep.scan_consistent);
  }
}

TEST_CASE("scan results do not depend on the worker count") {
  const QuantumChannel n = dephasing1_channel(0.3);
  ScanOptions o = small_scan(60, 99);
  o.prune = false;
  const ChannelEntropyReport one = channel_min_entropy_scan(n, o);
  o.workers = 4;
  const ChannelEntropyReport four = channel_min_entropy_scan(n, o);
  CHECK(one.inf_scan_value == four.inf_scan_value);
  CHECK(one.scan_argmin == four.scan_argmin);
}

TEST_CASE("singlet fidelity SDP is the negated up-variant min-entropy") {
  HaarSampler s(2, 35);
  for (int i = 0; i < 10; ++i) {
    const DensityOperator rho = DensityOperator(s.mixed_state(4).op().with_dims({2, 2}));
    const SdpEstimate f = singlet_fidelity_sdp(rho);
    REQUIRE(f.optimal());
    CHECK(f.value == doctest::Approx(-cond_min_entropy_up(swap_bipartite(rho))).epsilon(1e-6));
  }
}

TEST_CASE("dual expressions") {
  const SdpEstimate id = singlet_fidelity_dual(identity_channel(2), small_scan(20));
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-6));
  const SdpEstimate rp = singlet_fidelity_dual(depolarizer(), small_scan(20));
  CHECK(rp.value == doctest::Approx(-1.0).epsilon(1e-6));

  HaarSampler s(2, 36);
  const SdpEstimate u = env_decoupling_dual(unitary_channel(s.unitary(2)), small_scan(20));
  CHECK(u.value == doctest::Approx(1.0).epsilon(1e-6));
  const SdpEstimate re = env_decoupling_dual(depolarizer(), small_scan(20));
  CHECK(re.value == doctest::Approx(-1.0).epsilon(1e-6));

  for (double p : {0.2, 0.6}) {
    for (const QuantumChannel& n : named_families(p)) {
      const double target = -channel_min_entropy(n);
      const SdpEstimate a = singlet_fidelity_dual(n, small_scan(30));
      const SdpEstimate b = env_decoupling_dual(n, small_scan(30));
      CHECK(a.value <= target + 1e-6);
      CHECK(b.value <= target + 1e-6);
      CHECK(a.value >= target - 0.02);
      CHECK(b.value >= target - 0.02);
    }
  }
  for (int i = 0; i < 5; ++i) {
    const QuantumChannel n = random_channel(2, 2, 2, s);
    CHECK(singlet_fidelity_dual(n, small_scan(20)).value <= -channel_min_entropy(n) + 1e-6);
    CHECK(env_decoupling_dual(n, small_scan(20)).value <= -channel_min_entropy(n) + 1e-6);
  }
}

TEST_CASE("channel smoothing") {
  const QuantumChannel n = depolarizing_channel(0.3);
  const ChannelSmoothingBound b0 = smooth_channel_min_entropy_lower_bound(0.0, n);
  CHECK(b0.value == channel_min_entropy(n));
  const ChannelSmoothingBound b1 = smooth_channel_min_entropy_lower_bound(0.1, identity_channel(2));
  CHECK(b1.value >= -1.0);
  CHECK(b1.purified_distance_bound == doctest::Approx(0.1).epsilon(1e-12));
  // lambda_max of the mixed Choi state is (1 - t) lambda + t / 4.
  const double t = 1.0 - std::sqrt(1.0 - 0.01);
  CHECK(b1.value == doctest::Approx(-std::log2(2.0 * ((1.0 - t) + t / 4.0))).epsilon(1e-12));
  double last = b0.value;
  for (double eps : {0.05, 0.1, 0.2, 0.4}) {
    const double v = smooth_channel_min_entropy_lower_bound(eps, n).value;
    CHECK(v >= last - 1e-12);
    last = v;
  }
}

TEST_CASE("smoothed channel bound respects the state-level bound") {
  const ChannelSmoothingReport r =
      channel_smoothing_check(0.05, depolarizing_channel(0.3), small_scan(30));
  CHECK(r.pass);
  CHECK(r.violations == 0);
  CHECK(r.max_state_distance <= 0.05 + 1e-9);
  CHECK(r.channel_bound <= r.min_witness_value + 1e-6);
  CHECK(r.channel_bound <= r.min_upper_bound + 1e-6);
  HaarSampler s(2, 37);
  for (int i = 0; i < 3; ++i) {
    CHECK(channel_smoothing_check(0.2, random_channel(2, 2, 2, s), small_scan(10)).pass);
  }
}

TEST_CASE("continuity") {
  const QuantumChannel id = identity_channel(2);
  const ContinuityReport same = continuity_check(id, id);
  CHECK(same.lhs == 0.0);
  CHECK(same.pass);
  const ContinuityReport r = continuity_check(id, dephasing2_channel(0.1));
  CHECK(r.lhs == doctest::Approx(std::abs(-1.0 + std::log2(1.8))).epsilon(1e-9));
  CHECK(r.pass);
  HaarSampler s(2, 38);
  for (int i = 0; i < 20; ++i) {
    const ContinuityReport c =
        continuity_check(random_channel(2, 2, 2, s), random_channel(2, 2, 2, s));
    CHECK(c.pass);
  }
}

TEST_CASE("unitary covariance") {
  HaarSampler s(2, 39);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  CHECK(unitary_covariance_check(depolarizing_channel(0.3), id, id));
  for (int i = 0; i < 10; ++i) {
    CHECK(unitary_covariance_check(depolarizing_channel(0.3), s.unitary(2), s.unitary(2)));
    CHECK(unitary_covariance_check(random_channel(2, 2, 2, s), s.unitary(2), s.unitary(2)));
  }
  CHECK(unitary_covariance_check(dephasing2_channel(0.2), pauli_x(), pauli_x()));
}

TEST_CASE("PPT channels have nonnegative min-entropy") {
  HaarSampler s(2, 40);
  int ppt = 0;
  for (int i = 0; i < 200; ++i) {
    const QuantumChannel n = random_channel(2, 2, 2 + i % 3, s);
    if (!is_ppt(n)) continue;
    ++ppt;
    CHECK(channel_min_entropy(n) >= -1e-9);
  }
  CHECK(ppt > 0);
}

TEST_CASE("composition probe reports every part") {
  const CompositionProbe p = composition_probe(depolarizer(), identity_channel(2));
  CHECK(p.composite == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.first == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(p.second == doctest::Approx(1.0).epsilon(1e-12));
}
