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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>

#include "cli.hpp"
#include "oracles.hpp"
#include "qdyn/decoupling.hpp"
#include "qdyn/dynamical.hpp"
#include "qdyn/entropies.hpp"
#include "qdyn/thermo.hpp"

using namespace qdyn;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

std::vector<oracle::CMat> kraus_of(const QuantumChannel& n) {
  return {n.kraus().begin(), n.kraus().end()};
}

QuantumChannel trace_second_qubit() {
  std::vector<ComplexMatrix> kraus;
  for (int j = 0; j < 2; ++j) {
    ComplexMatrix bra = ComplexMatrix::Zero(1, 2);
    bra(0, j) = 1.0;
    kraus.push_back(kron(ComplexMatrix::Identity(2, 2), bra));
  }
  return QuantumChannel(kraus);
}

// 1. Closed-form sweep of the three qubit families.
Verdict sweep_reproduction() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<cli::SweepRow> rows = cli::sweep(
      {ChannelFamily::kDepolarizing, ChannelFamily::kDephasing1, ChannelFamily::kDephasing2}, 21);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  double worst = 0.0;
  for (const cli::SweepRow& r : rows) {
    double formula = 0.0;
    double bell = 0.0;
    if (r.channel_family == "depolarizing") {
      formula = std::log2(2.0 * std::max(1.0 - r.p, r.p / 3.0));
      bell = oracle::neg_smin_via_bell(oracle::depolarizing_kraus(r.p));
    } else if (r.channel_family == "dephasing1") {
      formula = std::log2(2.0 - r.p);
      bell = oracle::neg_smin_via_bell(oracle::dephasing1_kraus(r.p));
    } else {
      formula = std::log2(2.0 * std::max(1.0 - r.p, r.p));
      bell = oracle::neg_smin_via_bell(oracle::dephasing2_kraus(r.p));
    }
    worst = std::max({worst, std::abs(r.neg_s_min - formula), std::abs(formula - bell)});
  }
  auto at = [&](const std::string& family, double p) {
    for (const cli::SweepRow& r : rows) {
      if (r.channel_family == family && std::abs(r.p - p) < 1e-12) return r.neg_s_min;
    }
    return std::nan("");
  };
  const double endpoint_err = std::max({
      std::abs(at("depolarizing", 0.0) - 1.0), std::abs(at("dephasing1", 0.0) - 1.0),
      std::abs(at("dephasing2", 0.0) - 1.0), std::abs(at("depolarizing", 0.75) + 1.0),
      std::abs(at("dephasing1", 1.0)), std::abs(at("dephasing2", 0.5))});
  const bool pass = rows.size() == 63 && worst <= 1e-9 && endpoint_err <= 1e-9 && seconds < 5.0;
  return {pass, fmt("63 grid values, max error %.2e, endpoint error %.2e, %.3f s", worst,
                    endpoint_err, seconds)};
}

// 2. Closed form against the SDP for the down-variant on the Choi state.
Verdict dual_path_agreement() {
  HaarSampler s(2, derive_seed(kSeed, 2));
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const QuantumChannel n = random_channel(2, 2, 1 + i % 4, s);
    const SdpEstimate e = cond_min_entropy_down_sdp(swap_bipartite(choi_state(n).state.op()));
    const double diff = std::abs(channel_min_entropy(n) - e.value);
    worst = std::max(worst, diff);
    if (!e.optimal() || diff > 1e-6) ++violations;
  }
  return {violations == 0, fmt("100 channels, %.0f violations, max difference %.2e",
                               violations, worst)};
}

// 3. Sampled infimum over pure inputs bounds S_min from above and gets close.
Verdict scan_lower_bound() {
  const ChannelFamily families[] = {ChannelFamily::kDepolarizing, ChannelFamily::kDephasing1,
                                    ChannelFamily::kDephasing2, ChannelFamily::kReplacer,
                                    ChannelFamily::kUnitary};
  ScanOptions so;
  so.n_samples = 2000;
  so.seed = kSeed;
  so.workers = workers();
  int below = 0;
  int far = 0;
  int failed = 0;
  double worst_gap = 0.0;
  double worst_shortfall = -kInfinity;
  for (ChannelFamily f : families) {
    for (int k = 1; k <= 9; ++k) {
      const double p = 0.1 * k;
      const ChannelEntropyReport r = channel_min_entropy_scan(qubit_family_member(f, p), so);
      const double gap = r.inf_scan_value - r.s_min;
      worst_gap = std::max(worst_gap, gap);
      worst_shortfall = std::max(worst_shortfall, -gap);
      if (gap < -1e-6) ++below;
      if (gap > 0.05) ++far;
      failed += r.n_failed;
    }
  }
  return {below == 0 && far == 0 && failed == 0,
          fmt("45 channels x 2000 inputs, max shortfall %.2e, max gap %.2e bits, ",
              worst_shortfall, worst_gap) +
              std::to_string(failed) + " SDP failures"};
}

// 4. State decoupling.
Verdict state_decoupling() {
  HaarSampler s(2, derive_seed(kSeed, 4));
  const DecouplingReport phi =
      decouple_states_mc(maximally_entangled(2), identity_channel(2), 200, 0.0, s, workers());
  const bool phi_ok = std::abs(phi.mean_lhs - 1.5) <= 1e-9 && phi.std_err < 1e-9 &&
                      std::abs(phi.bound_rhs - 2.0) <= 1e-6 && phi.pass;

  HaarSampler draw(16, derive_seed(kSeed, 5));
  const QuantumChannel t = trace_second_qubit();
  int violations = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DensityOperator psi = pure_state(draw.pure_vector(16), {4, 4});
    HaarSampler mc(4, derive_seed(kSeed, 1000 + static_cast<std::uint64_t>(i)));
    const DecouplingReport r = decouple_states_mc(psi, t, 50, 0.0, mc, workers());
    worst_ratio = std::max(worst_ratio, r.mean_lhs / r.bound_rhs);
    if (!r.pass) ++violations;
  }
  return {phi_ok && violations == 0,
          fmt("Phi: mean %.12f std_err %.1e bound %.9f; ", phi.mean_lhs, phi.std_err,
              phi.bound_rhs) +
              fmt("100 random states: %.0f violations, max mean/bound %.3f", violations,
                  worst_ratio)};
}

// 5. Channel decoupling with per-sample diamond SDPs.
Verdict channel_decoupling() {
  const auto start = std::chrono::steady_clock::now();
  int violations = 0;
  int failed = 0;
  double worst_gap = 0.0;
  std::string means;
  for (double p : {0.2, 0.5, 0.8}) {
    const QuantumChannel d = depolarizing_channel(p);
    HaarSampler s(4, derive_seed(kSeed, 6));
    const DecouplingReport r =
        decouple_channel_mc(tensor_channels(d, d), trace_second_qubit(), 200, 0.0, s, workers());
    if (!r.pass) ++violations;
    failed += r.n_failed;
    worst_gap = std::max(worst_gap, r.max_duality_gap);
    means += fmt(" p=%.1f %.4f<=%.4f", p, r.mean_lhs, r.bound_rhs);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {violations == 0 && failed == 0 && worst_gap <= 1e-7 && seconds < 300.0,
          "3 x 200 samples," + means +
              fmt(", max gap %.2e, %.0f failures, %.1f s", worst_gap, failed, seconds)};
}

// 6. Sum of state costs at mu = 0 is nonnegative.
Verdict sum_of_costs() {
  HaarSampler s(4, derive_seed(kSeed, 7));
  int violations = 0;
  double worst = kInfinity;
  for (int i = 0; i < 200; ++i) {
    const DensityOperator rho(s.mixed_state(4).op().with_dims({2, 2}));
    const SumBoundReport r = sum_bound_check(rho, 0.0);
    worst = std::min(worst, r.sum_bits);
    if (!r.pass || r.sum_bits < -1e-9) ++violations;
  }
  return {violations == 0,
          fmt("200 states, %.0f violations, min sum %.3e bits", violations, worst)};
}

// 7. Channel preparation and erasure costs at mu = 0.
Verdict zero_error_costs() {
  ScanOptions so;
  so.n_samples = 200;
  so.seed = kSeed;
  so.workers = workers();
  const CostReport id = channel_costs(identity_channel(2), 0.0, 300.0, so);
  const CostReport rp = channel_costs(replacer_channel(maximally_mixed(2), 2), 0.0, 300.0, so);
  const bool exact_ok =
      std::abs(id.prep_cost.bits - 1.0) <= 1e-9 && std::abs(id.eras_cost.bits - 1.0) <= 1e-9 &&
      std::abs(rp.prep_cost.bits + 1.0) <= 1e-9 && std::abs(rp.eras_cost.bits + 1.0) <= 1e-9 &&
      id.attained_inputs.find("prep: maximally entangled") != std::string::npos &&
      id.attained_inputs.find("eras: maximally mixed") != std::string::npos;

  double worst_below = 0.0;
  double worst_above = -kInfinity;
  for (ChannelFamily f :
       {ChannelFamily::kDepolarizing, ChannelFamily::kDephasing1, ChannelFamily::kDephasing2}) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const CostReport r = channel_costs(qubit_family_member(f, p), 0.0, 300.0, so);
      for (double bits : {r.prep_cost.bits, r.eras_cost.bits}) {
        worst_below = std::max(worst_below, -r.s_min_channel - bits);
        worst_above = std::max(worst_above, bits + r.s_min_channel);
      }
    }
  }
  return {exact_ok && worst_below <= 0.02 && worst_above <= 1e-6,
          fmt("identity %.12f/%.12f bits, ", id.prep_cost.bits, id.eras_cost.bits) +
              fmt("replacer %.12f/%.12f bits; ", rp.prep_cost.bits, rp.eras_cost.bits) +
              fmt("15 family members: max shortfall %.2e, max excess %.2e", worst_below,
                  worst_above)};
}

// 8. Continuity in the diamond distance.
Verdict continuity() {
  HaarSampler s(2, derive_seed(kSeed, 8));
  int violations = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 500; ++i) {
    const QuantumChannel a = random_channel(2, 2, 2 + i % 3, s);
    const QuantumChannel b = random_channel(2, 2, 2 + (i / 3) % 3, s);
    const ContinuityReport r = continuity_check(a, b);
    const double rhs = 2.0 * 2.0 * r.delta / std::log(2.0);
    if (!r.pass || r.lhs > rhs + 1e-9) ++violations;
    if (rhs > 0.0) worst_ratio = std::max(worst_ratio, r.lhs / rhs);
  }
  return {violations == 0,
          fmt("500 pairs, %.0f violations, max lhs/rhs %.3f", violations, worst_ratio)};
}

// 9. PPT threshold and PPT channels have nonnegative entropy.
Verdict ppt_consistency() {
  const bool below = is_ppt(depolarizing_channel(0.5 - 1e-3));
  const bool above = is_ppt(depolarizing_channel(0.5 + 1e-3));
  HaarSampler s(2, derive_seed(kSeed, 9));
  int ppt = 0;
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    const QuantumChannel n = random_channel(2, 2, 2 + i % 4, s);
    if (!is_ppt(n)) continue;
    ++ppt;
    if (channel_min_entropy(n) < -1e-9) ++violations;
  }
  return {!below && above && violations == 0,
          std::string("ppt(0.499)=") + (below ? "true" : "false") +
              " ppt(0.501)=" + (above ? "true" : "false") + "; " + std::to_string(ppt) +
              " PPT among 500 random channels, " + std::to_string(violations) + " violations"};
}

// 10. Haar sampler.
Verdict haar_sampler() {
  HaarSampler s(4, derive_seed(kSeed, 10));
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ComplexMatrix u = haar_unitary(4, s);
    worst = std::max(worst, (u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm());
  }
  HaarSampler t(2, derive_seed(kSeed, 11));
  const ComplexMatrix rho = basis_state(2, 0).matrix();
  ComplexMatrix mean = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 10000; ++i) {
    const ComplexMatrix u = haar_unitary(2, t);
    mean += u * rho * u.adjoint();
  }
  mean /= 10000.0;
  const double distance = 0.5 * trace_norm(mean - maximally_mixed(2).matrix());
  return {worst < 1e-10 && distance <= 0.02,
          fmt("10^4 draws: max unitarity residual %.2e, twirl distance to pi %.4f", worst,
              distance)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"1 sweep closed forms", sweep_reproduction},
      {"2 closed form vs SDP", dual_path_agreement},
      {"3 pure-input scan", scan_lower_bound},
      {"4 state decoupling", state_decoupling},
      {"5 channel decoupling", channel_decoupling},
      {"6 sum of state costs", sum_of_costs},
      {"7 zero-error channel costs", zero_error_costs},
      {"8 continuity", continuity},
      {"9 PPT consistency", ppt_consistency},
      {"10 Haar sampler", haar_sampler},
  };
  int failed = 0;
  for (const auto& [name, body] : criteria) {
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s [%s] %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
