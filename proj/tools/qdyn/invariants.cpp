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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "cli.hpp"
#include "qdyn/decoupling.hpp"
#include "qdyn/dynamical.hpp"
#include "qdyn/entropies.hpp"
#include "qdyn/error.hpp"

namespace qdyn::cli {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

/// Every random draw of the suite comes from stream `stream` under the seed.
HaarSampler sampler(const CheckOptions& o, Index dim, std::uint64_t stream) {
  return HaarSampler(dim, derive_seed(o.seed, stream));
}

DensityOperator random_two_qubit(HaarSampler& s) {
  return DensityOperator(s.mixed_state(4).op().with_dims({2, 2}));
}

QuantumChannel depolarizer() { return replacer_channel(maximally_mixed(2), 2); }

struct Suite {
  const CheckOptions& o;
  std::vector<InvariantResult> results;

  double dmax(const HermitianOperator& rho, const HermitianOperator& sigma) const {
    const double v = d_max(rho, sigma);
    return o.mutate == "d_max_sign" ? -v : v;
  }

  void add(const std::string& name, const std::function<InvariantResult()>& body) {
    InvariantResult r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.name = name;
    results.push_back(r);
  }
};

InvariantResult verdict(bool pass, std::string detail) { return {"", pass, std::move(detail)}; }

}  // namespace

std::string format_ledger_line(const InvariantResult& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail;
}

std::vector<InvariantResult> run_invariants(const CheckOptions& options) {
  if (!options.mutate.empty() && options.mutate != "d_max_sign") {
    throw ValidationError("unknown mutation '" + options.mutate + "'");
  }
  Suite suite{options, {}};
  const CheckOptions& o = options;

  suite.add("linalg.partial_trace", [&] {
    HaarSampler s = sampler(o, 8, 1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const HermitianOperator rho = s.mixed_state(8).op().with_dims({2, 2, 2});
      const HermitianOperator a = partial_trace(rho, {0});
      const HermitianOperator a2 = partial_trace(partial_trace(rho, {0, 1}), {0});
      worst = std::max({worst, (a.matrix() - a2.matrix()).norm(), std::abs(a.trace() - 1.0)});
    }
    return verdict(worst < 1e-12, "max residual " + num(worst));
  });

  suite.add("linalg.eigendecomposition", [&] {
    HaarSampler s = sampler(o, 6, 2);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const HermitianOperator h = s.mixed_state(6).op();
      const EigenDecomposition e = herm_eig(h);
      const ComplexMatrix back =
          e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
      worst = std::max(worst, (back - h.matrix()).norm());
    }
    return verdict(worst < 1e-12, "max reconstruction error " + num(worst));
  });

  suite.add("haar.unitarity", [&] {
    HaarSampler s = sampler(o, 4, 3);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const ComplexMatrix u = haar_unitary(4, s);
      worst = std::max(worst, (u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm());
    }
    return verdict(worst < 1e-10, "max residual " + num(worst));
  });

  suite.add("haar.twirl_first_moment", [&] {
    HaarSampler s = sampler(o, 2, 4);
    const ComplexMatrix rho = basis_state(2, 0).matrix();
    ComplexMatrix mean = ComplexMatrix::Zero(2, 2);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const ComplexMatrix u = haar_unitary(2, s);
      mean += u * rho * u.adjoint();
    }
    mean /= static_cast<double>(n);
    const double d = 0.5 * trace_norm(mean - maximally_mixed(2).matrix());
    return verdict(d < 0.02, "trace distance to pi " + num(d));
  });

  suite.add("channels.choi_marginal", [&] {
    HaarSampler s = sampler(o, 2, 5);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const ChoiState c = choi_state(random_channel(2, 3, 2, s));
      const HermitianOperator r = partial_trace(c.state.op(), {0});
      worst = std::max(worst, (r.matrix() - maximally_mixed(2).matrix()).norm());
    }
    return verdict(worst < 1e-12, "max deviation of the reference marginal " + num(worst));
  });

  suite.add("channels.ppt_threshold", [&] {
    const bool below = is_ppt(depolarizing_channel(0.499));
    const bool above = is_ppt(depolarizing_channel(0.501));
    return verdict(!below && above, std::string("ppt(0.499)=") + (below ? "true" : "false") +
                                        " ppt(0.501)=" + (above ? "true" : "false"));
  });

  suite.add("entropies.d_max_nonnegative_on_states", [&] {
    HaarSampler s = sampler(o, 3, 6);
    double worst = kInfinity;
    for (int i = 0; i < 30; ++i) {
      worst = std::min(worst, suite.dmax(s.mixed_state(3), s.mixed_state(3)));
    }
    return verdict(worst >= -1e-12, "min D_max " + num(worst));
  });

  suite.add("entropies.d_max_spectral_vs_sdp", [&] {
    HaarSampler s = sampler(o, 3, 7);
    double worst = 0.0;
    for (int i = 0; i < 15; ++i) {
      const DensityOperator rho = s.mixed_state(3);
      const DensityOperator sigma = s.mixed_state(3);
      const SdpEstimate e = d_max_sdp(rho, sigma);
      if (!e.optimal()) return verdict(false, "SDP not optimal");
      worst = std::max(worst, std::abs(suite.dmax(rho, sigma) - e.value));
    }
    return verdict(worst <= 1e-6, "max difference " + num(worst));
  });

  suite.add("entropies.d_max_data_processing", [&] {
    HaarSampler s = sampler(o, 2, 8);
    double worst = -kInfinity;
    for (int i = 0; i < 20; ++i) {
      const DensityOperator rho = s.mixed_state(2);
      const DensityOperator sigma = s.mixed_state(2);
      const QuantumChannel n = random_channel(2, 2, 2, s);
      worst = std::max(worst, suite.dmax(apply(n, rho), apply(n, sigma)) - suite.dmax(rho, sigma));
    }
    return verdict(worst <= 1e-9, "max increase " + num(worst));
  });

  suite.add("entropies.sandwiched_monotone_in_alpha", [&] {
    HaarSampler s = sampler(o, 3, 9);
    double worst = -kInfinity;
    const double alphas[] = {0.5, 0.8, 1.0, 1.5, 2.0, 5.0};
    for (int i = 0; i < 10; ++i) {
      const DensityOperator rho = s.mixed_state(3);
      const DensityOperator sigma = s.mixed_state(3);
      for (std::size_t k = 0; k + 1 < std::size(alphas); ++k) {
        worst = std::max(worst, sandwiched_renyi(alphas[k], rho, sigma) -
                                    sandwiched_renyi(alphas[k + 1], rho, sigma));
      }
      worst = std::max(worst, sandwiched_renyi(5.0, rho, sigma) - suite.dmax(rho, sigma));
    }
    return verdict(worst <= 1e-9, "max decrease " + num(worst));
  });

  suite.add("entropies.down_below_up", [&] {
    HaarSampler s = sampler(o, 4, 10);
    double worst = -kInfinity;
    for (int i = 0; i < 15; ++i) {
      const DensityOperator rho = random_two_qubit(s);
      worst = std::max(worst, cond_min_entropy_down(rho) - cond_min_entropy_up(rho));
    }
    return verdict(worst <= 1e-6, "max excess " + num(worst));
  });

  suite.add("entropies.duality_on_pure_states", [&] {
    HaarSampler s = sampler(o, 8, 11);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const DensityOperator abc = pure_state(s.pure_vector(8), {2, 2, 2});
      const HermitianOperator ab = partial_trace(abc.op(), {0, 1});
      const HermitianOperator ac = partial_trace(abc.op(), {0, 2});
      const SdpEstimate f = max_product_fidelity_sdp(ac);
      if (!f.optimal()) return verdict(false, "fidelity SDP not optimal");
      worst = std::max(worst, std::abs(cond_min_entropy_up(ab) + std::log2(f.value)));
    }
    return verdict(worst <= 1e-6, "max duality residual " + num(worst));
  });

  suite.add("entropies.smoothing_bounds_ordered", [&] {
    HaarSampler s = sampler(o, 4, 12);
    double worst = -kInfinity;
    for (int i = 0; i < 5; ++i) {
      const DensityOperator rho = random_two_qubit(s);
      const double lb =
          smooth_min_entropy_lower_bound(0.1, rho, MinEntropyVariant::kUp).value;
      const double ub = smooth_min_entropy_upper_bound(0.1, 0.5, rho);
      worst = std::max(worst, lb - ub);
    }
    return verdict(worst <= 1e-6, "max excess of lower over upper bound " + num(worst));
  });

  suite.add("dynamical.closed_form_vs_sdp", [&] {
    HaarSampler s = sampler(o, 2, 13);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const QuantumChannel n = random_channel(2, 2, 2, s);
      const SdpEstimate e = channel_min_entropy_sdp(n);
      if (!e.optimal()) return verdict(false, "SDP not optimal");
      worst = std::max(worst, std::abs(channel_min_entropy(n) - e.value));
    }
    return verdict(worst <= 1e-6, "max difference " + num(worst));
  });

  suite.add("dynamical.scan_lower_bound", [&] {
    ScanOptions so;
    so.n_samples = 100;
    so.seed = derive_seed(o.seed, 14);
    so.workers = o.workers;
    double worst = -kInfinity;
    for (const QuantumChannel& n : {depolarizing_channel(0.3), dephasing1_channel(0.6)}) {
      const ChannelEntropyReport r = channel_min_entropy_scan(n, so);
      worst = std::max(worst, r.s_min - r.inf_scan_value);
    }
    return verdict(worst <= 1e-6, "max shortfall of the scan " + num(worst));
  });

  suite.add("dynamical.continuity", [&] {
    HaarSampler s = sampler(o, 2, 15);
    int violations = 0;
    for (int i = 0; i < 30; ++i) {
      const QuantumChannel a = random_channel(2, 2, 2, s);
      const QuantumChannel b = random_channel(2, 2, 2, s);
      if (!continuity_check(a, b).pass) ++violations;
    }
    return verdict(violations == 0, std::to_string(violations) + " violations in 30 pairs");
  });

  suite.add("dynamical.unitary_covariance", [&] {
    HaarSampler s = sampler(o, 2, 16);
    int violations = 0;
    for (int i = 0; i < 20; ++i) {
      if (!unitary_covariance_check(random_channel(2, 2, 2, s), s.unitary(2), s.unitary(2))) {
        ++violations;
      }
    }
    return verdict(violations == 0, std::to_string(violations) + " violations in 20 channels");
  });

  suite.add("dynamical.ppt_implies_nonnegative", [&] {
    HaarSampler s = sampler(o, 2, 17);
    int ppt = 0;
    double worst = kInfinity;
    for (int i = 0; i < 200; ++i) {
      const QuantumChannel n = random_channel(2, 2, 2 + i % 3, s);
      if (!is_ppt(n)) continue;
      ++ppt;
      worst = std::min(worst, channel_min_entropy(n));
    }
    return verdict(ppt > 0 && worst >= -1e-9,
                   std::to_string(ppt) + " PPT channels, min S_min " + num(worst));
  });

  suite.add("dynamical.dimension_bounds", [&] {
    HaarSampler s = sampler(o, 3, 18);
    double worst = -kInfinity;
    for (int i = 0; i < 20; ++i) {
      const QuantumChannel n = random_channel(2, 3, 1 + i % 4, s);
      const double v = channel_min_entropy(n);
      worst = std::max(worst, std::abs(v) - std::log2(3.0));
    }
    return verdict(worst <= 1e-9, "max excess over log|A| " + num(worst));
  });

  suite.add("decoupling.states_maximally_entangled", [&] {
    HaarSampler s = sampler(o, 2, 19);
    const DecouplingReport r =
        decouple_states_mc(maximally_entangled(2), identity_channel(2), 100, 0.0, s, o.workers);
    const bool ok = std::abs(r.mean_lhs - 1.5) < 1e-9 && r.std_err < 1e-9 && r.pass;
    return verdict(ok, "mean " + num(r.mean_lhs) + " bound " + num(r.bound_rhs));
  });

  suite.add("decoupling.channel_depolarizer", [&] {
    HaarSampler s = sampler(o, 2, 20);
    const DecouplingReport r =
        decouple_channel_mc(depolarizer(), identity_channel(2), 10, 0.0, s, o.workers);
    return verdict(r.pass && r.mean_lhs < 1e-7 && r.n_failed == 0,
                   "mean " + num(r.mean_lhs) + ", " + std::to_string(r.n_failed) + " failed");
  });

  suite.add("thermo.joules_per_bit", [&] {
    const WorkCost w = make_work_cost(3.0, 300.0);
    const double ratio = w.joules / w.bits / (kBoltzmann * 300.0 * std::log(2.0));
    return verdict(std::abs(ratio - 1.0) <= 1e-12, "relative error " + num(ratio - 1.0));
  });

  suite.add("thermo.sum_of_costs_nonnegative", [&] {
    HaarSampler s = sampler(o, 4, 21);
    int violations = 0;
    for (int i = 0; i < 50; ++i) {
      if (!sum_bound_check(random_two_qubit(s), 0.0).pass) ++violations;
    }
    return verdict(violations == 0, std::to_string(violations) + " violations in 50 states");
  });

  suite.add("thermo.zero_error_identity", [&] {
    ScanOptions so;
    so.n_samples = 50;
    so.seed = derive_seed(o.seed, 22);
    so.workers = o.workers;
    double worst = 0.0;
    bool ok = true;
    for (const QuantumChannel& n : {identity_channel(2), depolarizer(), depolarizing_channel(0.3),
                                    dephasing1_channel(0.4), dephasing2_channel(0.2)}) {
      const CostReport r = channel_costs(n, 0.0, 300.0, so);
      ok = ok && r.zero_error_identity_holds;
      worst = std::max({worst, std::abs(r.prep_cost.bits + r.s_min_channel),
                        std::abs(r.eras_cost.bits + r.s_min_channel)});
    }
    return verdict(ok, "max gap to -S_min " + num(worst));
  });

  suite.add("thermo.reconciliation", [&] {
    ScanOptions so;
    so.n_samples = 10;
    so.seed = derive_seed(o.seed, 23);
    int violations = 0;
    for (double eps : {0.0, 0.1}) {
      for (const QuantumChannel& n : {identity_channel(2), depolarizing_channel(0.3)}) {
        if (!reconciliation_report(n, eps, 1.0, 300.0, so).pass) ++violations;
      }
    }
    return verdict(violations == 0, std::to_string(violations) + " violations");
  });

  suite.add("cli.sweep_endpoints", [&] {
    const std::vector<SweepRow> rows =
        sweep({ChannelFamily::kDepolarizing, ChannelFamily::kDephasing1,
               ChannelFamily::kDephasing2},
              21);
    double worst = 0.0;
    for (const SweepRow& r : rows) {
      double expected = 0.0;
      if (r.channel_family == "depolarizing") {
        expected = std::log2(2.0 * std::max(1.0 - r.p, r.p / 3.0));
      } else if (r.channel_family == "dephasing1") {
        expected = std::log2(2.0 - r.p);
      } else {
        expected = std::log2(2.0 * std::max(1.0 - r.p, r.p));
      }
      worst = std::max(worst, std::abs(r.neg_s_min - expected));
    }
    return verdict(worst <= 1e-9, std::to_string(rows.size()) + " rows, max error " + num(worst));
  });

  return suite.results;
}

}  // namespace qdyn::cli
