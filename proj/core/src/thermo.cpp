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

#include "qdyn/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "qdyn/error.hpp"
#include "qdyn/haar.hpp"
#include "qdyn/parallel.hpp"

namespace qdyn {
namespace {

void check_mu(double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) throw ValidationError("mu must lie in [0, 1)");
}

/// A value and the input that produced it; failed evaluations hold NaN.
struct Scored {
  double bits = std::numeric_limits<double>::quiet_NaN();
  std::string name;
};

/// Largest finite score, earliest among ties within 1e-12; NaN entries
/// count as failures.
Scored best_of(const std::vector<Scored>& all, int& failed) {
  Scored best;
  best.bits = -kInfinity;
  for (const Scored& s : all) {
    if (std::isnan(s.bits)) {
      ++failed;
      continue;
    }
    if (s.bits > best.bits + 1e-12) best = s;
  }
  return best;
}

double prep_bits(const DensityOperator& rho_ab, double mu) {
  if (mu == 0.0) return -cond_min_entropy_down(rho_ab);
  return -smooth_min_entropy_lower_bound(mu, rho_ab, MinEntropyVariant::kDown).value;
}

/// Erasure cost in bits, or NaN when the SDP fails.
double eras_bits_or_nan(const DensityOperator& rho_ae, double mu) {
  try {
    return cond_hypothesis_entropy(mu, rho_ae);
  } catch (const SolverError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

double default_temperature() {
  if (const char* env = std::getenv("KELVIN_DEFAULT")) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(t) && t > 0.0) return t;
  }
  return 300.0;
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::kExact:
      return "exact";
    case Certification::kCertifiedLower:
      return "certified-lower";
    case Certification::kCertifiedUpper:
      return "certified-upper";
    case Certification::kSampled:
      return "sampled";
  }
  return "unknown";
}

WorkCost make_work_cost(double bits, double temperature_kelvin, Certification certification) {
  if (!(temperature_kelvin > 0.0) || !std::isfinite(temperature_kelvin)) {
    throw ValidationError("temperature must be a positive number of kelvin");
  }
  if (std::isnan(bits)) throw ValidationError("work cost is NaN");
  WorkCost w;
  w.bits = bits;
  w.temperature_kelvin = temperature_kelvin;
  w.joules = bits * kBoltzmann * temperature_kelvin * std::numbers::ln2;
  w.certification = certification;
  return w;
}

WorkCost resource_prep_cost_state(const DensityOperator& rho_ab, double mu,
                                  double temperature_kelvin) {
  check_mu(mu);
  return make_work_cost(prep_bits(rho_ab, mu), temperature_kelvin,
                        mu == 0.0 ? Certification::kExact : Certification::kCertifiedUpper);
}

WorkCost resource_eras_cost_state(const DensityOperator& rho_ab, double mu,
                                  double temperature_kelvin) {
  check_mu(mu);
  return make_work_cost(cond_hypothesis_entropy(mu, rho_ab), temperature_kelvin);
}

SumBoundReport sum_bound_check(const DensityOperator& rho_ab, double mu, const Tolerances& tol) {
  check_mu(mu);
  SumBoundReport r;
  r.sum_bits = cond_hypothesis_entropy(mu, rho_ab, tol) + prep_bits(rho_ab, mu);
  if (mu == 0.0) {
    r.lower_bound_bits = 0.0;
    r.pass = r.sum_bits >= -1e-9;
    return r;
  }
  r.certification = Certification::kCertifiedUpper;
  const double arg = 1.0 - mu / (1.0 - mu * mu);
  if (arg <= 0.0) {
    r.vacuous = true;
    r.lower_bound_bits = -kInfinity;
    r.pass = true;
    return r;
  }
  r.lower_bound_bits = std::log2(arg) - 2.0;
  r.pass = r.sum_bits >= r.lower_bound_bits - 1e-9;
  return r;
}

CostReport channel_costs(const QuantumChannel& n, double mu, double temperature_kelvin,
                         const ScanOptions& options) {
  check_mu(mu);
  if (options.n_samples < 0) throw ValidationError("n_samples must be nonnegative");
  if (!n.trace_preserving()) throw ValidationError("channel costs need a trace-preserving map");
  const Index d = n.in_dim();
  const std::size_t n_samples = static_cast<std::size_t>(options.n_samples);
  CostReport rep;
  rep.mu = mu;
  rep.s_min_channel = channel_min_entropy(n);

  // Preparation: pure inputs on R (x) A', state N(psi) conditioned on R.
  const auto prep_at = [&](const ComplexVector& psi) {
    const DensityOperator out = apply(n, pure_state(psi, {d, d}), 1);
    return prep_bits(DensityOperator(swap_bipartite(out.op())), mu);
  };
  std::vector<Scored> prep;
  for (const ScanInput& c : structured_inputs(n)) prep.push_back({prep_at(c.psi), c.name});
  const std::size_t n_prep_structured = prep.size();
  prep.resize(n_prep_structured + n_samples);
  parallel_for(options.n_samples, options.workers, [&](int i) {
    prep[n_prep_structured + static_cast<std::size_t>(i)] = {
        prep_at(haar_input(d, options.seed, i)), "haar sample " + std::to_string(i)};
  });

  // Erasure: inputs on A', Stinespring output conditioned on E.
  const IsometryExtension v = stinespring_isometry(n);
  const auto eras_at = [&](const DensityOperator& rho) {
    return eras_bits_or_nan(apply_isometry(v, rho), mu);
  };
  std::vector<Scored> eras;
  eras.push_back({eras_at(maximally_mixed(d)), "maximally mixed"});
  for (Index k = 0; k < d; ++k) {
    eras.push_back({eras_at(basis_state(d, k)), "basis state " + std::to_string(k)});
  }
  {
    const HermitianOperator omega = choi_top_marginal(n);
    eras.push_back({eras_at(DensityOperator(HermitianOperator::from_hermitian_part(
                        omega.matrix().transpose() / omega.trace()))),
                    "choi-derived marginal"});
  }
  const std::size_t n_eras_structured = eras.size();
  eras.resize(n_eras_structured + n_samples);
  std::vector<Scored> eras_pure(n_samples);
  parallel_for(options.n_samples, options.workers, [&](int i) {
    HaarSampler s(d, derive_seed(options.seed, static_cast<std::uint64_t>(i)));
    const std::size_t k = static_cast<std::size_t>(i);
    eras[n_eras_structured + k] = {eras_at(s.mixed_state(d)), "mixed sample " + std::to_string(i)};
    eras_pure[k] = {eras_at(pure_state(s.pure_vector(d))), "pure sample " + std::to_string(i)};
  });
  for (std::size_t k = 1; k < n_eras_structured - 1; ++k) eras_pure.push_back(eras[k]);

  const Scored best_prep = best_of(prep, rep.n_failed);
  const Scored best_eras = best_of(eras, rep.n_failed);
  int pure_failed = 0;
  rep.eras_pure_bits = best_of(eras_pure, pure_failed).bits;
  rep.n_inputs = static_cast<int>(prep.size() + eras.size());
  if (!std::isfinite(best_prep.bits) || !std::isfinite(best_eras.bits)) {
    throw SolverError("every input of the channel cost scan failed");
  }

  const Certification tag = Certification::kSampled;
  rep.prep_cost = make_work_cost(best_prep.bits, temperature_kelvin, tag);
  rep.eras_cost = make_work_cost(best_eras.bits, temperature_kelvin, tag);
  rep.attained_inputs = "prep: " + best_prep.name + "; eras: " + best_eras.name;
  rep.certification = mu == 0.0 ? to_string(tag)
                                 : to_string(tag) + "," + to_string(Certification::kCertifiedUpper);

  const double neg_s = -rep.s_min_channel;
  const double prep_limit =
      mu == 0.0 ? neg_s : -smooth_channel_min_entropy_lower_bound(mu, n).value;
  rep.upper_bounds_hold = best_prep.bits <= prep_limit + 1e-6 &&
                          best_eras.bits <= neg_s + std::log2(1.0 - mu) + 1e-6;
  rep.zero_error_identity_holds =
      mu > 0.0 || (std::abs(best_prep.bits - neg_s) <= 0.02 && best_prep.bits <= neg_s + 1e-6 &&
                   std::abs(best_eras.bits - neg_s) <= 0.02 && best_eras.bits <= neg_s + 1e-6);
  return rep;
}

std::string to_json(const CostReport& report) {
  const nlohmann::ordered_json j = {
      {"mu", report.mu},
      {"temperature_kelvin", report.prep_cost.temperature_kelvin},
      {"prep_bits", report.prep_cost.bits},
      {"eras_bits", report.eras_cost.bits},
      {"prep_joules", report.prep_cost.joules},
      {"eras_joules", report.eras_cost.joules},
      {"s_min_channel", report.s_min_channel},
      {"certification", report.certification},
  };
  return j.dump();
}

AdversarialBound adversarial_erasure_bound(const QuantumChannel& n, double eps, double delta,
                                           double temperature_kelvin) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in [0, 1)");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  const double lower =
      eps > 0.0 ? smooth_channel_min_entropy_lower_bound(eps, n).value : channel_min_entropy(n);
  AdversarialBound b;
  b.bound = make_work_cost(-lower + delta, temperature_kelvin,
                           eps > 0.0 ? Certification::kCertifiedUpper : Certification::kExact);
  const double raw = 1.0 - std::sqrt(std::exp2(-delta / 2.0) + 12.0 * eps);
  b.probability_valid = raw >= 0.0;
  b.probability = std::clamp(raw, 0.0, 1.0);
  return b;
}

ReconciliationReport reconciliation_report(const QuantumChannel& n, double eps, double delta,
                                           double temperature_kelvin,
                                           const ScanOptions& options) {
  ReconciliationReport r;
  r.adversarial_bits = adversarial_erasure_bound(n, eps, delta, temperature_kelvin).bound.bits;
  r.zero_error_bits = -channel_min_entropy(n);
  r.sampled_eras_bits = channel_costs(n, 0.0, temperature_kelvin, options).eras_cost.bits;
  r.delta = delta;
  r.pass = r.adversarial_bits <= r.zero_error_bits + delta + 1e-9;
  return r;
}

WorkExtraction work_extraction_ledger(int d_qubits, double temperature_kelvin) {
  if (d_qubits < 0) throw ValidationError("number of qubits must be nonnegative");
  const double d = static_cast<double>(d_qubits);
  return {make_work_cost(-d, temperature_kelvin), make_work_cost(d, temperature_kelvin)};
}

}  // namespace qdyn
