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
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "qdyn/decoupling.hpp"
#include "qdyn/dynamical.hpp"
#include "qdyn/error.hpp"

namespace qdyn::cli {
namespace {

struct GlobalFlags {
  std::uint64_t seed = 42;
  int workers = 1;
  std::optional<double> tolerance;
  bool json = false;
};

/// A report body plus the certification tag of each numeric leaf, keyed by
/// its dotted path. Untagged numbers are exact.
struct Output {
  nlohmann::json body = nlohmann::json::object();
  std::map<std::string, std::string> tags;
};

std::string format_number(const nlohmann::json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  char buf[40];
  double d = v.get<double>();
  if (d == 0.0) d = 0.0;  // drop the sign of -0
  std::snprintf(buf, sizeof(buf), "%.12g", d);
  return buf;
}

void print_text(std::ostream& out, const nlohmann::json& j, const std::string& prefix,
                const std::map<std::string, std::string>& tags) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const nlohmann::json& v = it.value();
    if (v.is_object()) {
      print_text(out, v, key, tags);
    } else if (v.is_number()) {
      const auto tag = tags.find(key);
      out << key << " = " << format_number(v) << " ["
          << (tag == tags.end() ? to_string(Certification::kExact) : tag->second) << "]\n";
    } else if (v.is_string()) {
      out << key << " = " << v.get<std::string>() << "\n";
    } else {
      out << key << " = " << v.dump() << "\n";
    }
  }
}

/// Text: one "key = value [tag]" line per leaf. JSON: the body with a
/// "tags" object mapping every numeric path to its certification.
void emit(std::ostream& out, const Output& o, bool json) {
  if (!json) {
    print_text(out, o.body, "", o.tags);
    return;
  }
  nlohmann::json doc = o.body;
  nlohmann::json tags = nlohmann::json::object();
  std::function<void(const nlohmann::json&, const std::string&)> walk =
      [&](const nlohmann::json& j, const std::string& prefix) {
        for (auto it = j.begin(); it != j.end(); ++it) {
          const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
          if (it.value().is_object()) {
            walk(it.value(), key);
          } else if (it.value().is_number()) {
            const auto tag = o.tags.find(key);
            tags[key] = tag == o.tags.end() ? to_string(Certification::kExact) : tag->second;
          }
        }
      };
  walk(o.body, "");
  doc["tags"] = tags;
  out << doc.dump(2) << "\n";
}

Tolerances tolerances(const GlobalFlags& g) {
  Tolerances tol = kTol;
  if (g.tolerance) {
    if (!(*g.tolerance > 0.0 && *g.tolerance < 1.0)) {
      throw ValidationError("--tolerance must lie in (0, 1)");
    }
    tol.sdp_relative_gap = *g.tolerance;
    tol.sdp_feasibility = *g.tolerance;
  }
  return tol;
}

ScanOptions scan_options(const GlobalFlags& g, int n_samples) {
  if (n_samples < 0) throw ValidationError("--n must be nonnegative");
  if (g.workers < 1) throw ValidationError("--workers must be at least 1");
  ScanOptions so;
  so.n_samples = n_samples;
  so.seed = g.seed;
  so.workers = g.workers;
  so.tol = tolerances(g);
  return so;
}

void add_channel_flags(CLI::App* cmd, ChannelArgs& args) {
  cmd->add_option("--family", args.family,
                  "depolarizing, dephasing1, dephasing2, replacer, unitary or povm");
  cmd->add_option("--p", args.p, "family parameter in [0, 1]");
  cmd->add_option("--omega", args.omega,
                  "replacer output: maximally-mixed, pure or a JSON matrix");
  cmd->add_option("--unitary", args.unitary, "JSON matrix of [re, im] pairs");
  cmd->add_option("--spec", args.spec_path, "JSON channel spec file");
}

// ---------------------------------------------------------------------------
// entropy

struct EntropyArgs {
  ChannelArgs channel;
  int n = 200;
};

int cmd_entropy(const GlobalFlags& g, const EntropyArgs& a, std::ostream& out) {
  const QuantumChannel n = build_channel(a.channel);
  const ChannelEntropyReport r = channel_min_entropy_scan(n, scan_options(g, a.n));
  Output o;
  o.body["seed"] = g.seed;
  o.body["channel"] = describe_channel(a.channel);
  o.body["s_min"] = r.s_min;
  o.body["neg_s_min"] = -r.s_min;
  o.body["lambda_max"] = r.lambda_max;
  o.body["sdp"] = {{"value", r.sdp_value}, {"duality_gap", r.sdp_gap}, {"agrees", r.sdp_agrees}};
  o.body["scan"] = {{"value", r.inf_scan_value},
                    {"argmin", r.scan_argmin},
                    {"n_inputs", r.n_scan_samples},
                    {"n_pruned", r.n_pruned},
                    {"n_failed", r.n_failed},
                    {"consistent", r.scan_consistent}};
  o.body["ppt"] = is_ppt(n);
  o.tags["sdp.duality_gap"] = to_string(Certification::kCertifiedUpper);
  o.tags["scan.value"] = to_string(Certification::kSampled);
  emit(out, o, g.json);
  return r.sdp_agrees && r.scan_consistent ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string families = "depolarizing,dephasing1,dephasing2";
  int p_steps = 21;
  std::string out_path = "-";
  std::string svg_path;
};

std::vector<ChannelFamily> parse_families(const std::string& list) {
  std::vector<ChannelFamily> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::optional<ChannelFamily> f = parse_channel_family(item);
    if (!f) throw ValidationError("unknown channel family '" + item + "'");
    if (*f == ChannelFamily::kPovm) throw ValidationError("povm has no one-parameter sweep");
    out.push_back(*f);
  }
  return out;
}

int cmd_sweep(const GlobalFlags& g, const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<SweepRow> rows = sweep(parse_families(a.families), a.p_steps);
  const std::string csv = to_csv(rows);
  if (a.out_path == "-") {
    out << csv;
  } else {
    write_file(a.out_path, csv);
  }
  if (!a.svg_path.empty()) write_file(a.svg_path, to_svg(rows));

  // Every CSV value is a closed-form evaluation; the tag travels in the
  // summary so the CSV columns stay fixed.
  Output o;
  o.body["rows"] = rows.size();
  o.body["p_steps"] = a.p_steps;
  o.body["out"] = a.out_path == "-" ? "stdout" : a.out_path;
  if (!a.svg_path.empty()) o.body["svg"] = a.svg_path;
  o.body["certification"] = to_string(Certification::kExact);
  emit(a.out_path == "-" ? err : out, o, g.json);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// decouple

struct DecoupleArgs {
  std::string mode = "states";
  ChannelArgs channel;
  std::string input = "bell";
  std::string map = "identity";
  Index dim = 2;
  int copies = 1;
  int n = 100;
  double epsilon = 0.0;
  double delta_prime = 0.2;
  int max_tries = 50;
  std::optional<double> temperature;
};

/// Traces out the last qubit of a system of even dimension d.
QuantumChannel trace_last_qubit(Index d) {
  if (d % 2 != 0) throw ValidationError("--map partial-trace needs an even dimension");
  std::vector<ComplexMatrix> kraus;
  for (Index j = 0; j < 2; ++j) {
    ComplexMatrix bra = ComplexMatrix::Zero(1, 2);
    bra(0, j) = 1.0;
    kraus.push_back(kron(ComplexMatrix::Identity(d / 2, d / 2), bra));
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel decoupling_map(const std::string& name, Index d) {
  if (name == "identity") return identity_channel(d);
  if (name == "partial-trace") return trace_last_qubit(d);
  throw ValidationError("unknown --map '" + name + "'");
}

/// (1_R (x) V)|Phi> for the Stinespring isometry V, dims {|A|, |A'|, |E|}.
DensityOperator stinespring_purification(const QuantumChannel& n) {
  const IsometryExtension v = stinespring_isometry(n);
  const Index d = n.in_dim();
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  const ComplexMatrix full = kron(ComplexMatrix::Identity(d, d), v.isometry);
  return pure_state(full * phi, {d, v.out_dim, v.env_dim});
}

Output decoupling_output(const GlobalFlags& g, const std::string& mode, const DecouplingReport& r) {
  Output o;
  o.body["seed"] = g.seed;
  o.body["mode"] = mode;
  o.body["report"] = nlohmann::json::parse(to_json(r));
  o.body["n_failed"] = r.n_failed;
  o.body["max_duality_gap"] = r.max_duality_gap;
  o.tags["report.mean_lhs"] = to_string(Certification::kSampled);
  o.tags["report.std_err"] = to_string(Certification::kSampled);
  o.tags["report.bound_rhs"] = to_string(r.epsilon > 0.0 ? Certification::kCertifiedUpper
                                                         : Certification::kExact);
  o.tags["max_duality_gap"] = to_string(Certification::kCertifiedUpper);
  return o;
}

int decoupling_exit(const DecouplingReport& r) {
  const int attempted = r.n_samples + r.n_failed;
  if (r.n_failed * 10 > attempted) return kExitSolverFailure;
  return r.pass ? kExitOk : kExitCheckFailed;
}

int cmd_decouple(const GlobalFlags& g, const DecoupleArgs& a, std::ostream& out) {
  if (g.workers < 1) throw ValidationError("--workers must be at least 1");
  if (a.mode == "states") {
    if (a.dim < 1) throw ValidationError("--dim must be positive");
    DensityOperator phi;
    if (a.input == "bell") {
      phi = maximally_entangled(a.dim);
    } else if (a.input == "random") {
      HaarSampler draw(a.dim * a.dim, derive_seed(g.seed, 1));
      phi = pure_state(draw.pure_vector(a.dim * a.dim), {a.dim, a.dim});
    } else {
      throw ValidationError("unknown --input '" + a.input + "'");
    }
    HaarSampler s(a.dim, g.seed);
    const DecouplingReport r =
        decouple_states_mc(phi, decoupling_map(a.map, a.dim), a.n, a.epsilon, s, g.workers);
    emit(out, decoupling_output(g, a.mode, r), g.json);
    return decoupling_exit(r);
  }
  if (a.mode == "channel") {
    if (a.copies < 1) throw ValidationError("--copies must be at least 1");
    const QuantumChannel one = build_channel(a.channel);
    QuantumChannel n = one;
    for (int k = 1; k < a.copies; ++k) n = tensor_channels(n, one);
    HaarSampler s(n.out_dim(), g.seed);
    const DecouplingReport r = decouple_channel_mc(n, decoupling_map(a.map, n.out_dim()), a.n,
                                                   a.epsilon, s, g.workers);
    Output o = decoupling_output(g, a.mode, r);
    o.body["channel"] = describe_channel(a.channel);
    o.body["copies"] = a.copies;
    emit(out, o, g.json);
    return decoupling_exit(r);
  }
  if (a.mode == "subsystem") {
    const QuantumChannel n = build_channel(a.channel);
    const DensityOperator phi = stinespring_purification(n);
    HaarSampler s(n.out_dim(), g.seed);
    const double temperature = a.temperature ? *a.temperature : default_temperature();
    const ErasureProtocolReport e =
        erasure_protocol_work(phi, a.delta_prime, a.epsilon, temperature, s, a.max_tries);
    const SubsystemSearchResult& r = e.search;
    Output o;
    o.body["seed"] = g.seed;
    o.body["mode"] = a.mode;
    o.body["channel"] = describe_channel(a.channel);
    o.body["report"] = {{"a1_dim", r.a1_dim},
                        {"trace_distance_to_product", r.trace_distance_to_product},
                        {"delta_prime", r.delta_prime},
                        {"epsilon", a.epsilon},
                        {"guaranteed_log_a1", r.guaranteed_log_a1},
                        {"meets_guarantee", r.meets_guarantee},
                        {"tries", r.tries}};
    o.body["erasure"] = {{"temperature_kelvin", temperature},
                         {"protocol_bits", e.protocol.bits},
                         {"protocol_joules", e.protocol.joules},
                         {"entropy_bound_bits", e.entropy_bound.bits},
                         {"entropy_bound_joules", e.entropy_bound.joules},
                         {"consistent", e.consistent}};
    o.tags["report.trace_distance_to_product"] = to_string(Certification::kSampled);
    o.tags["report.a1_dim"] = to_string(Certification::kSampled);
    o.tags["erasure.protocol_bits"] = to_string(Certification::kSampled);
    o.tags["erasure.protocol_joules"] = to_string(Certification::kSampled);
    emit(out, o, g.json);
    return e.consistent ? kExitOk : kExitCheckFailed;
  }
  throw ValidationError("unknown --mode '" + a.mode + "'");
}

// ---------------------------------------------------------------------------
// costs

struct CostsArgs {
  ChannelArgs channel;
  double mu = 0.0;
  std::optional<double> temperature;
  int n = 200;
  std::optional<double> delta;
  double epsilon = 0.0;
};

int cmd_costs(const GlobalFlags& g, const CostsArgs& a, std::ostream& out) {
  if (!(a.mu >= 0.0 && a.mu < 1.0)) throw ValidationError("--mu must lie in [0, 1)");
  const QuantumChannel n = build_channel(a.channel);
  const double temperature = a.temperature ? *a.temperature : default_temperature();
  const CostReport r = channel_costs(n, a.mu, temperature, scan_options(g, a.n));
  Output o;
  o.body["seed"] = g.seed;
  o.body["channel"] = describe_channel(a.channel);
  o.body["report"] = nlohmann::json::parse(to_json(r));
  o.body["eras_pure_bits"] = r.eras_pure_bits;
  o.body["attained_inputs"] = r.attained_inputs;
  o.body["n_inputs"] = r.n_inputs;
  o.body["n_failed"] = r.n_failed;
  o.body["upper_bounds_hold"] = r.upper_bounds_hold;
  if (a.mu == 0.0) o.body["zero_error_identity_holds"] = r.zero_error_identity_holds;
  o.tags["report.prep_bits"] = to_string(r.prep_cost.certification);
  o.tags["report.prep_joules"] = to_string(r.prep_cost.certification);
  o.tags["report.eras_bits"] = to_string(r.eras_cost.certification);
  o.tags["report.eras_joules"] = to_string(r.eras_cost.certification);
  o.tags["eras_pure_bits"] = to_string(Certification::kSampled);

  bool ok = r.upper_bounds_hold && (a.mu > 0.0 || r.zero_error_identity_holds);
  if (a.delta) {
    const AdversarialBound b = adversarial_erasure_bound(n, a.epsilon, *a.delta, temperature);
    const ReconciliationReport rec =
        reconciliation_report(n, a.epsilon, *a.delta, temperature, scan_options(g, a.n));
    o.body["adversarial"] = {{"epsilon", a.epsilon},
                             {"delta", *a.delta},
                             {"bits", b.bound.bits},
                             {"joules", b.bound.joules},
                             {"success_probability", b.probability},
                             {"probability_valid", b.probability_valid},
                             {"zero_error_bits", rec.zero_error_bits},
                             {"reconciled", rec.pass}};
    o.tags["adversarial.bits"] = to_string(b.bound.certification);
    o.tags["adversarial.joules"] = to_string(b.bound.certification);
    o.tags["adversarial.success_probability"] = to_string(Certification::kCertifiedLower);
    ok = ok && rec.pass;
  }
  emit(out, o, g.json);
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const GlobalFlags& g, const std::string& mutate, std::ostream& out) {
  if (g.workers < 1) throw ValidationError("--workers must be at least 1");
  CheckOptions options;
  options.seed = g.seed;
  options.workers = g.workers;
  options.mutate = mutate;
  const std::vector<InvariantResult> results = run_invariants(options);
  int failed = 0;
  for (const InvariantResult& r : results) failed += r.pass ? 0 : 1;
  if (g.json) {
    nlohmann::json doc = {{"seed", g.seed}, {"passed", results.size() - failed}, {"failed", failed}};
    nlohmann::json list = nlohmann::json::array();
    for (const InvariantResult& r : results) {
      list.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    doc["invariants"] = list;
    out << doc.dump(2) << "\n";
  } else {
    out << "seed " << g.seed << "\n";
    for (const InvariantResult& r : results) out << format_ledger_line(r) << "\n";
    out << results.size() - failed << " passed, " << failed << " failed\n";
  }
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qdyn: one-shot entropies, decoupling and thermodynamic costs of quantum channels",
               "qdyn"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads")->capture_default_str();
  app.add_option("--tolerance", g.tolerance, "SDP relative gap and feasibility tolerance");
  app.add_flag("--json", g.json, "machine-readable output");

  EntropyArgs entropy;
  CLI::App* c_entropy = app.add_subcommand("entropy", "dynamical min-entropy of a channel");
  add_channel_flags(c_entropy, entropy.channel);
  c_entropy->add_option("--n", entropy.n, "random inputs in the scan")->capture_default_str();

  SweepArgs sw;
  CLI::App* c_sweep = app.add_subcommand("sweep", "closed-form -S_min over p for qubit families");
  c_sweep->add_option("--families", sw.families, "comma-separated families")->capture_default_str();
  c_sweep->add_option("--p-steps", sw.p_steps, "grid points on [0, 1]")->capture_default_str();
  c_sweep->add_option("--out", sw.out_path, "CSV path, - for stdout")->capture_default_str();
  c_sweep->add_option("--svg", sw.svg_path, "SVG plot path");

  DecoupleArgs dec;
  CLI::App* c_dec = app.add_subcommand("decouple", "Monte Carlo decoupling experiments");
  c_dec->add_option("--mode", dec.mode, "states, channel or subsystem")->capture_default_str();
  add_channel_flags(c_dec, dec.channel);
  c_dec->add_option("--input", dec.input, "states mode input: bell or random")
      ->capture_default_str();
  c_dec->add_option("--dim", dec.dim, "states mode dimension of R and A")->capture_default_str();
  c_dec->add_option("--map", dec.map, "decoupling map: identity or partial-trace")
      ->capture_default_str();
  c_dec->add_option("--copies", dec.copies, "channel mode tensor copies")->capture_default_str();
  c_dec->add_option("--n", dec.n, "Haar samples")->capture_default_str();
  c_dec->add_option("--epsilon", dec.epsilon, "smoothing parameter")->capture_default_str();
  c_dec->add_option("--delta-prime", dec.delta_prime, "subsystem mode distance target")
      ->capture_default_str();
  c_dec->add_option("--max-tries", dec.max_tries, "subsystem mode unitaries per split")
      ->capture_default_str();
  c_dec->add_option("--temperature", dec.temperature, "kelvin, subsystem mode");

  CostsArgs costs;
  CLI::App* c_costs = app.add_subcommand("costs", "preparation and erasure work of a channel");
  add_channel_flags(c_costs, costs.channel);
  c_costs->add_option("--mu", costs.mu, "error probability in [0, 1)")->capture_default_str();
  c_costs->add_option("--temperature", costs.temperature, "kelvin");
  c_costs->add_option("--n", costs.n, "random inputs per scan")->capture_default_str();
  c_costs->add_option("--delta", costs.delta, "adversarial erasure slack in bits");
  c_costs->add_option("--epsilon", costs.epsilon, "adversarial smoothing parameter")
      ->capture_default_str();

  std::string mutate;
  CLI::App* c_check = app.add_subcommand("check", "run the invariant suite");
  c_check->add_option("--mutate", mutate, "inject a fault: d_max_sign");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (c_entropy->parsed()) return cmd_entropy(g, entropy, out);
    if (c_sweep->parsed()) return cmd_sweep(g, sw, out, err);
    if (c_dec->parsed()) return cmd_decouple(g, dec, out);
    if (c_costs->parsed()) return cmd_costs(g, costs, out);
    if (c_check->parsed()) return cmd_check(g, mutate, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoFailure;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  return kExitInvalidInput;
}

}  // namespace qdyn::cli
