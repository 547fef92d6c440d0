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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "cli.hpp"
#include "qdyn/error.hpp"

using namespace qdyn;
using namespace qdyn::cli;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qdyn");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json run_json(std::vector<std::string> args, int expected_code = kExitOk) {
  args.insert(args.begin(), "--json");
  const Run r = run_cli(args);
  REQUIRE_MESSAGE(r.code == expected_code, r.err);
  return nlohmann::json::parse(r.out);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qdyn_test_cli_" + name);
}

// Closed forms of -S_min for the qubit families, written out independently.
double neg_smin_depolarizing(double p) { return std::log2(2.0 * std::max(1.0 - p, p / 3.0)); }
double neg_smin_dephasing1(double p) { return std::log2(2.0 - p); }
double neg_smin_dephasing2(double p) { return std::log2(2.0 * std::max(1.0 - p, p)); }

}  // namespace

TEST_CASE("sweep rows cover the grid in p order with closed-form values") {
  const std::vector<ChannelFamily> families = {ChannelFamily::kDepolarizing,
                                               ChannelFamily::kDephasing1,
                                               ChannelFamily::kDephasing2};
  const std::vector<SweepRow> rows = sweep(families, 21);
  REQUIRE(rows.size() == 63);
  CHECK(rows.front().p == 0.0);
  CHECK(rows.back().p == 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].p <= rows[i].p);
  for (const SweepRow& r : rows) {
    CHECK(r.neg_s_min == -r.s_min);
    double expected = 0.0;
    if (r.channel_family == "depolarizing") expected = neg_smin_depolarizing(r.p);
    if (r.channel_family == "dephasing1") expected = neg_smin_dephasing1(r.p);
    if (r.channel_family == "dephasing2") expected = neg_smin_dephasing2(r.p);
    CHECK(r.neg_s_min == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sweep endpoints and symmetry") {
  const std::vector<SweepRow> rows = sweep(
      {ChannelFamily::kDepolarizing, ChannelFamily::kDephasing1, ChannelFamily::kDephasing2}, 5);
  auto find = [&](const std::string& family, double p) {
    for (const SweepRow& r : rows) {
      if (r.channel_family == family && std::abs(r.p - p) < 1e-12) return r.neg_s_min;
    }
    FAIL("missing row");
    return 0.0;
  };
  CHECK(find("depolarizing", 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(find("depolarizing", 0.75) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(find("dephasing1", 1.0)) < 1e-12);
  for (double p : {0.0, 0.25, 0.5}) {
    CHECK(find("dephasing2", p) == doctest::Approx(find("dephasing2", 1.0 - p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sweep({ChannelFamily::kDepolarizing}, 1), ValidationError);
}

TEST_CASE("CSV is fixed precision and byte-identical across runs") {
  const std::vector<ChannelFamily> f = {ChannelFamily::kDepolarizing, ChannelFamily::kDephasing2};
  const std::string a = to_csv(sweep(f, 11));
  const std::string b = to_csv(sweep(f, 11));
  CHECK(a == b);
  CHECK(a.rfind("family,p,s_min,neg_s_min\n", 0) == 0);
  CHECK(a.find("depolarizing,0.000000000000,-1.000000000000,1.000000000000\n") !=
        std::string::npos);
  CHECK(a.find("-0.000000000000") == std::string::npos);
  CHECK(std::count(a.begin(), a.end(), '\n') == 23);

  const Run x = run_cli({"sweep", "--p-steps", "11"});
  const Run y = run_cli({"sweep", "--p-steps", "11"});
  CHECK(x.code == kExitOk);
  CHECK(x.out == y.out);
}

TEST_CASE("sweep writes CSV and SVG files, unwritable paths exit 4") {
  const std::filesystem::path csv = temp_path("sweep.csv");
  const std::filesystem::path svg = temp_path("sweep.svg");
  const Run r = run_cli({"sweep", "--out", csv.string(), "--svg", svg.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("certification = exact") != std::string::npos);
  std::ifstream in(svg);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  CHECK(text.rfind("<svg", 0) == 0);
  std::size_t polylines = 0;
  for (std::size_t pos = text.find("<polyline"); pos != std::string::npos;
       pos = text.find("<polyline", pos + 1)) {
    ++polylines;
  }
  CHECK(polylines == 3);
  std::filesystem::remove(csv);
  std::filesystem::remove(svg);

  CHECK(run_cli({"sweep", "--out", "/nonexistent-dir/x.csv"}).code == kExitIoFailure);
  CHECK(run_cli({"sweep", "--p-steps", "1"}).code == kExitInvalidInput);
  CHECK(run_cli({"sweep", "--families", "depolarizing,nope"}).code == kExitInvalidInput);
}

TEST_CASE("channel specs parse from JSON") {
  const QuantumChannel d = channel_from_json({{"family", "depolarizing"}, {"p", 0.75}});
  CHECK(channel_min_entropy(d) == doctest::Approx(1.0).epsilon(1e-12));

  const nlohmann::json x = {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}};
  const QuantumChannel u = channel_from_json({{"family", "unitary"}, {"unitary", x}});
  CHECK(channel_min_entropy(u) == doctest::Approx(-1.0).epsilon(1e-12));

  const QuantumChannel pure = channel_from_json({{"family", "replacer"}, {"omega", "pure"}});
  CHECK(std::abs(channel_min_entropy(pure)) < 1e-12);

  const nlohmann::json not_unitary = {{{1, 0}, {1, 0}}, {{0, 0}, {1, 0}}};
  CHECK_THROWS_AS(channel_from_json({{"family", "unitary"}, {"unitary", not_unitary}}),
                  ValidationError);
  CHECK_THROWS_AS(channel_from_json({{"family", "depolarizing"}, {"p", "x"}}), ValidationError);
  CHECK_THROWS_AS(channel_from_json({{"p", 0.1}}), ValidationError);
  CHECK_THROWS_AS(matrix_from_json({{1, 2}}), ValidationError);
  CHECK_THROWS_AS(matrix_from_json({{{1, 0}}, {{1, 0}, {0, 0}}}), ValidationError);
}

TEST_CASE("spec files are read from disk") {
  const std::filesystem::path spec = temp_path("spec.json");
  {
    std::ofstream f(spec);
    f << R"({"family": "dephasing2", "p": 0.5})";
  }
  const nlohmann::json j = run_json({"entropy", "--spec", spec.string(), "--n", "10"});
  CHECK(j["s_min"].get<double>() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  {
    std::ofstream f(spec);
    f << "{not json";
  }
  CHECK(run_cli({"entropy", "--spec", spec.string()}).code == kExitInvalidInput);
  std::filesystem::remove(spec);
  CHECK(run_cli({"entropy", "--spec", spec.string()}).code == kExitIoFailure);
}

TEST_CASE("entropy command examples") {
  const nlohmann::json d = run_json({"entropy", "--family", "depolarizing", "--p", "0.75"});
  CHECK(d["s_min"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d["seed"].get<int>() == 42);
  CHECK(d["tags"]["s_min"] == "exact");
  CHECK(d["tags"]["scan.value"] == "sampled");

  const nlohmann::json u = run_json({"entropy", "--family", "unitary", "--n", "20"});
  CHECK(u["s_min"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(u["ppt"] == false);

  const nlohmann::json r =
      run_json({"entropy", "--family", "replacer", "--omega", "maximally-mixed", "--n", "20"});
  CHECK(r["s_min"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r["ppt"] == true);

  CHECK(run_cli({"entropy", "--family", "bogus"}).code == kExitInvalidInput);
  CHECK(run_cli({"entropy"}).code == kExitInvalidInput);
  CHECK(run_cli({"entropy", "--family", "depolarizing", "--p", "1.5"}).code == kExitInvalidInput);
  CHECK(run_cli({"--no-such-flag", "entropy"}).code == kExitInvalidInput);
  CHECK(run_cli({}).code == kExitInvalidInput);
}

TEST_CASE("text output tags every number") {
  const Run r = run_cli({"entropy", "--family", "dephasing1", "--p", "0.3", "--n", "10"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  int numeric = 0;
  while (std::getline(lines, line)) {
    const std::string value = line.substr(line.find(" = ") + 3);
    const bool is_number = !value.empty() && (std::isdigit(static_cast<unsigned char>(value[0])) ||
                                              value[0] == '-');
    if (!is_number) continue;
    ++numeric;
    const bool tagged = line.find("[exact]") != std::string::npos ||
                        line.find("[sampled]") != std::string::npos ||
                        line.find("[certified-lower]") != std::string::npos ||
                        line.find("[certified-upper]") != std::string::npos;
    CHECK_MESSAGE(tagged, line);
  }
  CHECK(numeric > 5);
}

TEST_CASE("decouple command examples") {
  const nlohmann::json c = run_json({"decouple", "--mode", "channel", "--family", "replacer",
                                     "--omega", "maximally-mixed", "--n", "5"});
  CHECK(std::abs(c["report"]["mean_lhs"].get<double>()) < 1e-7);
  CHECK(c["report"]["pass"] == true);
  CHECK(c["report"].size() == 6);

  const nlohmann::json s = run_json({"decouple", "--mode", "states", "--n", "40"});
  CHECK(s["report"]["mean_lhs"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(s["report"]["bound_rhs"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s["report"]["pass"] == true);
  CHECK(s["tags"]["report.mean_lhs"] == "sampled");

  const nlohmann::json sub =
      run_json({"decouple", "--mode", "subsystem", "--family", "depolarizing", "--p", "0.9"});
  CHECK(sub["report"]["a1_dim"].get<int>() >= 1);
  CHECK(sub["erasure"]["consistent"] == true);

  CHECK(run_cli({"decouple", "--mode", "nope"}).code == kExitInvalidInput);
  CHECK(run_cli({"decouple", "--mode", "states", "--input", "nope"}).code == kExitInvalidInput);
  CHECK(run_cli({"decouple", "--mode", "subsystem", "--family", "depolarizing", "--p", "0.9",
                 "--delta-prime", "0.01", "--epsilon", "0.1"})
            .code == kExitInvalidInput);
}

TEST_CASE("decouple output is deterministic in seed and worker count") {
  const std::vector<std::string> args = {"decouple", "--mode", "states", "--input", "random",
                                         "--dim", "4", "--map", "partial-trace", "--n", "32"};
  std::vector<std::string> four = args;
  four.insert(four.begin(), {"--workers", "4"});
  const nlohmann::json a = run_json(args);
  const nlohmann::json b = run_json(four);
  CHECK(a["report"] == b["report"]);
  std::vector<std::string> other = args;
  other.insert(other.begin(), {"--seed", "7"});
  CHECK(run_json(other)["seed"].get<int>() == 7);
}

TEST_CASE("costs command examples") {
  const nlohmann::json id = run_json({"costs", "--family", "unitary", "--p", "0", "--n", "20"});
  CHECK(id["report"]["prep_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(id["report"]["eras_bits"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(id["zero_error_identity_holds"] == true);
  CHECK(id["report"].size() == 8);

  const nlohmann::json rep =
      run_json({"costs", "--family", "replacer", "--omega", "maximally-mixed", "--n", "20"});
  CHECK(rep["report"]["prep_bits"].get<double>() == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(rep["report"]["eras_bits"].get<double>() == doctest::Approx(-1.0).epsilon(1e-9));

  const nlohmann::json dep = run_json(
      {"costs", "--family", "depolarizing", "--p", "0.5", "--n", "20", "--temperature", "1"});
  CHECK(std::abs(dep["report"]["prep_bits"].get<double>()) < 1e-9);
  CHECK(std::abs(dep["report"]["eras_bits"].get<double>()) < 1e-9);
  CHECK(dep["report"]["temperature_kelvin"].get<double>() == 1.0);

  const nlohmann::json adv = run_json(
      {"costs", "--family", "depolarizing", "--p", "0.3", "--n", "10", "--delta", "2"});
  CHECK(adv["adversarial"]["reconciled"] == true);

  CHECK(run_cli({"costs", "--family", "depolarizing", "--mu", "1"}).code == kExitInvalidInput);
  CHECK(run_cli({"costs", "--family", "depolarizing", "--temperature", "-3"}).code ==
        kExitInvalidInput);
}

TEST_CASE("check passes, is deterministic, and catches an injected fault") {
  const Run a = run_cli({"check"});
  const Run b = run_cli({"check"});
  CHECK_MESSAGE(a.code == kExitOk, a.out);
  CHECK(a.out == b.out);
  CHECK(a.out.find("FAIL") == std::string::npos);

  const Run m = run_cli({"check", "--mutate", "d_max_sign"});
  CHECK(m.code == kExitCheckFailed);
  CHECK(m.out.find("FAIL entropies.d_max_nonnegative_on_states") != std::string::npos);
  CHECK(run_cli({"check", "--mutate", "other"}).code == kExitInvalidInput);
}
