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

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qdyn/error.hpp"

namespace qdyn::cli {
namespace {

ChannelFamily family_or_throw(const std::string& name) {
  const std::optional<ChannelFamily> f = parse_channel_family(name);
  if (!f) throw ValidationError("unknown channel family '" + name + "'");
  return *f;
}

nlohmann::json parse_json_or_throw(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

/// omega given as a keyword or a matrix.
ComplexMatrix omega_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "maximally-mixed") return maximally_mixed(2).matrix();
    if (name == "pure") return basis_state(2, 0).matrix();
    throw ValidationError("unknown omega '" + name + "'");
  }
  return matrix_from_json(j);
}

}  // namespace

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a nonempty array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  ComplexMatrix m;
  for (Index r = 0; r < rows; ++r) {
    const nlohmann::json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.empty()) throw ValidationError("matrix rows must be arrays");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m = ComplexMatrix::Zero(rows, cols);
    }
    if (static_cast<Index>(row.size()) != cols) throw ValidationError("ragged matrix rows");
    for (Index c = 0; c < cols; ++c) {
      const nlohmann::json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ValidationError("matrix entries must be [re, im] pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

QuantumChannel channel_from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string()) {
    throw ValidationError("channel spec needs a string field 'family'");
  }
  const ChannelFamily family = family_or_throw(spec["family"].get<std::string>());
  double p = 0.0;
  if (spec.contains("p")) {
    if (!spec["p"].is_number()) throw ValidationError("'p' must be a number");
    p = spec["p"].get<double>();
  }
  ChannelSpec cs;
  cs.family = family;
  cs.p = p;
  if (spec.contains("dims")) {
    const nlohmann::json& d = spec["dims"];
    if (d.is_number_integer()) {
      cs.in_dim = d.get<Index>();
    } else if (d.is_array() && !d.empty() && d[0].is_number_integer()) {
      cs.in_dim = d[0].get<Index>();
    } else {
      throw ValidationError("'dims' must be an integer or an array of integers");
    }
  }
  switch (family) {
    case ChannelFamily::kReplacer:
      if (!spec.contains("omega")) return qubit_family_member(family, p);
      cs.omega = omega_from_json(spec["omega"]);
      break;
    case ChannelFamily::kUnitary:
      if (!spec.contains("unitary")) return qubit_family_member(family, p);
      cs.unitary = matrix_from_json(spec["unitary"]);
      if (!is_unitary(*cs.unitary)) throw ValidationError("'unitary' is not unitary");
      break;
    case ChannelFamily::kPovm:
      if (!spec.contains("povm") || !spec["povm"].is_array()) {
        throw ValidationError("povm family needs an array 'povm'");
      }
      for (const nlohmann::json& e : spec["povm"]) cs.povm.push_back(matrix_from_json(e));
      break;
    default:
      break;
  }
  return make_named_channel(cs);
}

nlohmann::json describe_channel(const ChannelArgs& args) {
  if (!args.spec_path.empty()) return {{"spec_file", args.spec_path}};
  nlohmann::json j = {{"family", args.family}};
  if (args.p) j["p"] = *args.p;
  if (!args.omega.empty()) j["omega"] = args.omega;
  if (!args.unitary.empty()) j["unitary"] = args.unitary;
  return j;
}

QuantumChannel build_channel(const ChannelArgs& args) {
  if (!args.spec_path.empty()) {
    std::ifstream in(args.spec_path);
    if (!in) throw IoError("cannot read spec file '" + args.spec_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return channel_from_json(parse_json_or_throw(buf.str(), "spec file"));
  }
  if (args.family.empty()) throw ValidationError("give --family or --spec");
  nlohmann::json spec = {{"family", args.family}};
  if (args.p) spec["p"] = *args.p;
  if (!args.omega.empty()) {
    spec["omega"] = args.omega.front() == '[' ? parse_json_or_throw(args.omega, "--omega")
                                              : nlohmann::json(args.omega);
  }
  if (!args.unitary.empty()) spec["unitary"] = parse_json_or_throw(args.unitary, "--unitary");
  return channel_from_json(spec);
}

nlohmann::json tagged(double value, Certification certification) {
  return {{"value", value}, {"certification", to_string(certification)}};
}

}  // namespace qdyn::cli
