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

// Building blocks of the qdyn command-line tool.
//
// Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 solver
// failure, 4 output could not be written.

#ifndef QDYN_TOOLS_CLI_HPP
#define QDYN_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdyn/channels.hpp"
#include "qdyn/thermo.hpp"

namespace qdyn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalidInput = 2,
  kExitSolverFailure = 3,
  kExitIoFailure = 4,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Channel specs

/// Channel selection from flags. A spec file, when given, takes precedence.
struct ChannelArgs {
  std::string spec_path;
  std::string family;
  std::optional<double> p;
  std::string omega;    // "maximally-mixed", "pure" or a JSON matrix
  std::string unitary;  // JSON matrix
};

/// Matrix from row-major rows of [re, im] pairs. Throws ValidationError.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Channel from {family, p?, omega?, unitary?, povm?, dims?}. A replacer
/// without omega and a unitary without matrix use the one-parameter qubit
/// members at p. Throws ValidationError.
QuantumChannel channel_from_json(const nlohmann::json& spec);

/// Throws ValidationError on an invalid spec and IoError on an unreadable
/// spec file.
QuantumChannel build_channel(const ChannelArgs& args);

/// Canonical JSON spec of the selection, echoed in reports.
nlohmann::json describe_channel(const ChannelArgs& args);

/// {"value": v, "certification": tag}.
nlohmann::json tagged(double value, Certification certification);

// ---------------------------------------------------------------------------
// Sweep

struct SweepRow {
  std::string channel_family;
  double p = 0.0;
  double s_min = 0.0;
  double neg_s_min = 0.0;
};

/// Closed-form S_min over p = k/(p_steps-1), rows sorted by p and then by
/// the order of `families`. Throws ValidationError for p_steps < 2.
std::vector<SweepRow> sweep(const std::vector<ChannelFamily>& families, int p_steps);

/// Header family,p,s_min,neg_s_min and one line per row, fixed precision.
std::string to_csv(const std::vector<SweepRow>& rows);

/// Line plot of neg_s_min against p, one polyline per family.
std::string to_svg(const std::vector<SweepRow>& rows);

/// Throws IoError if the file cannot be written.
void write_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Invariant suite

struct InvariantResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 42;
  int workers = 1;
  /// Empty, or "d_max_sign" to negate every max-relative entropy the suite
  /// evaluates; used to confirm that the suite can fail.
  std::string mutate;
};

std::vector<InvariantResult> run_invariants(const CheckOptions& options);

/// "PASS name: detail" or "FAIL name: detail".
std::string format_ledger_line(const InvariantResult& r);

// ---------------------------------------------------------------------------
// Entry point

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdyn::cli

#endif  // QDYN_TOOLS_CLI_HPP
