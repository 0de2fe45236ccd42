#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "agesampler/cmdp.hpp"
#include "agesampler/dtmc.hpp"
#include "agesampler/errors.hpp"

namespace agesampler::cli {

using nlohmann::json;

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kInvalidInput = 2,
  kInfeasible = 3,
  kInternalFailure = 4,
};

/// Raised for malformed input files; the message names the offending field.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Parses {"p": [[...], ...]}. `source` prefixes error messages.
MarkovChain parse_chain(const json& doc, const std::string& source = "chain");
MarkovChain load_chain(const std::string& path);

/// Accepts {"dist": [[...]]} or a solve report carrying {"policy": {"dist": ...}}.
MarkovPolicy parse_policy(const json& doc, const std::string& source = "policy");

json read_json_file(const std::string& path);
/// Writes `doc` (indented, trailing newline) to `path`, or to `out` if path is empty.
void write_json(const json& doc, const std::string& path, std::ostream& out);

json to_json(const Matrix& m);
json to_json(const Vector& v);
json to_json(const EvalReport& r);

enum class ProblemKind { None, P1, P1Clairvoyant, P2 };

struct RunConfig {
  std::string chain_path;
  int m_max = 32;
  ProblemKind problem = ProblemKind::None;
  double nu = 0.0;  // P1
  double d = 0.0;   // P2
  std::string policy_path;  // simulate: policy file or solve report
  std::string output_path;  // empty: stdout
  std::uint64_t seed = 1;
  std::int64_t k_samples = 1'000'000;
  std::int64_t warmup = 1000;
  TieBreak tie_break = TieBreak::FaceCentroid;

  /// Throws InputError on out-of-range values.
  void validate() const;
};

/// Chain summary: size, stationary distribution, clairvoyant frequency.
int cmd_info(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Solves P1 or P2 and writes the JSON report.
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Simulates a policy (from --policy, or freshly solved from the problem
/// flags) and writes the report with a "simulation" section appended.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Solve report body for an already-loaded chain. Throws library errors.
json solve_report(const MarkovChain& chain, const RunConfig& config);

struct SweepSpec {
  enum class Kind { Clairvoyant, P1, P2 };
  Kind problem = Kind::Clairvoyant;
  int m_max = 32;
  std::vector<double> p12;
  std::vector<double> p21;
  /// P1: values of nu (ignored when nu_clairvoyant). P2: values of d.
  std::vector<double> constraint_values;
  bool nu_clairvoyant = false;
  TieBreak tie_break = TieBreak::FaceCentroid;
};

/// Parses a sweep specification; see README for the schema.
SweepSpec parse_sweep_spec(const json& doc);

/// Header of the sweep CSV.
std::string sweep_csv_header();

/// Computes one CSV line per (p12, p21, constraint) grid point. Failing
/// points are reported in the status column.
std::vector<std::string> run_sweep(const SweepSpec& spec, unsigned workers);

int cmd_sweep(const std::string& spec_path, const std::string& output_path, unsigned workers,
              std::ostream& out, std::ostream& err);

}  // namespace agesampler::cli
