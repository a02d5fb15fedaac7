// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qotm/models.hpp"
#include "qotm/otm.hpp"

namespace qotm::cli {

enum class OutputFormat { csv, json };

struct SweepAxis {
  std::string path;             // dotted path into the model block
  std::vector<double> values;
};

struct RunConfig {
  std::string model_type;       // two_qubit_dephasing | spin_boson | random | closed_system
  nlohmann::json model;         // model parameter block (numeric leaves sweepable)
  std::vector<SweepAxis> sweep;
  std::vector<std::string> checks;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;      // empty or "-" means stdout
  std::uint64_t seed = 0;
};

/// Parses and validates a config; throws ValidationError with a line-anchored
/// message on syntax errors and named-path diagnostics on semantic ones.
RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

/// One output row: ordered (column, value) pairs; all rows of a run share the
/// same schema.
struct Row {
  std::vector<std::pair<std::string, double>> columns;
};

struct CheckOutcome {
  std::string name;
  bool passed;
  double worst;       // residual or bound violation magnitude
  std::string detail;
};

struct RunResult {
  std::vector<std::string> header;
  std::vector<Row> rows;
  std::vector<CheckOutcome> checks;
  bool all_passed;
};

/// Evaluates the sweep cross-product (optionally in parallel); rows are in
/// deterministic sweep order regardless of thread count.
RunResult execute(const RunConfig& config, int threads);

void write_csv(std::ostream& os, const RunResult& result, bool with_timestamp);
void write_json(std::ostream& os, const RunResult& result);

const std::vector<std::string>& registered_checks();

/// CLI entry for `run`; returns the process exit code (0 pass, 1 check
/// failure, 2 config error).
int run_command(const std::string& config_path, const std::optional<std::string>& out_override,
                bool no_timestamp, int threads);

}  // namespace qotm::cli
