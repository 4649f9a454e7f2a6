#pragma once
// Experiment orchestration: flat key-value config files, single runs,
// parameter sweeps, frame-log traces and their CSV/JSON encodings.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopgeo/simcore.hpp"

namespace coopgeo {

enum class OutputFormat { Csv, Json };

enum class SweepAxis { None, NeighborCount, Constellation };
const char* to_string(SweepAxis a);

struct Sweep {
  SweepAxis axis{SweepAxis::None};
  std::vector<int> values;        // empty when axis is None
  bool both_cooperative{false};   // cooperative = both
};

struct ExperimentSpec {
  SimConfig base;
  std::optional<Sweep> sweep;
  std::filesystem::path output_path;  // empty: stdout
  OutputFormat format{OutputFormat::Csv};

  // Throws std::invalid_argument naming the offending key.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line) : std::runtime_error(msg), line_(line) {}
  int line() const { return line_; }  // 0 when not tied to a line

 private:
  int line_;
};

// One `key = value` per line, `#` starts a comment. Unknown keys, malformed
// values and out-of-range settings raise ConfigError.
ExperimentSpec parse_config(std::istream& in, const std::string& origin = "<config>");
ExperimentSpec load_config(const std::filesystem::path& path);

// Keys accepted by the config parser, in documentation order.
const std::vector<std::string>& config_keys();

// Result row shared by run and sweep. Column order of the CSV encoding:
// result_columns().
struct ResultRow {
  SweepAxis axis{SweepAxis::None};
  std::optional<int> axis_value;
  SimConfig config;
  MetricsReport metrics;
};

const std::vector<std::string>& result_columns();

// Six significant digits, plain decimal notation.
std::string format_sig6(double v);

std::vector<ResultRow> run_sweep_rows(const ExperimentSpec& spec);

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat fmt,
                const std::string& command);

// Frame log of a single routed packet.
const std::vector<std::string>& trace_columns();

DeliveryReport trace_route(const SimConfig& cfg);
DeliveryReport trace_route(const SimConfig& cfg, const LinkModel& link);

void write_trace(std::ostream& out, const DeliveryReport& report, const SimConfig& cfg, OutputFormat fmt);

// Exit codes: 0 ok, 1 I/O failure, 2 invalid spec.
int cmd_run(const ExperimentSpec& spec);
int cmd_sweep(const ExperimentSpec& spec);
int cmd_trace(const ExperimentSpec& spec);

}  // namespace coopgeo
