#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coopgeo/cli.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config, "key = value config file (defaults apply when omitted)");
  sub->add_option("--seed", args.seed, "64-bit seed, overrides the config");
  sub->add_option("--out", args.out, "output file (stdout when omitted)");
  sub->add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

coopgeo::ExperimentSpec build_spec(const CommonArgs& args) {
  coopgeo::ExperimentSpec spec;
  if (!args.config.empty()) spec = coopgeo::load_config(args.config);
  if (args.seed) spec.base.seed = *args.seed;
  if (!args.out.empty()) spec.output_path = args.out;
  if (args.format == "csv") spec.format = coopgeo::OutputFormat::Csv;
  if (args.format == "json") spec.format = coopgeo::OutputFormat::Json;
  if (spec.base.relay_side == coopgeo::ReuleauxSide::Both) {
    std::cerr << "warning: relay_side = both; relays on opposite sides may not hear each other\n";
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative geographic routing simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, trace_args;
  CLI::App* run = app.add_subcommand("run", "Monte-Carlo estimate for a single configuration");
  CLI::App* sweep = app.add_subcommand("sweep", "one row per (axis value, cooperative flag)");
  CLI::App* trace = app.add_subcommand("trace", "frame log of one routed packet");
  add_common(run, run_args);
  add_common(sweep, sweep_args);
  add_common(trace, trace_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return coopgeo::cmd_run(build_spec(run_args));
    if (sweep->parsed()) return coopgeo::cmd_sweep(build_spec(sweep_args));
    if (trace->parsed()) return coopgeo::cmd_trace(build_spec(trace_args));
  } catch (const coopgeo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
