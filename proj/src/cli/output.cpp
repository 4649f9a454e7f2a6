#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <variant>

#include <json.hpp>

#include "coopgeo/cli.hpp"

namespace coopgeo {

namespace {

struct Null {};
struct Decimal {
  double v;
};
using Cell = std::variant<Null, std::string, long long, std::uint64_t, bool, Decimal>;
using Record = std::vector<std::pair<std::string, Cell>>;

const char* side_name(ReuleauxSide s) {
  switch (s) {
    case ReuleauxSide::Upper: return "upper";
    case ReuleauxSide::Lower: return "lower";
    case ReuleauxSide::Both: return "both";
  }
  return "?";
}

void append_config(Record& r, const SimConfig& c) {
  const RelayMetricParams m = c.metric_params();
  const ContentionConfig cc = c.contention();
  r.emplace_back("seed", c.seed);
  r.emplace_back("channel", std::string(c.channel_model == ChannelModel::Ideal ? "ideal" : "rayleigh"));
  r.emplace_back("constellation", static_cast<long long>(c.constellation));
  r.emplace_back("packet_size_octets", static_cast<long long>(c.packet_size_octets));
  r.emplace_back("control_frame_octets", static_cast<long long>(c.control_frame_octets));
  r.emplace_back("t_max_us", Decimal{c.t_max_us});
  r.emplace_back("nsa", static_cast<long long>(c.nsa));
  r.emplace_back("collision_window_us", Decimal{cc.collision_window_us});
  r.emplace_back("jitter", c.jitter);
  r.emplace_back("collision_retries", static_cast<long long>(c.collision_retries));
  r.emplace_back("metric_a_squared", Decimal{m.a_squared});
  r.emplace_back("metric_b", Decimal{m.b});
  r.emplace_back("metric_p", Decimal{m.p});
  r.emplace_back("relay_side", std::string(side_name(c.relay_side)));
  r.emplace_back("recovery", c.recovery);
  r.emplace_back("hop_limit", static_cast<long long>(c.hop_limit));
  r.emplace_back("topology_mode",
                 std::string(c.topology_mode == TopologyMode::PerHopDisk ? "per_hop_disk" : "multi_hop_area"));
  r.emplace_back("range_m", Decimal{c.range_m});
  r.emplace_back("neighbor_count", static_cast<long long>(c.neighbor_count));
  r.emplace_back("dst_distance_factor", Decimal{c.dst_distance_factor});
  r.emplace_back("node_count", static_cast<long long>(c.node_count));
  r.emplace_back("area_side_m", Decimal{c.area_side_m});
  r.emplace_back("require_connected", c.require_connected);
  r.emplace_back("replications", static_cast<long long>(c.replications));
  r.emplace_back("runs_per_topology", static_cast<long long>(c.runs_per_topology));
  r.emplace_back("tx_power_dbm", Decimal{c.channel.tx_power_dbm});
  r.emplace_back("noise_power_dbm", Decimal{c.channel.noise_power_dbm});
  r.emplace_back("noise_figure_db", Decimal{c.channel.noise_figure_db});
  r.emplace_back("carrier_freq_hz", Decimal{c.channel.carrier_freq_hz});
  r.emplace_back("bandwidth_hz", Decimal{c.channel.bandwidth_hz});
  r.emplace_back("path_loss_exponent", Decimal{c.channel.path_loss_exponent});
  r.emplace_back("reference_distance_m", Decimal{c.channel.reference_distance_m});
}

Record to_record(const ResultRow& row) {
  const MetricsReport& m = row.metrics;
  Record r;
  r.emplace_back("axis", std::string(to_string(row.axis)));
  if (row.axis_value) r.emplace_back("axis_value", static_cast<long long>(*row.axis_value));
  else r.emplace_back("axis_value", Null{});
  r.emplace_back("cooperative", row.config.cooperative);
  r.emplace_back("per", Decimal{m.per});
  r.emplace_back("per_ci95", Decimal{m.per_ci95});
  r.emplace_back("tx_error_prob", Decimal{m.tx_error_prob});
  r.emplace_back("tx_error_prob_ci95", Decimal{m.tx_error_prob_ci95});
  r.emplace_back("saturated_throughput_bps", Decimal{m.saturated_throughput_bps});
  r.emplace_back("saturated_throughput_ci95", Decimal{m.saturated_throughput_ci95});
  r.emplace_back("collision_rate", Decimal{m.collision_rate});
  r.emplace_back("collision_rate_ci95", Decimal{m.collision_rate_ci95});
  r.emplace_back("delivery_ratio", Decimal{m.delivery_ratio});
  r.emplace_back("replications_used", static_cast<long long>(m.replications_used));
  r.emplace_back("hops", static_cast<long long>(m.hops));
  r.emplace_back("transmissions", static_cast<long long>(m.transmissions));
  append_config(r, row.config);
  return r;
}

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Null>) return "";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, Decimal>) return format_sig6(v.v);
        else return std::to_string(v);
      },
      c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Null>) return nullptr;
        // The JSON value is the CSV text read back, so both encodings agree.
        else if constexpr (std::is_same_v<T, Decimal>) return std::strtod(format_sig6(v.v).c_str(), nullptr);
        else return v;
      },
      c);
}

nlohmann::ordered_json json_record(const Record& r) {
  nlohmann::ordered_json o = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r) o[k] = json_cell(v);
  return o;
}

void write_csv(std::ostream& out, const std::vector<Record>& records, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const Record& r : records) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i].second);
    out << '\n';
  }
}

Record trace_record(const TraceLine& line, std::uint64_t seed) {
  const Frame& f = line.frame;
  Record r;
  r.emplace_back("hop", static_cast<long long>(line.hop));
  r.emplace_back("time_us", Decimal{f.sent_at});
  r.emplace_back("kind", std::string(to_string(f.kind)));
  r.emplace_back("sender", static_cast<long long>(f.sender));
  if (f.target) r.emplace_back("target", static_cast<long long>(*f.target));
  else r.emplace_back("target", Null{});
  if (f.decoded_ok) r.emplace_back("decoded_ok", *f.decoded_ok);
  else r.emplace_back("decoded_ok", Null{});
  r.emplace_back("seed", seed);
  return r;
}

std::unique_ptr<LinkModel> make_link(const SimConfig& cfg) {
  if (cfg.channel_model == ChannelModel::Ideal) return std::make_unique<IdealLink>();
  return std::make_unique<RayleighLink>(cfg.channel);
}

template <typename Writer>
int emit(const ExperimentSpec& spec, Writer&& write) {
  if (spec.output_path.empty()) {
    write(std::cout);
    std::cout.flush();
    return std::cout ? 0 : 1;
  }
  std::ofstream out(spec.output_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot open " << spec.output_path.string() << " for writing\n";
    return 1;
  }
  write(out);
  out.close();
  if (!out) {
    std::cerr << "error: failed writing " << spec.output_path.string() << "\n";
    return 1;
  }
  return 0;
}

bool validated(const ExperimentSpec& spec) {
  try {
    spec.validate();
    return true;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return false;
  }
}

}  // namespace

std::string format_sig6(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  if (v == 0.0) return "0";
  char sci[32];
  std::snprintf(sci, sizeof sci, "%.5e", v);
  const double rounded = std::strtod(sci, nullptr);
  const int exponent = std::atoi(std::strchr(sci, 'e') + 1);
  const int decimals = std::max(0, 5 - exponent);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c;
    for (const auto& [k, _] : to_record(ResultRow{})) c.push_back(k);
    return c;
  }();
  return cols;
}

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c;
    for (const auto& [k, _] : trace_record(TraceLine{}, 0)) c.push_back(k);
    return c;
  }();
  return cols;
}

std::vector<ResultRow> run_sweep_rows(const ExperimentSpec& spec) {
  spec.validate();
  const Sweep sweep = spec.sweep.value_or(Sweep{});

  std::vector<std::optional<int>> axis_values;
  if (sweep.axis == SweepAxis::None) {
    axis_values.push_back(std::nullopt);
  } else {
    std::vector<int> v = sweep.values;
    std::stable_sort(v.begin(), v.end());
    for (int x : v) axis_values.push_back(x);
  }
  std::vector<bool> coop_values{spec.base.cooperative};
  if (sweep.both_cooperative) coop_values = {false, true};

  std::vector<ResultRow> rows;
  for (const auto& value : axis_values) {
    for (bool coop : coop_values) {
      ResultRow row;
      row.axis = sweep.axis;
      row.axis_value = value;
      row.config = spec.base;
      row.config.cooperative = coop;
      if (value) {
        if (sweep.axis == SweepAxis::NeighborCount) row.config.neighbor_count = *value;
        else row.config.constellation = *value;
      }
      row.metrics = run_replications(row.config);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat fmt,
                const std::string& command) {
  std::vector<Record> records;
  for (const ResultRow& r : rows) records.push_back(to_record(r));
  if (fmt == OutputFormat::Csv) {
    write_csv(out, records, result_columns());
    return;
  }
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["columns"] = result_columns();
  doc["rows"] = nlohmann::ordered_json::array();
  for (const Record& r : records) doc["rows"].push_back(json_record(r));
  out << doc.dump(2) << '\n';
}

DeliveryReport trace_route(const SimConfig& cfg, const LinkModel& link) {
  cfg.validate();
  Rng rng = Rng::substream(cfg.seed, 0);
  const Topology topo = make_topology(cfg, rng);
  const Radio radio =
      Radio::make(link, cfg.modulation(), cfg.packet_size_octets, cfg.control_frame_octets, cfg.channel.bandwidth_hz);
  return run_route(topo, topo.source(), topo.destination(), cfg.protocol(), radio, rng);
}

DeliveryReport trace_route(const SimConfig& cfg) {
  const auto link = make_link(cfg);
  return trace_route(cfg, *link);
}

void write_trace(std::ostream& out, const DeliveryReport& report, const SimConfig& cfg, OutputFormat fmt) {
  std::vector<Record> records;
  for (const TraceLine& line : report.trace) records.push_back(trace_record(line, cfg.seed));
  if (fmt == OutputFormat::Csv) {
    write_csv(out, records, trace_columns());
    return;
  }
  Record config;
  append_config(config, cfg);
  nlohmann::ordered_json doc;
  doc["command"] = "trace";
  doc["config"] = json_record(config);
  doc["delivered"] = report.delivered;
  doc["hop_count"] = report.hops.size();
  doc["forwarders"] = report.forwarders;
  doc["relays"] = report.relays;
  doc["columns"] = trace_columns();
  doc["frames"] = nlohmann::ordered_json::array();
  for (const Record& r : records) doc["frames"].push_back(json_record(r));
  out << doc.dump(2) << '\n';
}

int cmd_run(const ExperimentSpec& spec) {
  if (spec.sweep) {
    std::cerr << "error: run takes no sweep; use sweep for list-valued keys or cooperative = both\n";
    return 2;
  }
  if (!validated(spec)) return 2;
  const std::vector<ResultRow> rows = run_sweep_rows(spec);
  return emit(spec, [&](std::ostream& out) { write_rows(out, rows, spec.format, "run"); });
}

int cmd_sweep(const ExperimentSpec& spec) {
  if (!spec.sweep) {
    std::cerr << "error: sweep needs a list-valued neighbor_count or constellation, or cooperative = both\n";
    return 2;
  }
  if (!validated(spec)) return 2;
  const std::vector<ResultRow> rows = run_sweep_rows(spec);
  return emit(spec, [&](std::ostream& out) { write_rows(out, rows, spec.format, "sweep"); });
}

int cmd_trace(const ExperimentSpec& spec) {
  if (spec.sweep) {
    std::cerr << "error: trace takes no sweep\n";
    return 2;
  }
  if (!validated(spec)) return 2;
  const DeliveryReport report = trace_route(spec.base);
  return emit(spec, [&](std::ostream& out) { write_trace(out, report, spec.base, spec.format); });
}

}  // namespace coopgeo
