#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "coopgeo/cli.hpp"

namespace coopgeo {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

template <typename T>
T parse_number(const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("not a valid number: '" + text + "'");
  }
  return v;
}

double parse_double(const std::string& text) {
  const double v = parse_number<double>(text);
  if (!std::isfinite(v)) throw std::invalid_argument("must be finite");
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = lower(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + text + "'");
}

// "7", "2,4,8" or "1..20"
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_number<int>(trim(text.substr(0, dots)));
    const int hi = parse_number<int>(trim(text.substr(dots + 2)));
    if (hi < lo) throw std::invalid_argument("empty range '" + text + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<int>(trim(item)));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

Sweep& sweep_of(ExperimentSpec& spec) {
  if (!spec.sweep) spec.sweep.emplace();
  return *spec.sweep;
}

void set_axis(ExperimentSpec& spec, SweepAxis axis, std::vector<int> values) {
  Sweep& s = sweep_of(spec);
  if (s.axis != SweepAxis::None && s.axis != axis) {
    throw std::invalid_argument("only one list-valued key is allowed per sweep");
  }
  s.axis = axis;
  s.values = std::move(values);
}

using Setter = std::function<void(ExperimentSpec&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"tx_power_dbm", [](ExperimentSpec& s, const std::string& v) { s.base.channel.tx_power_dbm = parse_double(v); }},
      {"noise_power_dbm", [](ExperimentSpec& s, const std::string& v) { s.base.channel.noise_power_dbm = parse_double(v); }},
      {"noise_figure_db", [](ExperimentSpec& s, const std::string& v) { s.base.channel.noise_figure_db = parse_double(v); }},
      {"carrier_freq_hz", [](ExperimentSpec& s, const std::string& v) { s.base.channel.carrier_freq_hz = parse_double(v); }},
      {"bandwidth_hz", [](ExperimentSpec& s, const std::string& v) { s.base.channel.bandwidth_hz = parse_double(v); }},
      {"path_loss_exponent", [](ExperimentSpec& s, const std::string& v) { s.base.channel.path_loss_exponent = parse_double(v); }},
      {"reference_distance_m", [](ExperimentSpec& s, const std::string& v) { s.base.channel.reference_distance_m = parse_double(v); }},
      {"channel",
       [](ExperimentSpec& s, const std::string& v) {
         const std::string t = lower(v);
         if (t == "rayleigh") s.base.channel_model = ChannelModel::Rayleigh;
         else if (t == "ideal") s.base.channel_model = ChannelModel::Ideal;
         else throw std::invalid_argument("expected rayleigh or ideal, got '" + v + "'");
       }},
      {"constellation",
       [](ExperimentSpec& s, const std::string& v) {
         std::vector<int> vals = parse_int_list(v);
         if (vals.size() == 1) s.base.constellation = vals.front();
         else set_axis(s, SweepAxis::Constellation, std::move(vals));
       }},
      {"packet_size_octets", [](ExperimentSpec& s, const std::string& v) { s.base.packet_size_octets = parse_number<long>(v); }},
      {"control_frame_octets", [](ExperimentSpec& s, const std::string& v) { s.base.control_frame_octets = parse_number<long>(v); }},
      {"t_max_us", [](ExperimentSpec& s, const std::string& v) { s.base.t_max_us = parse_double(v); }},
      {"nsa", [](ExperimentSpec& s, const std::string& v) { s.base.nsa = parse_number<int>(v); }},
      {"collision_window_us", [](ExperimentSpec& s, const std::string& v) { s.base.collision_window_us = parse_double(v); }},
      {"jitter", [](ExperimentSpec& s, const std::string& v) { s.base.jitter = parse_bool(v); }},
      {"collision_retries", [](ExperimentSpec& s, const std::string& v) { s.base.collision_retries = parse_number<int>(v); }},
      {"metric_a_squared", [](ExperimentSpec& s, const std::string& v) { s.base.metric_a_squared = parse_double(v); }},
      {"metric_b", [](ExperimentSpec& s, const std::string& v) { s.base.metric_b = parse_double(v); }},
      {"metric_p", [](ExperimentSpec& s, const std::string& v) { s.base.metric_p = parse_double(v); }},
      {"relay_side",
       [](ExperimentSpec& s, const std::string& v) {
         const std::string t = lower(v);
         if (t == "upper") s.base.relay_side = ReuleauxSide::Upper;
         else if (t == "lower") s.base.relay_side = ReuleauxSide::Lower;
         else if (t == "both") s.base.relay_side = ReuleauxSide::Both;
         else throw std::invalid_argument("expected upper, lower or both, got '" + v + "'");
       }},
      {"cooperative",
       [](ExperimentSpec& s, const std::string& v) {
         if (lower(v) == "both") {
           sweep_of(s).both_cooperative = true;
         } else {
           s.base.cooperative = parse_bool(v);
         }
       }},
      {"recovery", [](ExperimentSpec& s, const std::string& v) { s.base.recovery = parse_bool(v); }},
      {"hop_limit",
       [](ExperimentSpec& s, const std::string& v) {
         const long n = parse_number<long>(v);
         if (n < 0) throw std::invalid_argument("must be >= 0");
         s.base.hop_limit = static_cast<std::size_t>(n);
       }},
      {"topology_mode",
       [](ExperimentSpec& s, const std::string& v) {
         const std::string t = lower(v);
         if (t == "per_hop_disk") s.base.topology_mode = TopologyMode::PerHopDisk;
         else if (t == "multi_hop_area") s.base.topology_mode = TopologyMode::MultiHopArea;
         else throw std::invalid_argument("expected per_hop_disk or multi_hop_area, got '" + v + "'");
       }},
      {"range_m", [](ExperimentSpec& s, const std::string& v) { s.base.range_m = parse_double(v); }},
      {"neighbor_count",
       [](ExperimentSpec& s, const std::string& v) {
         std::vector<int> vals = parse_int_list(v);
         if (vals.size() == 1) s.base.neighbor_count = vals.front();
         else set_axis(s, SweepAxis::NeighborCount, std::move(vals));
       }},
      {"dst_distance_factor", [](ExperimentSpec& s, const std::string& v) { s.base.dst_distance_factor = parse_double(v); }},
      {"node_count", [](ExperimentSpec& s, const std::string& v) { s.base.node_count = parse_number<int>(v); }},
      {"area_side_m", [](ExperimentSpec& s, const std::string& v) { s.base.area_side_m = parse_double(v); }},
      {"require_connected", [](ExperimentSpec& s, const std::string& v) { s.base.require_connected = parse_bool(v); }},
      {"replications", [](ExperimentSpec& s, const std::string& v) { s.base.replications = parse_number<long>(v); }},
      {"runs_per_topology", [](ExperimentSpec& s, const std::string& v) { s.base.runs_per_topology = parse_number<long>(v); }},
      {"seed", [](ExperimentSpec& s, const std::string& v) { s.base.seed = parse_number<std::uint64_t>(v); }},
      {"format",
       [](ExperimentSpec& s, const std::string& v) {
         const std::string t = lower(v);
         if (t == "csv") s.format = OutputFormat::Csv;
         else if (t == "json") s.format = OutputFormat::Json;
         else throw std::invalid_argument("expected csv or json, got '" + v + "'");
       }},
      {"output", [](ExperimentSpec& s, const std::string& v) { s.output_path = v; }},
  };
  return table;
}

}  // namespace

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::NeighborCount: return "neighbor_count";
    case SweepAxis::Constellation: return "constellation";
  }
  return "?";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void ExperimentSpec::validate() const {
  if (!sweep || sweep->axis == SweepAxis::None) {
    base.validate();
    return;
  }
  if (sweep->values.empty()) throw std::invalid_argument(std::string(to_string(sweep->axis)) + ": empty sweep list");
  if (sweep->axis == SweepAxis::NeighborCount && base.topology_mode != TopologyMode::PerHopDisk) {
    throw std::invalid_argument("neighbor_count: sweeps need topology_mode = per_hop_disk");
  }
  for (int v : sweep->values) {
    SimConfig c = base;
    if (sweep->axis == SweepAxis::NeighborCount) c.neighbor_count = v;
    else c.constellation = v;
    c.validate();
  }
}

ExperimentSpec parse_config(std::istream& in, const std::string& origin) {
  ExperimentSpec spec;
  std::map<std::string, int> seen;
  std::string raw;
  int lineno = 0;

  const auto fail = [&](int line, const std::string& msg) -> ConfigError {
    return ConfigError(origin + ":" + std::to_string(line) + ": " + msg, line);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw fail(lineno, "missing key");
    if (value.empty()) throw fail(lineno, key + ": missing value");

    const auto& table = setters();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    if (it == table.end()) throw fail(lineno, "unknown key '" + key + "'");
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw fail(lineno, key + ": duplicate key (first set on line " + std::to_string(prev->second) + ")");
    }
    seen[key] = lineno;
    try {
      it->second(spec, value);
    } catch (const std::invalid_argument& e) {
      throw fail(lineno, key + ": " + e.what());
    }
  }

  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const std::string key = msg.substr(0, msg.find(':'));
    const auto at = seen.find(key);
    if (at != seen.end()) throw fail(at->second, msg);
    throw ConfigError(origin + ": " + msg, 0);
  }
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file", 0);
  return parse_config(in, path.string());
}

}  // namespace coopgeo
