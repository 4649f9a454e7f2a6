#include "coopgeo/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coopgeo {

void ChannelParams::validate() const {
  if (!(bandwidth_hz > 0)) throw std::invalid_argument("bandwidth_hz must be > 0");
  if (!(path_loss_exponent >= 2)) throw std::invalid_argument("path_loss_exponent must be >= 2");
  if (!(reference_distance_m > 0)) throw std::invalid_argument("reference_distance_m must be > 0");
  if (!(carrier_freq_hz > 0)) throw std::invalid_argument("carrier_freq_hz must be > 0");
}

Modulation::Modulation(int constellation_size) : m_(constellation_size), bits_(0) {
  int m = constellation_size;
  while (m > 1 && m % 4 == 0) {
    m /= 4;
    bits_ += 2;
  }
  if (constellation_size < 4 || m != 1) {
    throw std::invalid_argument("constellation size must be a power of 4, got " +
                                std::to_string(constellation_size));
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double mean_snr(double d, const ChannelParams& params) {
  if (d < params.reference_distance_m) {
    throw std::domain_error("mean_snr: distance below reference distance");
  }
  const double margin_db = params.tx_power_dbm - params.noise_power_dbm - params.noise_figure_db;
  return db_to_linear(margin_db) * std::pow(params.reference_distance_m / d, params.path_loss_exponent);
}

LinkDraw draw_rayleigh_snr(double mean, Rng& rng) {
  if (!(mean > 0)) throw std::invalid_argument("draw_rayleigh_snr: mean must be > 0");
  return {-mean * std::log1p(-rng.uniform())};
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double ser_mqam(double snr, Modulation mod) {
  if (snr < 0) throw std::invalid_argument("ser_mqam: snr must be >= 0");
  const double m = mod.size();
  const double p_axis = 2.0 * (1.0 - 1.0 / std::sqrt(m)) * q_function(std::sqrt(3.0 * snr / (m - 1.0)));
  return 1.0 - (1.0 - p_axis) * (1.0 - p_axis);
}

double packet_success(double ser, long n_symbols) {
  if (!(ser >= 0 && ser <= 1)) throw std::invalid_argument("packet_success: ser outside [0,1]");
  if (n_symbols <= 0) throw std::invalid_argument("packet_success: n_symbols must be positive");
  if (ser == 1.0) return 0.0;
  return std::exp(static_cast<double>(n_symbols) * std::log1p(-ser));
}

double mrc_combine(double snr_direct, double snr_relay) {
  if (snr_direct < 0 || snr_relay < 0) throw std::invalid_argument("mrc_combine: negative snr");
  return snr_direct + snr_relay;
}

SerConstants ser_constants(Modulation mod, std::optional<SerConstants> override_value) {
  if (override_value) return *override_value;
  const double m = mod.size();
  if (mod.size() != 4 && mod.size() != 16 && mod.size() != 64) {
    throw std::invalid_argument("ser_constants: unsupported constellation size " +
                                std::to_string(mod.size()));
  }
  const double pi = std::numbers::pi;
  const double a = (m - 1) / (2 * m) + std::sin(2 * pi / m) / (4 * pi);
  const double b = 3 * (m - 1) / (8 * m) + std::sin(2 * pi / m) / (4 * pi) - std::sin(4 * pi / m) / (32 * pi);
  return {a * a, b};
}

long symbols_for(long octets, Modulation mod) {
  const long bits = 8 * octets;
  return (bits + mod.bits_per_symbol() - 1) / mod.bits_per_symbol();
}

double airtime_us(long octets, Modulation mod, double bandwidth_hz) {
  return 8.0 * static_cast<double>(octets) / (mod.bits_per_symbol() * bandwidth_hz) * 1e6;
}

}  // namespace coopgeo
