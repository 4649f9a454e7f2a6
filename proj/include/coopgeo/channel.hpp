#pragma once
// Physical-layer abstraction: power-law link budget, block Rayleigh fading,
// square M-QAM symbol error rate, packet success and two-branch MRC.

#include <optional>

#include "coopgeo/rng.hpp"

namespace coopgeo {

struct ChannelParams {
  double tx_power_dbm{25.0};
  // -20 dBm: a +20 dBm floor would sit within 5 dB of the transmit power.
  double noise_power_dbm{-20.0};
  double noise_figure_db{15.0};
  double carrier_freq_hz{2.412e9};
  double bandwidth_hz{22e6};
  double path_loss_exponent{2.0};
  double reference_distance_m{1.0};

  void validate() const;
};

// Square QAM constellation.
class Modulation {
 public:
  explicit Modulation(int constellation_size);

  int size() const { return m_; }
  int bits_per_symbol() const { return bits_; }

  bool operator==(const Modulation&) const = default;

 private:
  int m_;
  int bits_;
};

struct SerConstants {
  double a_squared{0.0};
  double b{0.0};
};

struct LinkDraw {
  double instantaneous_snr{0.0};
};

double db_to_linear(double db);

// Mean SNR at distance d. Rejects d below the reference distance.
double mean_snr(double d, const ChannelParams& params);

// Exponentially distributed instantaneous SNR with the given mean.
LinkDraw draw_rayleigh_snr(double mean, Rng& rng);

// Gaussian tail probability.
double q_function(double x);

double ser_mqam(double snr, Modulation mod);

// Probability that all n symbols of a block are received without error.
double packet_success(double ser, long n_symbols);

double mrc_combine(double snr_direct, double snr_relay);

// (A^2, B) weights of the relay metric. Defaults come from the M-PSK
// integrals A = (1/pi) int_0^{(M-1)pi/M} sin^2, B = (1/pi) int_0^{(M-1)pi/M} sin^4;
// an override is returned verbatim.
SerConstants ser_constants(Modulation mod, std::optional<SerConstants> override_value = {});

// Number of symbols occupied by `octets` at the given modulation (rounded up).
long symbols_for(long octets, Modulation mod);

// Airtime in microseconds with one symbol per hertz of bandwidth.
double airtime_us(long octets, Modulation mod, double bandwidth_hz);

}  // namespace coopgeo
