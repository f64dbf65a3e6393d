#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irsbc/linalg.hpp"
#include "irsbc/rng.hpp"

namespace irsbc {

/// Invalid or inconsistent configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

enum class Endpoint { kReader, kTag, kIrs };

/// How the deterministic (LOS) component's phases are generated: from the
/// exact element geometry, or iid uniform phases per realization.
enum class LosPhaseMode { kGeometric, kRandomIid };

/// Deployment geometry, radio, and fading parameters. Defaults describe a
/// UHF backscatter setup: 915 MHz carrier, 30 dB reference path loss at
/// 1 m, reader at (2,0,0), tag at (2,13,0), IRS at (0,13,0.33) (meters),
/// 6 dB Rician factor, -90 dBm noise power.
struct ScenarioConfig {
  Vec3 reader_pos{2.0, 0.0, 0.0};
  Vec3 tag_pos{2.0, 13.0, 0.0};
  Vec3 irs_pos{0.0, 13.0, 0.33};
  int n_subsurfaces = 10;           // N; 0 models the IRS being absent
  int elements_per_subsurface = 5;  // share one reflection coefficient
  double carrier_freq_hz = 915e6;
  double ref_pathloss_db = 30.0;  // at 1 m
  double pathloss_exp_reader_irs = 2.2;
  double pathloss_exp_irs_tag = 2.2;
  double pathloss_exp_reader_tag = 3.5;
  double rician_factor_db = 6.0;
  double noise_power_dbm = -90.0;  // sigma^2
  double tx_power_dbm = 30.0;      // P_t
  double tag_reflection = 1.0;     // alpha, in [0, 1]
  double element_spacing = 0.5;    // in wavelengths
  LosPhaseMode los_phase_mode = LosPhaseMode::kGeometric;

  double wavelength_m() const;
  double rician_factor_linear() const;
  /// Normalized noise power sigma^2 / P_t (linear) from the dBm fields.
  double noise_ratio() const;
  Vec3 position(Endpoint e) const;

  /// Throws ConfigError for out-of-range fields or coincident positions.
  void validate() const;

  /// Key-value document with defaults for every missing key; unknown keys
  /// are rejected.
  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// One fading draw of every link: direct channel h_d, per-subsurface
/// forward (reader->IRS) f and backward (IRS->tag) h_r channels, and the
/// cascaded channel h_c = diag(h_r) f.
struct ChannelRealization {
  Complex h_d;
  ComplexVector f;
  ComplexVector h_r;
  ComplexVector h_c;

  ChannelRealization(Complex h_d_in, ComplexVector f_in, ComplexVector h_r_in);

  Eigen::Index n() const { return h_c.size(); }
};

/// ref_db + 10 * exponent * log10(distance_m / 1 m). Distances below 0.1 m
/// are rejected (near-field guard).
double path_loss_db(double distance_m, double exponent, double ref_db);

/// Element-center positions of the IRS: a single line along the y axis
/// through irs_pos with element_spacing * wavelength between centers,
/// centered on irs_pos; subsurfaces are contiguous groups.
std::vector<Vec3> irs_element_positions(const ScenarioConfig& config);

/// Unit-modulus LOS phasors exp(-j 2 pi d / lambda) for the link a -> b
/// from exact distances. An endpoint equal to kIrs expands to the
/// per-element centers; a point-to-point link yields a single entry.
ComplexVector los_phase_vector(const ScenarioConfig& config, Endpoint a,
                               Endpoint b);

/// sqrt(k/(1+k)) * los + sqrt(1/(1+k)) * w with w iid CN(0, 1); unit mean
/// power per element when |los_i| = 1.
ComplexVector rician_sample(const ComplexVector& los, double k_factor_linear,
                            SeededRng& rng);

/// Element-wise product diag(h_r) * f.
ComplexVector cascade(const ComplexVector& h_r, const ComplexVector& f);

/// Draws one realization of all channels: per-element amplitudes from the
/// distance path loss, Rician fading around the LOS phases, then a coherent
/// sum over each subsurface's elements. Draw order is fixed (h_d, then f
/// elements, then h_r elements) so a seed pins the realization.
ChannelRealization realize_channels(const ScenarioConfig& config,
                                    SeededRng& rng);

}  // namespace irsbc
