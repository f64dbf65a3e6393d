#include "irsbc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <nlohmann/json.hpp>

namespace irsbc {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kMinDistanceM = 0.1;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Vec3 vec3_from_json(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError("scenario." + key + ": expected [x, y, z]");
  }
  return Vec3{j.at(0).get<double>(), j.at(1).get<double>(),
              j.at(2).get<double>()};
}

nlohmann::json vec3_to_json(const Vec3& v) {
  return nlohmann::json::array({v.x, v.y, v.z});
}

}  // namespace

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double ScenarioConfig::wavelength_m() const {
  return kSpeedOfLight / carrier_freq_hz;
}

double ScenarioConfig::rician_factor_linear() const {
  return db_to_linear(rician_factor_db);
}

double ScenarioConfig::noise_ratio() const {
  return db_to_linear(noise_power_dbm - tx_power_dbm);
}

Vec3 ScenarioConfig::position(Endpoint e) const {
  switch (e) {
    case Endpoint::kReader:
      return reader_pos;
    case Endpoint::kTag:
      return tag_pos;
    case Endpoint::kIrs:
      return irs_pos;
  }
  throw std::invalid_argument("unknown endpoint");
}

void ScenarioConfig::validate() const {
  if (n_subsurfaces < 0) {
    throw ConfigError("scenario.n_subsurfaces must be >= 0");
  }
  if (elements_per_subsurface < 1) {
    throw ConfigError("scenario.elements_per_subsurface must be >= 1");
  }
  if (carrier_freq_hz <= 0.0) {
    throw ConfigError("scenario.carrier_freq_hz must be > 0");
  }
  if (pathloss_exp_reader_irs <= 0.0 || pathloss_exp_irs_tag <= 0.0 ||
      pathloss_exp_reader_tag <= 0.0) {
    throw ConfigError("scenario path-loss exponents must be > 0");
  }
  if (rician_factor_db != rician_factor_db) {  // NaN
    throw ConfigError("scenario.rician_factor_db is NaN");
  }
  if (tag_reflection < 0.0 || tag_reflection > 1.0) {
    throw ConfigError("scenario.tag_reflection must be in [0, 1]");
  }
  if (element_spacing <= 0.0) {
    throw ConfigError("scenario.element_spacing must be > 0");
  }
  if (distance(reader_pos, tag_pos) <= 0.0 ||
      distance(reader_pos, irs_pos) <= 0.0 ||
      distance(tag_pos, irs_pos) <= 0.0) {
    throw ConfigError("scenario positions must be pairwise distinct");
  }
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "reader_pos",
      "tag_pos",
      "irs_pos",
      "n_subsurfaces",
      "elements_per_subsurface",
      "carrier_freq_hz",
      "ref_pathloss_db",
      "pathloss_exp_reader_irs",
      "pathloss_exp_irs_tag",
      "pathloss_exp_reader_tag",
      "rician_factor_db",
      "noise_power_dbm",
      "tx_power_dbm",
      "tag_reflection",
      "element_spacing",
      "los_phase_mode",
  };
  if (!j.is_object()) throw ConfigError("scenario: expected an object");
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("scenario: unknown key '" + item.key() + "'");
    }
  }

  ScenarioConfig c;
  try {
    if (j.contains("reader_pos"))
      c.reader_pos = vec3_from_json(j.at("reader_pos"), "reader_pos");
    if (j.contains("tag_pos"))
      c.tag_pos = vec3_from_json(j.at("tag_pos"), "tag_pos");
    if (j.contains("irs_pos"))
      c.irs_pos = vec3_from_json(j.at("irs_pos"), "irs_pos");
    if (j.contains("n_subsurfaces")) c.n_subsurfaces = j.at("n_subsurfaces");
    if (j.contains("elements_per_subsurface"))
      c.elements_per_subsurface = j.at("elements_per_subsurface");
    if (j.contains("carrier_freq_hz")) c.carrier_freq_hz = j.at("carrier_freq_hz");
    if (j.contains("ref_pathloss_db")) c.ref_pathloss_db = j.at("ref_pathloss_db");
    if (j.contains("pathloss_exp_reader_irs"))
      c.pathloss_exp_reader_irs = j.at("pathloss_exp_reader_irs");
    if (j.contains("pathloss_exp_irs_tag"))
      c.pathloss_exp_irs_tag = j.at("pathloss_exp_irs_tag");
    if (j.contains("pathloss_exp_reader_tag"))
      c.pathloss_exp_reader_tag = j.at("pathloss_exp_reader_tag");
    if (j.contains("rician_factor_db")) c.rician_factor_db = j.at("rician_factor_db");
    if (j.contains("noise_power_dbm")) c.noise_power_dbm = j.at("noise_power_dbm");
    if (j.contains("tx_power_dbm")) c.tx_power_dbm = j.at("tx_power_dbm");
    if (j.contains("tag_reflection")) c.tag_reflection = j.at("tag_reflection");
    if (j.contains("element_spacing")) c.element_spacing = j.at("element_spacing");
    if (j.contains("los_phase_mode")) {
      const std::string mode = j.at("los_phase_mode");
      if (mode == "geometric") {
        c.los_phase_mode = LosPhaseMode::kGeometric;
      } else if (mode == "random_iid") {
        c.los_phase_mode = LosPhaseMode::kRandomIid;
      } else {
        throw ConfigError("scenario.los_phase_mode: expected 'geometric' or 'random_iid'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["reader_pos"] = vec3_to_json(reader_pos);
  j["tag_pos"] = vec3_to_json(tag_pos);
  j["irs_pos"] = vec3_to_json(irs_pos);
  j["n_subsurfaces"] = n_subsurfaces;
  j["elements_per_subsurface"] = elements_per_subsurface;
  j["carrier_freq_hz"] = carrier_freq_hz;
  j["ref_pathloss_db"] = ref_pathloss_db;
  j["pathloss_exp_reader_irs"] = pathloss_exp_reader_irs;
  j["pathloss_exp_irs_tag"] = pathloss_exp_irs_tag;
  j["pathloss_exp_reader_tag"] = pathloss_exp_reader_tag;
  j["rician_factor_db"] = rician_factor_db;
  j["noise_power_dbm"] = noise_power_dbm;
  j["tx_power_dbm"] = tx_power_dbm;
  j["tag_reflection"] = tag_reflection;
  j["element_spacing"] = element_spacing;
  j["los_phase_mode"] =
      los_phase_mode == LosPhaseMode::kGeometric ? "geometric" : "random_iid";
  return j;
}

ChannelRealization::ChannelRealization(Complex h_d_in, ComplexVector f_in,
                                       ComplexVector h_r_in)
    : h_d(h_d_in), f(std::move(f_in)), h_r(std::move(h_r_in)) {
  if (f.size() != h_r.size()) {
    throw DimensionError("ChannelRealization: f has length " +
                         std::to_string(f.size()) + " but h_r has " +
                         std::to_string(h_r.size()));
  }
  h_c = cascade(h_r, f);
  if (!std::isfinite(h_d.real()) || !std::isfinite(h_d.imag()) ||
      !all_finite(f) || !all_finite(h_r)) {
    throw std::invalid_argument("ChannelRealization: non-finite entry");
  }
}

double path_loss_db(double distance_m, double exponent, double ref_db) {
  if (distance_m < kMinDistanceM) {
    throw ConfigError("path_loss_db: distance " + std::to_string(distance_m) +
                      " m below the 0.1 m near-field guard");
  }
  return ref_db + 10.0 * exponent * std::log10(distance_m);
}

std::vector<Vec3> irs_element_positions(const ScenarioConfig& config) {
  const Eigen::Index total =
      static_cast<Eigen::Index>(config.n_subsurfaces) *
      config.elements_per_subsurface;
  const double spacing_m = config.element_spacing * config.wavelength_m();
  std::vector<Vec3> out;
  out.reserve(total);
  for (Eigen::Index m = 0; m < total; ++m) {
    const double offset =
        (static_cast<double>(m) - static_cast<double>(total - 1) / 2.0) *
        spacing_m;
    out.push_back(Vec3{config.irs_pos.x, config.irs_pos.y + offset,
                       config.irs_pos.z});
  }
  return out;
}

ComplexVector los_phase_vector(const ScenarioConfig& config, Endpoint a,
                               Endpoint b) {
  if (a == Endpoint::kIrs && b == Endpoint::kIrs) {
    throw std::invalid_argument("los_phase_vector: both endpoints are the IRS");
  }
  const double lambda = config.wavelength_m();
  const double two_pi = 2.0 * std::numbers::pi;
  if (a != Endpoint::kIrs && b != Endpoint::kIrs) {
    const double d = distance(config.position(a), config.position(b));
    ComplexVector out(1);
    out(0) = std::polar(1.0, -two_pi * d / lambda);
    return out;
  }
  const Vec3 point = config.position(a == Endpoint::kIrs ? b : a);
  const std::vector<Vec3> elements = irs_element_positions(config);
  ComplexVector out(static_cast<Eigen::Index>(elements.size()));
  for (std::size_t m = 0; m < elements.size(); ++m) {
    const double d = distance(point, elements[m]);
    out(static_cast<Eigen::Index>(m)) = std::polar(1.0, -two_pi * d / lambda);
  }
  return out;
}

ComplexVector rician_sample(const ComplexVector& los, double k_factor_linear,
                            SeededRng& rng) {
  if (k_factor_linear < 0.0) {
    throw std::invalid_argument("rician_sample: negative Rician factor");
  }
  const double los_scale = std::sqrt(k_factor_linear / (1.0 + k_factor_linear));
  const double nlos_scale = std::sqrt(1.0 / (1.0 + k_factor_linear));
  ComplexVector out(los.size());
  for (Eigen::Index i = 0; i < los.size(); ++i) {
    out(i) = los_scale * los(i) + nlos_scale * rng.standard_complex_gaussian();
  }
  return out;
}

ComplexVector cascade(const ComplexVector& h_r, const ComplexVector& f) {
  if (h_r.size() != f.size()) {
    throw DimensionError("cascade: length mismatch " +
                         std::to_string(h_r.size()) + " vs " +
                         std::to_string(f.size()));
  }
  return h_r.cwiseProduct(f);
}

ChannelRealization realize_channels(const ScenarioConfig& config,
                                    SeededRng& rng) {
  config.validate();
  const double kappa = config.rician_factor_linear();
  const double two_pi = 2.0 * std::numbers::pi;

  const auto los_for = [&](Endpoint a, Endpoint b,
                           Eigen::Index entries) -> ComplexVector {
    if (config.los_phase_mode == LosPhaseMode::kGeometric) {
      return los_phase_vector(config, a, b);
    }
    ComplexVector out(entries);
    for (Eigen::Index i = 0; i < entries; ++i) {
      out(i) = std::polar(1.0, rng.uniform(0.0, two_pi));
    }
    return out;
  };

  // Direct reader<->tag link, a single element.
  const double d_rt = distance(config.reader_pos, config.tag_pos);
  const double amp_rt = std::sqrt(db_to_linear(-path_loss_db(
      d_rt, config.pathloss_exp_reader_tag, config.ref_pathloss_db)));
  const ComplexVector los_d = los_for(Endpoint::kReader, Endpoint::kTag, 1);
  const Complex h_d = amp_rt * rician_sample(los_d, kappa, rng)(0);

  const std::vector<Vec3> elements = irs_element_positions(config);
  const Eigen::Index total = static_cast<Eigen::Index>(elements.size());

  // Per-element amplitudes from exact element distances.
  Eigen::VectorXd amp_f(total), amp_r(total);
  for (Eigen::Index m = 0; m < total; ++m) {
    const double d_re = distance(config.reader_pos, elements[m]);
    const double d_et = distance(elements[m], config.tag_pos);
    amp_f(m) = std::sqrt(db_to_linear(-path_loss_db(
        d_re, config.pathloss_exp_reader_irs, config.ref_pathloss_db)));
    amp_r(m) = std::sqrt(db_to_linear(-path_loss_db(
        d_et, config.pathloss_exp_irs_tag, config.ref_pathloss_db)));
  }

  // Forward fading first, then backward: the draw order is part of the
  // seed contract.
  const ComplexVector fading_f =
      rician_sample(los_for(Endpoint::kReader, Endpoint::kIrs, total), kappa, rng);
  const ComplexVector fading_r =
      rician_sample(los_for(Endpoint::kIrs, Endpoint::kTag, total), kappa, rng);
  const ComplexVector f_elems = amp_f.cast<Complex>().cwiseProduct(fading_f);
  const ComplexVector r_elems = amp_r.cast<Complex>().cwiseProduct(fading_r);

  // Coherent sum per subsurface: elements share one reflection coefficient.
  const int per = config.elements_per_subsurface;
  ComplexVector f(config.n_subsurfaces), h_r(config.n_subsurfaces);
  for (int n = 0; n < config.n_subsurfaces; ++n) {
    f(n) = f_elems.segment(static_cast<Eigen::Index>(n) * per, per).sum();
    h_r(n) = r_elems.segment(static_cast<Eigen::Index>(n) * per, per).sum();
  }
  return ChannelRealization(h_d, std::move(f), std::move(h_r));
}

}  // namespace irsbc
