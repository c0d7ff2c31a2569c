#include "icsi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace icsi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': cannot parse number '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': cannot parse integer '" + value + "'");
  }
}

}  // namespace

double RadarSceneConfig::resolved_n0() const {
  if (n0) {
    if (!(*n0 > 0)) throw ValidationError("config field n0: must be positive");
    return *n0;
  }
  if (snr_db) return p_r / std::pow(10.0, *snr_db / 10.0);
  throw ValidationError("config: one of n0 or snr_db is required");
}

double RadarSceneConfig::resolved_snr_db() const {
  return 10.0 * std::log10(p_r / resolved_n0());
}

void RadarSceneConfig::validate() const {
  if (m <= 2) throw ValidationError("config field m: must exceed 2");
  if (n < 1) throw ValidationError("config field n: must be >= 1");
  if (l < m) throw ValidationError("config field l: must be >= m");
  if (l < n) throw ValidationError("config field l: must be >= n");
  if (!(p_r > 0)) throw ValidationError("config field p_r: must be positive");
  if (!(p_d >= 0 && p_d <= 1)) throw ValidationError("config field p_d: must lie in [0, 1]");
  if (channel != "nlos" && channel != "los")
    throw ValidationError("config field channel: expected 'nlos' or 'los'");
  if (alpha_mode != "random_phase" && alpha_mode != "fixed")
    throw ValidationError("config field alpha_mode: expected 'random_phase' or 'fixed'");
  if (!(alpha_abs >= 0)) throw ValidationError("config field alpha_abs: must be >= 0");
  if (theta_deg < -90 || theta_deg > 90)
    throw ValidationError("config field theta_deg: must lie in [-90, 90]");
  if (!(radar_spacing > 0))
    throw ValidationError("config field radar_spacing: must be positive");
  if (!(bs_spacing > 0)) throw ValidationError("config field bs_spacing: must be positive");
  if (trials < 1) throw ValidationError("config field trials: must be >= 1");
  if (channel_hold != "fixed" && channel_hold != "ergodic")
    throw ValidationError("config field channel_hold: expected 'fixed' or 'ergodic'");
  if (pri_horizon < 1) throw ValidationError("config field pri_horizon: must be >= 1");
  if (track_theta0_deg < -90 || track_theta0_deg > 90)
    throw ValidationError("config field track_theta0_deg: must lie in [-90, 90]");
  if (!(track_width_deg > 0) || track_width_deg >= 180)
    throw ValidationError("config field track_width_deg: must lie in (0, 180)");
  if (waveform != "searching" && waveform != "tracking")
    throw ValidationError("config field waveform: expected 'searching' or 'tracking'");
  if (!(grid_step_deg > 0))
    throw ValidationError("config field grid_step_deg: must be positive");
  if (gamma_tilde && !(*gamma_tilde >= 0))
    throw ValidationError("config field gamma_tilde: must be >= 0");
  if (gamma_tilde && eta_tilde && !(*eta_tilde >= *gamma_tilde))
    throw ValidationError("config field eta_tilde: must be >= gamma_tilde");
  if (n0 && snr_db) {
    const double implied = p_r / std::pow(10.0, *snr_db / 10.0);
    if (std::abs(implied - *n0) > 1e-9 * implied)
      throw ValidationError("config fields snr_db and n0 disagree (SNR = P_R / N0)");
  }
  // A missing noise level is legal here: SNR sweeps supply it per sweep
  // point. resolved_n0() rejects it wherever a level is actually consumed.
  if (n0 || snr_db) resolved_n0();
}

void apply_key_value(RadarSceneConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "m")
    cfg.m = static_cast<int>(parse_int(key, value));
  else if (key == "n")
    cfg.n = static_cast<int>(parse_int(key, value));
  else if (key == "l")
    cfg.l = static_cast<int>(parse_int(key, value));
  else if (key == "p_r")
    cfg.p_r = parse_real(key, value);
  else if (key == "snr_db")
    cfg.snr_db = parse_real(key, value);
  else if (key == "n0")
    cfg.n0 = parse_real(key, value);
  else if (key == "p_d")
    cfg.p_d = parse_real(key, value);
  else if (key == "channel")
    cfg.channel = value;
  else if (key == "theta_deg")
    cfg.theta_deg = parse_real(key, value);
  else if (key == "alpha_mode")
    cfg.alpha_mode = value;
  else if (key == "alpha_abs")
    cfg.alpha_abs = parse_real(key, value);
  else if (key == "alpha_phase_deg")
    cfg.alpha_phase_deg = parse_real(key, value);
  else if (key == "radar_spacing")
    cfg.radar_spacing = parse_real(key, value);
  else if (key == "bs_spacing")
    cfg.bs_spacing = parse_real(key, value);
  else if (key == "seed")
    cfg.base_seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "trials")
    cfg.trials = static_cast<int>(parse_int(key, value));
  else if (key == "channel_hold")
    cfg.channel_hold = value;
  else if (key == "pri_horizon")
    cfg.pri_horizon = static_cast<int>(parse_int(key, value));
  else if (key == "track_theta0_deg")
    cfg.track_theta0_deg = parse_real(key, value);
  else if (key == "track_width_deg")
    cfg.track_width_deg = parse_real(key, value);
  else if (key == "waveform")
    cfg.waveform = value;
  else if (key == "grid_step_deg")
    cfg.grid_step_deg = parse_real(key, value);
  else if (key == "gamma")
    cfg.gamma = parse_real(key, value);
  else if (key == "gamma_tilde")
    cfg.gamma_tilde = parse_real(key, value);
  else if (key == "eta_tilde")
    cfg.eta_tilde = parse_real(key, value);
  else
    throw ValidationError("unknown config key '" + key + "'");
}

RadarSceneConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  RadarSceneConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config file '" << path << "' line " << line_no << ": expected key=value";
      throw ValidationError(msg.str());
    }
    apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace icsi
