#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "icsi/types.hpp"

namespace icsi {

// One scene = array sizes, power/noise levels, mode prior, channel model and
// seeding. Loaded from a flat key=value file; every field has a CLI override.
struct RadarSceneConfig {
  int m = 16;  // radar antennas
  int n = 16;  // BS antennas
  int l = 20;  // samples per PRI

  double p_r = 1.0;
  std::optional<double> snr_db;  // SNR = P_R / N0; at most one of snr_db/n0
  std::optional<double> n0;      // may disagree, and one must be derivable

  double p_d = 0.9;  // prior probability of the tracking mode

  std::string channel = "nlos";  // "nlos" | "los"
  double theta_deg = 20.0;       // LoS direction
  std::string alpha_mode = "random_phase";  // "random_phase" | "fixed"
  double alpha_abs = 1.0;
  double alpha_phase_deg = 0.0;  // used by alpha_mode=fixed

  double radar_spacing = 0.5;  // wavelengths
  double bs_spacing = 0.5;

  std::uint64_t base_seed = 12345;
  int trials = 1000;

  std::string channel_hold = "fixed";  // "fixed" | "ergodic"
  int pri_horizon = 1;  // ergodic mode: PRIs sharing one channel draw

  double track_theta0_deg = 0.0;  // tracking beam design
  double track_width_deg = 10.0;

  std::string waveform = "searching";  // estimation runs: "searching" | "tracking"
  double grid_step_deg = 0.5;          // direction-scan resolution

  std::optional<double> gamma;        // detector threshold override
  std::optional<double> gamma_tilde;  // energy detector lower threshold
  std::optional<double> eta_tilde;    // energy detector upper threshold

  double resolved_n0() const;
  double resolved_snr_db() const;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

// Flat key=value text (one pair per line, '#' comments, blank lines ignored).
RadarSceneConfig load_config_file(const std::string& path);

// Applies a single "key=value" override; unknown keys are ValidationErrors.
void apply_key_value(RadarSceneConfig& cfg, const std::string& key,
                     const std::string& value);

}  // namespace icsi
