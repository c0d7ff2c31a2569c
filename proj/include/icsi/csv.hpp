#pragma once

#include <string>

#include "icsi/types.hpp"

namespace icsi {

// Round-trip-exact decimal formatting (%.17g).
std::string format_g17(double v);

// Hermitian covariance as text: one row per line, each entry "re,im", so a
// row holds 2M comma-separated numbers.
void write_covariance_csv(const std::string& path, const CMat& r);
CMat read_covariance_csv(const std::string& path);

// `angle_deg,power_db` rows; power floors at 1e-30 before the dB conversion.
void write_beampattern_csv(const std::string& path, const RVec& angles_deg,
                           const RVec& power);

// `threshold,error_prob` rows.
void write_threshold_csv(const std::string& path, const RVec& thresholds,
                         const RVec& error_prob);

// `gamma_tilde,eta_tilde,error_prob` rows (energy-detector pairs).
void write_ed_threshold_csv(const std::string& path, const RVec& gamma_tilde,
                            const RVec& eta_tilde, const RVec& error_prob);

}  // namespace icsi
