#pragma once

#include <optional>

#include "icsi/types.hpp"

namespace icsi {

// decision: 0 = searching (H0), 1 = tracking (H1). Ties go to H0.
struct DetectionResult {
  double statistic = 0.0;
  int decision = 0;
  double gamma = 0.0;                // lower / only threshold
  std::optional<double> eta;         // upper threshold (energy detector)
  bool pinv_fallback = false;        // a pseudo-inverse had to stand in
};

struct LosDetectionResult : DetectionResult {
  double theta0_hat_deg = 0.0;  // direction fit under the searching hypothesis
  double theta1_hat_deg = 0.0;  // direction fit under the tracking hypothesis
};

// GLRT for the rich-scattering channel. Statistic
//   (1/n0) tr(y (A - B) y^H),  A = x1^H (x1 x1^H)^{-1} x1,  B = (M/(L P_R)) x0^H x0.
// With the mode prior p_d given, the optimal threshold ln((1-p_d)/p_d) is
// used; without it the threshold defaults to 0.
DetectionResult glrt_nlos(const CMat& y, const CMat& x0, const CMat& x1, double n0,
                          std::optional<double> p_d = std::nullopt);

// Rao detector, general antenna counts (requires N >= M). The threshold has
// no closed form; the caller supplies one (see calibration).
DetectionResult rao_nlos(const CMat& y, const CMat& x0, double p_r, double n0,
                         double gamma);

// Equal-antenna Rao detector (M = N <= L): (2/n0) tr(y (I - B) y^H); under H0
// the statistic is central chi-squared with 2N(L-M) degrees of freedom.
DetectionResult rao_special(const CMat& y, const CMat& x0, double p_r, double n0,
                            double gamma);

// GLRT for the line-of-sight channel: difference of direction-concentrated
// matched-filter objectives under the two waveform hypotheses. Grid points
// where the candidate waveform radiates (numerically) no power toward the
// trial angle are skipped.
LosDetectionResult glrt_los(const CMat& y, const CMat& x0, const CMat& x1, double n0,
                            double radar_spacing, double bs_spacing,
                            double gamma = 0.0, double grid_step_deg = 0.5);

// Two-sided energy rule on t = tr(y y^H)/L: searching iff t in
// [gamma_tilde, eta_tilde]. n0 is accepted for interface uniformity; the
// statistic itself is noise-scale free.
DetectionResult energy_detector(const CMat& y, double n0, double gamma_tilde,
                                double eta_tilde);

}  // namespace icsi
