#pragma once

#include "icsi/types.hpp"

namespace icsi {

struct NlosEstimate {
  CMat g_hat;
  bool pinv_fallback = false;
};

// Least-squares / ML channel estimate g_hat = y x^H (x x^H)^{-1}.
NlosEstimate mle_nlos(const CMat& y, const CMat& x);

// Direction scan shared by the ML estimator and the LoS GLRT: maximize
// |b(theta)^H y x^H a(theta)|^2 / (N L a^H R_x a) over the angle grid with
// golden-section refinement. `objective` is the maximized value.
struct LosScan {
  double theta_deg = 0.0;
  double objective = 0.0;
  Cplx alpha_hat{0.0, 0.0};
};

LosScan scan_los_objective(const CMat& y, const CMat& x, double radar_spacing,
                           double bs_spacing, double grid_step_deg = 0.5);

struct LosMlEstimate {
  double theta_hat_deg = 0.0;
  Cplx alpha_hat{0.0, 0.0};
  double cost_at_min = 0.0;  // ||y - alpha_hat b a^H x||_F^2, >= 0
};

// ML fit of the line-of-sight pair (theta, alpha): coarse grid over
// [-90, 90] degrees followed by golden-section refinement to 1e-3 deg.
// Grid angles toward which x radiates less than 1e-12 of its power are
// skipped; if every angle is skipped the fit fails.
LosMlEstimate mle_los(const CMat& y, const CMat& x, double radar_spacing,
                      double bs_spacing, double grid_step_deg = 0.5);

struct LosBlindEstimate {
  double theta_hat_deg = 0.0;
  double alpha_sq_hat = 0.0;  // |alpha|^2 estimate, clamped at 0
  bool degenerate = false;    // energy fell below the noise floor estimate
};

// Waveform-agnostic fit from received energy only: |alpha|^2 from the total
// power budget, direction from the dominant receive-side quadratic form
// b(theta)^H (y y^H) b(theta). When the energy estimate clamps to zero the
// direction is not identifiable; theta_hat_deg is NaN and `degenerate` set.
LosBlindEstimate blind_los(const CMat& y, double p_r, double n0,
                           double bs_spacing, double grid_step_deg = 0.5);

inline double squared_error(const CMat& a, const CMat& b) {
  return (a - b).squaredNorm();
}
inline double squared_error(Cplx a, Cplx b) { return std::norm(a - b); }
inline double squared_error_angular_deg(double a_deg, double b_deg) {
  const double d = a_deg - b_deg;
  return d * d;
}

}  // namespace icsi
