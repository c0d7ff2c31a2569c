#pragma once

#include "icsi/rng.hpp"
#include "icsi/types.hpp"

namespace icsi {

// One PRI worth of radar transmit samples for both operating modes:
// x0 is the omni searching waveform, x1 the directional tracking waveform.
struct WaveformSet {
  CMat x0;
  CMat x1;
  double p_r = 1.0;

  // Checks the defining properties: x0 x0^H = (L P_R / M) I within 1e-8,
  // (1/L) x1 x1^H matches `r_track` within 1e-6 (when given), and both
  // waveforms carry total power L * P_R (trace within 1e-8, per-antenna
  // tracking power within 1e-6).
  void validate(const CMat* r_track = nullptr) const;
};

// Orthogonal searching waveform: sqrt(L P_R / M) times a matrix with
// orthonormal rows (thin QR of a complex Gaussian draw).
CMat searching_waveform(int m, int l, double p_r, Rng& rng);

struct SolverOptions {
  int max_sweeps = 20000;       // Dykstra sweep cap per feasibility probe
  double tol = 1e-7;            // sweep-to-sweep change / feasibility residual
  double bisect_rel_gap = 1e-3; // stop bisection at this relative margin gap
  double half_power_band = 0.02; // +/- band around the 0.5 power ratio
  double diag_load = 1e-3;      // final blend toward (P_R/M) I
  double grid_step_deg = 1.0;   // constraint grid resolution
  double exclusion_deg = 5.0;   // gap between mainlobe edge and sidelobe region
  double spacing = 0.5;         // element spacing in wavelengths
};

struct TrackingDesign {
  CMat covariance;
  double margin = 0.0;          // achieved min over sidelobes of P(theta0) - P(theta)
  bool margin_positive = false;
  bool converged = false;
  int sweeps = 0;               // total Dykstra sweeps over all probes
  double max_residual = 0.0;    // worst constraint violation of the result
};

// Max-margin tracking beampattern covariance: maximize t subject to
// R Hermitian PSD, diag(R) = P_R/M, P(theta0) - P(theta) >= t on the
// sidelobe grid, and P(theta0 +/- width/2) within (0.5 +/- band) P(theta0).
// Solved by bisection on t with cyclic Dykstra projections per probe.
// The margin may legitimately come out negative for small arrays; this is
// reported through `margin_positive` rather than an error.
TrackingDesign design_tracking_covariance(int m, double p_r, double theta0_deg,
                                          double width_deg,
                                          const SolverOptions& opts = {});

// Factor a PSD covariance into a waveform: x1 = sqrt(L) * R^(1/2) * U with U
// a fresh set of orthonormal rows, so (1/L) x1 x1^H = R exactly.
CMat covariance_to_waveform(const CMat& r, int l, Rng& rng);

}  // namespace icsi
