#pragma once

#include <cstdint>
#include <string>

#include "icsi/config.hpp"
#include "icsi/types.hpp"

namespace icsi {

struct ThresholdSweep {
  RVec grid;
  RVec error_prob;
  double argmin_threshold = 0.0;
  int trials_per_point = 0;
};

// Empirical threshold selection for detectors without an analytic threshold.
// detector_id: "glrt_nlos" | "rao" | "rao_special" | "glrt_los".
// Per-trial statistics are simulated once and swept over the grid (common
// random numbers across grid points). `ergodic` draws a fresh channel each
// trial; otherwise one fixed realization is used throughout. Ties at the
// minimum go to the smallest threshold.
ThresholdSweep calibrate_threshold(const std::string& detector_id,
                                   const RadarSceneConfig& scene, const RVec& grid,
                                   int trials, std::uint64_t base_seed, bool ergodic);

// The energy detector needs a (lower, upper) pair; the sweep enumerates all
// ordered pairs from one power grid.
struct EdThresholdSweep {
  RVec gamma_tilde;
  RVec eta_tilde;
  RVec error_prob;
  double argmin_gamma_tilde = 0.0;
  double argmin_eta_tilde = 0.0;
  int trials_per_point = 0;
};

EdThresholdSweep calibrate_ed_thresholds(const RadarSceneConfig& scene,
                                         const RVec& power_grid, int trials,
                                         std::uint64_t base_seed, bool ergodic);

RVec log_spaced_grid(double lo, double hi, int count);

// Default grids: Rao sweeps 101 log-spaced points on [K/10, 10K] with
// K = 2N(L-M) the null degrees of freedom; the GLRTs sweep 101 linear points
// on [-10, 10] (their statistics are signed); the energy detector uses a
// 41-point log grid bracketing the expected received power N(P_R + N0).
RVec default_threshold_grid(const std::string& detector_id,
                            const RadarSceneConfig& scene);
RVec default_ed_power_grid(const RadarSceneConfig& scene);

}  // namespace icsi
