#include "icsi/calibration.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "icsi/detectors.hpp"
#include "icsi/experiments.hpp"

namespace icsi {

namespace {

void check_common(const RVec& grid, int trials) {
  if (trials < 100)
    throw ValidationError("calibration needs at least 100 trials per point");
  if (grid.size() < 1) throw ValidationError("calibration grid is empty");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1)))
      throw ValidationError("calibration grid must be strictly ascending");
}

// Per-trial (statistic, true mode) pairs, drawn once and swept over every
// candidate threshold with common random numbers.
struct TrialStats {
  std::vector<double> statistic;
  std::vector<int> mode;
};

TrialStats simulate_statistics(const std::string& detector_id,
                               const RadarSceneConfig& scene, int trials,
                               std::uint64_t base_seed, bool ergodic) {
  const SceneContext ctx = build_scene(scene);
  RadarSceneConfig pt = scene;
  pt.base_seed = base_seed;
  pt.channel_hold = ergodic ? "ergodic" : "fixed";
  if (ergodic) pt.pri_horizon = 1;
  const double n0 = pt.resolved_n0();

  TrialStats out;
  out.statistic.reserve(static_cast<std::size_t>(trials));
  out.mode.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const TrialDraw d = draw_trial(ctx, pt, static_cast<std::uint64_t>(t));
    double stat;
    if (detector_id == "glrt_nlos")
      stat = glrt_nlos(d.y, ctx.x0, ctx.x1, n0).statistic;
    else if (detector_id == "rao")
      stat = rao_nlos(d.y, ctx.x0, pt.p_r, n0, 0.0).statistic;
    else if (detector_id == "rao_special")
      stat = rao_special(d.y, ctx.x0, pt.p_r, n0, 0.0).statistic;
    else if (detector_id == "glrt_los")
      stat = glrt_los(d.y, ctx.x0, ctx.x1, n0, pt.radar_spacing, pt.bs_spacing, 0.0,
                      pt.grid_step_deg)
                 .statistic;
    else if (detector_id == "ed")
      stat = energy_detector(d.y, n0, 0.0, std::numeric_limits<double>::infinity())
                 .statistic;
    else
      throw ValidationError("unknown detector '" + detector_id + "'");
    out.statistic.push_back(stat);
    out.mode.push_back(d.mode);
  }
  return out;
}

}  // namespace

ThresholdSweep calibrate_threshold(const std::string& detector_id,
                                   const RadarSceneConfig& scene, const RVec& grid,
                                   int trials, std::uint64_t base_seed, bool ergodic) {
  scene.validate();
  check_common(grid, trials);
  if (detector_id == "ed")
    throw ValidationError(
        "the energy detector calibrates a threshold pair; use "
        "calibrate_ed_thresholds");
  const TrialStats stats = simulate_statistics(detector_id, scene, trials, base_seed,
                                               ergodic);

  ThresholdSweep sweep;
  sweep.grid = grid;
  sweep.error_prob.resize(grid.size());
  sweep.trials_per_point = trials;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double gamma = grid(i);
    int errors = 0;
    for (int t = 0; t < trials; ++t) {
      const int decision = stats.statistic[static_cast<std::size_t>(t)] > gamma ? 1 : 0;
      errors += (decision != stats.mode[static_cast<std::size_t>(t)]) ? 1 : 0;
    }
    const double p = static_cast<double>(errors) / trials;
    sweep.error_prob(i) = p;
    if (p < best) {  // strict: ties keep the smallest threshold
      best = p;
      sweep.argmin_threshold = gamma;
    }
  }
  return sweep;
}

EdThresholdSweep calibrate_ed_thresholds(const RadarSceneConfig& scene,
                                         const RVec& power_grid, int trials,
                                         std::uint64_t base_seed, bool ergodic) {
  scene.validate();
  check_common(power_grid, trials);
  if (power_grid.size() < 2)
    throw ValidationError("energy-detector calibration needs >= 2 grid points");
  if (power_grid(0) <= 0)
    throw ValidationError("energy-detector power grid must be positive");
  const TrialStats stats =
      simulate_statistics("ed", scene, trials, base_seed, ergodic);

  const Eigen::Index g = power_grid.size();
  const Eigen::Index pairs = g * (g - 1) / 2;
  EdThresholdSweep sweep;
  sweep.gamma_tilde.resize(pairs);
  sweep.eta_tilde.resize(pairs);
  sweep.error_prob.resize(pairs);
  sweep.trials_per_point = trials;
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = i + 1; j < g; ++j, ++k) {
      const double lo = power_grid(i), hi = power_grid(j);
      int errors = 0;
      for (int t = 0; t < trials; ++t) {
        const double s = stats.statistic[static_cast<std::size_t>(t)];
        const int decision = (s >= lo && s <= hi) ? 0 : 1;
        errors += (decision != stats.mode[static_cast<std::size_t>(t)]) ? 1 : 0;
      }
      const double p = static_cast<double>(errors) / trials;
      sweep.gamma_tilde(k) = lo;
      sweep.eta_tilde(k) = hi;
      sweep.error_prob(k) = p;
      if (p < best) {
        best = p;
        sweep.argmin_gamma_tilde = lo;
        sweep.argmin_eta_tilde = hi;
      }
    }
  }
  return sweep;
}

RVec log_spaced_grid(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo)) throw ValidationError("log grid needs 0 < lo < hi");
  if (count < 2) throw ValidationError("log grid needs count >= 2");
  RVec grid(count);
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) grid(i) = lo * std::exp(step * i);
  grid(count - 1) = hi;
  return grid;
}

RVec default_threshold_grid(const std::string& detector_id,
                            const RadarSceneConfig& scene) {
  if (detector_id == "rao" || detector_id == "rao_special") {
    const double k = std::max(2.0, 2.0 * scene.n * (scene.l - scene.m));
    return log_spaced_grid(k / 10.0, 10.0 * k, 101);
  }
  if (detector_id == "glrt_nlos" || detector_id == "glrt_los") {
    RVec grid(101);
    for (int i = 0; i < 101; ++i) grid(i) = -10.0 + 0.2 * i;
    return grid;
  }
  if (detector_id == "ed") return default_ed_power_grid(scene);
  throw ValidationError("unknown detector '" + detector_id + "'");
}

RVec default_ed_power_grid(const RadarSceneConfig& scene) {
  const double center = scene.n * (scene.p_r + scene.resolved_n0());
  return log_spaced_grid(0.05 * center, 5.0 * center, 41);
}

}  // namespace icsi
