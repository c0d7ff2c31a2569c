#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icsi/channel.hpp"
#include "icsi/config.hpp"
#include "icsi/types.hpp"
#include "icsi/waveform.hpp"

namespace icsi {

// Deterministically derived per-run state: the waveform pair and the tracking
// design it came from. Runs that never transmit the tracking waveform (e.g.
// searching-only estimation) may skip the design work.
struct SceneContext {
  RadarSceneConfig cfg;
  CMat x0;
  CMat x1;
  TrackingDesign design;
};

SceneContext build_scene(const RadarSceneConfig& cfg, bool with_tracking = true);

// Everything one Monte Carlo trial draws: the PRI mode, the channel, and the
// received block y = g x_mode + w. `point` carries per-sweep-point overrides
// (noise level, LoS angle); trial_key separates substreams.
struct TrialDraw {
  int mode = 0;
  ChannelRealization channel;
  CMat y;
};

TrialDraw draw_trial(const SceneContext& ctx, const RadarSceneConfig& point,
                     std::uint64_t trial_key);

struct ExperimentResult {
  std::string sweep_kind;
  RVec sweep;
  RVec empirical;
  RVec ci_halfwidth;
  std::vector<std::optional<double>> theory;
  int trials = 0;
  std::uint64_t seed = 0;
  double runtime_s = 0.0;
};

// Decision-error probability per sweep point for one detector.
// detector_id: "glrt_nlos" | "rao" | "rao_special" | "glrt_los" | "ed".
// sweep_kind: "snr" (dB), "angle" (LoS theta, deg) or "threshold" (delegates
// to calibration with common random numbers). Thresholds come from the config
// when set, otherwise: GLRT uses its closed-form optimum, the equal-antenna
// Rao detector its theory optimum (fixed channels) or an auto-calibrated
// value, the energy detector its default pair. Theory curves are attached
// where a closed form exists for the configured scene.
ExperimentResult run_detection_experiment(const RadarSceneConfig& cfg,
                                          const std::string& detector_id,
                                          const std::string& sweep_kind,
                                          const RVec& sweep_values);

// Estimation MSE per sweep point.
// estimator_id: "mle_nlos" | "mle_los" | "blind_los";
// metric: "frobenius" | "theta" | "alpha" | "alpha_sq";
// sweep_kind: "n" (BS antennas) or "snr" (dB).
ExperimentResult run_estimation_experiment(const RadarSceneConfig& cfg,
                                           const std::string& estimator_id,
                                           const std::string& metric,
                                           const std::string& sweep_kind,
                                           const RVec& sweep_values);

// Theory-only curves (no simulation): quantity is "glrt", "rao_special",
// "ed", "mse_searching" or "mse_tracking".
ExperimentResult run_theory_curve(const RadarSceneConfig& cfg,
                                  const std::string& quantity,
                                  const std::string& sweep_kind,
                                  const RVec& sweep_values);

// CSV `sweep,empirical,ci_halfwidth,theory,trials,seed`, one row per point,
// %.17g formatting, empty string where a column is undefined.
void emit_results(const ExperimentResult& result, const std::string& path);

// Wilson 95% score-interval half-width for a binomial proportion.
double wilson_halfwidth(double p_hat, int n);

// "snr=-10:5:10" or "n=4,8,12" -> kind + values.
std::pair<std::string, RVec> parse_sweep(const std::string& spec);

}  // namespace icsi
