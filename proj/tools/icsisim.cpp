// icsisim: Monte Carlo driver for the interfering-channel identification and
// estimation library. Emits CSV only; see README for the column formats.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icsi/array.hpp"
#include "icsi/calibration.hpp"
#include "icsi/csv.hpp"
#include "icsi/experiments.hpp"
#include "icsi/waveform.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path = "out.csv";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string sweep;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "key=value scene file");
  cmd->add_option("--out", args->out_path, "output CSV path");
  cmd->add_option("--seed", args->seed, "override base_seed");
  cmd->add_option("--trials", args->trials, "override trial count");
  cmd->add_option("--sweep", args->sweep, "kind=start:step:stop or kind=a,b,c");
  cmd->add_option("--set", args->overrides, "extra key=value overrides")
      ->take_all();
}

icsi::RadarSceneConfig resolve_config(const CommonArgs& args) {
  icsi::RadarSceneConfig cfg;
  if (!args.config_path.empty()) cfg = icsi::load_config_file(args.config_path);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw icsi::ValidationError("--set expects key=value, got '" + kv + "'");
    icsi::apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.seed) cfg.base_seed = *args.seed;
  if (args.trials) cfg.trials = *args.trials;
  cfg.validate();
  return cfg;
}

std::pair<std::string, icsi::RVec> sweep_or(const CommonArgs& args,
                                            const std::string& fallback) {
  return icsi::parse_sweep(args.sweep.empty() ? fallback : args.sweep);
}

int run(int argc, char** argv) {
  CLI::App app{"interfering-channel simulator"};
  app.require_subcommand(1);

  CommonArgs bp_args;
  std::string bp_covariance;
  auto* bp = app.add_subcommand(
      "beampattern", "transmit power vs angle for a covariance (angle_deg,power_db)");
  add_common(bp, &bp_args);
  bp->add_option("--covariance", bp_covariance,
                 "covariance CSV; omitted = covariance implied by the scene's "
                 "waveform setting");

  CommonArgs design_args;
  double design_m = 16, design_p_r = 1.0, design_theta0 = 0.0, design_width = 10.0;
  double design_grid_step = 1.0;
  auto* design = app.add_subcommand("design-beampattern",
                                    "solve the tracking covariance program");
  add_common(design, &design_args);
  design->add_option("--m", design_m, "radar antennas");
  design->add_option("--p-r", design_p_r, "per-run transmit power");
  design->add_option("--theta0", design_theta0, "beam center, degrees");
  design->add_option("--width", design_width, "3 dB beamwidth, degrees");
  design->add_option("--grid-step", design_grid_step, "constraint grid step, degrees");

  CommonArgs cal_args;
  std::string cal_detector = "rao";
  auto* cal = app.add_subcommand("calibrate", "empirical threshold selection");
  add_common(cal, &cal_args);
  cal->add_option("--detector", cal_detector,
                  "glrt_nlos | rao | rao_special | glrt_los | ed");

  CommonArgs det_args;
  std::string det_detector = "glrt_nlos";
  auto* det = app.add_subcommand("detect", "decision-error probability sweep");
  add_common(det, &det_args);
  det->add_option("--detector", det_detector,
                  "glrt_nlos | rao | rao_special | glrt_los | ed");

  CommonArgs est_args;
  std::string est_estimator = "mle_nlos", est_metric = "frobenius";
  auto* est = app.add_subcommand("estimate", "estimation MSE sweep");
  add_common(est, &est_args);
  est->add_option("--estimator", est_estimator, "mle_nlos | mle_los | blind_los");
  est->add_option("--metric", est_metric, "frobenius | theta | alpha | alpha_sq");

  CommonArgs thy_args;
  std::string thy_quantity = "rao_special";
  auto* thy = app.add_subcommand("theory", "closed-form / saddle-point curves");
  add_common(thy, &thy_args);
  thy->add_option("--quantity", thy_quantity,
                  "glrt | rao_special | ed | mse_searching | mse_tracking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (bp->parsed()) {
    const icsi::RadarSceneConfig cfg = resolve_config(bp_args);
    icsi::CMat r;
    if (!bp_covariance.empty()) {
      r = icsi::read_covariance_csv(bp_covariance);
    } else if (cfg.waveform == "tracking") {
      r = icsi::build_scene(cfg).design.covariance;
    } else {
      r = (cfg.p_r / cfg.m) * icsi::CMat::Identity(cfg.m, cfg.m);
    }
    const auto [kind, grid] = sweep_or(bp_args, "angle=-90:1:90");
    if (kind != "angle")
      throw icsi::ValidationError("beampattern sweeps angles (angle=lo:step:hi)");
    icsi::RVec rad = grid * (icsi::kPi / 180.0);
    icsi::write_beampattern_csv(bp_args.out_path, grid,
                                icsi::beampattern<double>(r, rad, cfg.radar_spacing));
    return 0;
  }

  if (design->parsed()) {
    icsi::SolverOptions opts;
    opts.grid_step_deg = design_grid_step;
    const icsi::TrackingDesign d = icsi::design_tracking_covariance(
        static_cast<int>(design_m), design_p_r, design_theta0, design_width, opts);
    icsi::write_covariance_csv(design_args.out_path, d.covariance);
    std::cout << "margin=" << icsi::format_g17(d.margin)
              << " converged=" << (d.converged ? 1 : 0)
              << " residual=" << icsi::format_g17(d.max_residual) << '\n';
    return 0;
  }

  if (cal->parsed()) {
    const icsi::RadarSceneConfig cfg = resolve_config(cal_args);
    const bool ergodic = cfg.channel_hold == "ergodic";
    if (cal_detector == "ed") {
      icsi::RVec grid = icsi::default_ed_power_grid(cfg);
      if (!cal_args.sweep.empty()) {
        const auto [kind, values] = icsi::parse_sweep(cal_args.sweep);
        if (kind != "threshold")
          throw icsi::ValidationError("calibrate sweeps thresholds");
        grid = values;
      }
      const icsi::EdThresholdSweep sweep = icsi::calibrate_ed_thresholds(
          cfg, grid, cfg.trials, cfg.base_seed, ergodic);
      icsi::write_ed_threshold_csv(cal_args.out_path, sweep.gamma_tilde,
                                   sweep.eta_tilde, sweep.error_prob);
      std::cout << "gamma_tilde=" << icsi::format_g17(sweep.argmin_gamma_tilde)
                << " eta_tilde=" << icsi::format_g17(sweep.argmin_eta_tilde) << '\n';
      return 0;
    }
    icsi::RVec grid = icsi::default_threshold_grid(cal_detector, cfg);
    if (!cal_args.sweep.empty()) {
      const auto [kind, values] = icsi::parse_sweep(cal_args.sweep);
      if (kind != "threshold")
        throw icsi::ValidationError("calibrate sweeps thresholds");
      grid = values;
    }
    const icsi::ThresholdSweep sweep = icsi::calibrate_threshold(
        cal_detector, cfg, grid, cfg.trials, cfg.base_seed, ergodic);
    icsi::write_threshold_csv(cal_args.out_path, sweep.grid, sweep.error_prob);
    std::cout << "gamma=" << icsi::format_g17(sweep.argmin_threshold) << '\n';
    return 0;
  }

  if (det->parsed()) {
    const icsi::RadarSceneConfig cfg = resolve_config(det_args);
    const auto [kind, values] = sweep_or(det_args, "snr=-10:5:15");
    const icsi::ExperimentResult result =
        icsi::run_detection_experiment(cfg, det_detector, kind, values);
    icsi::emit_results(result, det_args.out_path);
    return 0;
  }

  if (est->parsed()) {
    const icsi::RadarSceneConfig cfg = resolve_config(est_args);
    const auto [kind, values] = sweep_or(est_args, "n=4:4:20");
    const icsi::ExperimentResult result = icsi::run_estimation_experiment(
        cfg, est_estimator, est_metric, kind, values);
    icsi::emit_results(result, est_args.out_path);
    return 0;
  }

  const icsi::RadarSceneConfig cfg = resolve_config(thy_args);
  const auto [kind, values] = sweep_or(thy_args, "snr=-10:5:15");
  const icsi::ExperimentResult result =
      icsi::run_theory_curve(cfg, thy_quantity, kind, values);
  icsi::emit_results(result, thy_args.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const icsi::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const icsi::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
