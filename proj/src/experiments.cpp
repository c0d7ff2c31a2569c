#include "icsi/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "icsi/calibration.hpp"
#include "icsi/csv.hpp"
#include "icsi/detectors.hpp"
#include "icsi/estimators.hpp"
#include "icsi/theory.hpp"

namespace icsi {

SceneContext build_scene(const RadarSceneConfig& cfg, bool with_tracking) {
  cfg.validate();
  SceneContext ctx;
  ctx.cfg = cfg;
  Rng search_rng(mix_seed(cfg.base_seed, 0, Stream::SearchWaveform));
  ctx.x0 = searching_waveform(cfg.m, cfg.l, cfg.p_r, search_rng);
  if (with_tracking) {
    SolverOptions opts;
    opts.spacing = cfg.radar_spacing;
    ctx.design = design_tracking_covariance(cfg.m, cfg.p_r, cfg.track_theta0_deg,
                                            cfg.track_width_deg, opts);
    Rng track_rng(mix_seed(cfg.base_seed, 0, Stream::TrackWaveform));
    ctx.x1 = covariance_to_waveform(ctx.design.covariance, cfg.l, track_rng);
  }
  return ctx;
}

namespace {

Cplx draw_alpha(const RadarSceneConfig& point, std::uint64_t base_seed,
                std::uint64_t trial_key) {
  double phase;
  if (point.alpha_mode == "random_phase") {
    Rng rng(mix_seed(base_seed, trial_key, Stream::AlphaPhase));
    phase = rng.uniform(0.0, 2.0 * kPi);
  } else {
    phase = deg2rad(point.alpha_phase_deg);
  }
  return point.alpha_abs * Cplx(std::cos(phase), std::sin(phase));
}

ChannelRealization draw_channel(const RadarSceneConfig& point, std::uint64_t base_seed,
                                std::uint64_t trial_key) {
  if (point.channel == "nlos") {
    const std::uint64_t chan_key =
        point.channel_hold == "fixed"
            ? 0
            : trial_key / static_cast<std::uint64_t>(point.pri_horizon);
    Rng rng(mix_seed(base_seed, chan_key, Stream::Channel));
    return sample_nlos_channel(point.n, point.m, rng);
  }
  // The LoS geometry is fixed by config; the unit-modulus path factor's phase
  // is re-drawn every PRI.
  return make_los_channel(deg2rad(point.theta_deg),
                          draw_alpha(point, base_seed, trial_key), point.n, point.m,
                          point.radar_spacing, point.bs_spacing);
}

}  // namespace

TrialDraw draw_trial(const SceneContext& ctx, const RadarSceneConfig& point,
                     std::uint64_t trial_key) {
  TrialDraw d;
  Rng mode_rng(mix_seed(point.base_seed, trial_key, Stream::Mode));
  d.mode = sample_pri_mode(point.p_d, mode_rng);
  d.channel = draw_channel(point, point.base_seed, trial_key);
  Rng noise_rng(mix_seed(point.base_seed, trial_key, Stream::Noise));
  d.y = synthesize_rx(d.channel.gain(), d.mode ? ctx.x1 : ctx.x0,
                      point.resolved_n0(), noise_rng);
  return d;
}

double wilson_halfwidth(double p_hat, int n) {
  if (n < 1) throw ValidationError("wilson_halfwidth: need n >= 1");
  if (!(p_hat >= 0 && p_hat <= 1))
    throw ValidationError("wilson_halfwidth: p_hat must lie in [0, 1]");
  constexpr double z = 1.959963984540054;  // 97.5% standard-normal quantile
  const double z2 = z * z;
  const double nn = static_cast<double>(n);
  return z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) /
         (1.0 + z2 / nn);
}

std::pair<std::string, RVec> parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ValidationError("sweep '" + spec + "': expected kind=values");
  const std::string kind = spec.substr(0, eq);
  if (kind.empty()) throw ValidationError("sweep '" + spec + "': missing kind");
  const std::string body = spec.substr(eq + 1);
  if (body.empty()) throw ValidationError("sweep '" + spec + "': empty value list");
  auto parse_num = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ValidationError("sweep '" + spec + "': cannot parse number '" + s + "'");
    }
  };
  std::vector<double> values;
  if (body.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(body);
    std::string piece;
    while (std::getline(ss, piece, ':')) parts.push_back(piece);
    if (parts.size() != 3)
      throw ValidationError("sweep '" + spec + "': ranges are start:step:stop");
    const double start = parse_num(parts[0]);
    const double step = parse_num(parts[1]);
    const double stop = parse_num(parts[2]);
    if (!(step > 0) || stop < start)
      throw ValidationError("sweep '" + spec + "': need step > 0 and stop >= start");
    for (double v = start; v <= stop + 1e-9 * std::max(1.0, std::abs(stop)); v += step)
      values.push_back(v);
  } else {
    std::stringstream ss(body);
    std::string piece;
    while (std::getline(ss, piece, ',')) values.push_back(parse_num(piece));
  }
  if (values.empty()) throw ValidationError("sweep '" + spec + "': no values");
  RVec out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = values[i];
  return {kind, out};
}

namespace {

RadarSceneConfig point_config(const RadarSceneConfig& cfg, const std::string& sweep_kind,
                              double value) {
  RadarSceneConfig pt = cfg;
  if (sweep_kind == "snr") {
    pt.n0.reset();
    pt.snr_db = value;
  } else if (sweep_kind == "angle") {
    if (cfg.channel != "los")
      throw ValidationError("angle sweeps need channel=los");
    pt.theta_deg = value;
  } else if (sweep_kind == "n") {
    pt.n = static_cast<int>(std::lround(value));
  } else {
    throw ValidationError("unsupported sweep kind '" + sweep_kind + "'");
  }
  pt.validate();
  return pt;
}

// Fixed-channel realization an experiment's theory curves refer to.
CMat fixed_channel_gain(const SceneContext& ctx, const RadarSceneConfig& point) {
  return draw_channel(point, point.base_seed, 0).gain();
}

struct DetectorRun {
  double gamma = 0.0;
  double eta_tilde = 0.0;  // energy detector only
};

DetectorRun resolve_thresholds(const std::string& detector_id, const SceneContext& ctx,
                               const RadarSceneConfig& pt) {
  DetectorRun run;
  const double n0 = pt.resolved_n0();
  if (detector_id == "glrt_nlos" || detector_id == "glrt_los") {
    run.gamma = pt.gamma ? *pt.gamma
                         : (detector_id == "glrt_nlos" ? glrt_optimal_gamma(pt.p_d) : 0.0);
  } else if (detector_id == "rao_special" || detector_id == "rao") {
    if (pt.gamma) {
      run.gamma = *pt.gamma;
    } else if (detector_id == "rao_special" && pt.channel == "nlos" &&
               pt.channel_hold == "fixed") {
      run.gamma = rao_special_optimal_gamma(fixed_channel_gain(ctx, pt), ctx.x0, ctx.x1,
                                            n0, pt.p_d);
    } else {
      // No closed form: auto-calibrate on an offset seed stream so the
      // selected threshold is independent of the scored trials.
      const RVec grid = default_threshold_grid(detector_id, pt);
      const int cal_trials = std::max(100, std::min(pt.trials, 2000));
      const ThresholdSweep sweep =
          calibrate_threshold(detector_id, pt, grid, cal_trials,
                              pt.base_seed ^ 0x5bd1e995u,
                              pt.channel_hold == "ergodic");
      run.gamma = sweep.argmin_threshold;
    }
  } else if (detector_id == "ed") {
    run.gamma = pt.gamma_tilde ? *pt.gamma_tilde : ed_default_gamma_tilde(pt.n, pt.p_r, n0);
    run.eta_tilde = pt.eta_tilde ? *pt.eta_tilde : ed_default_eta_tilde(pt.n, pt.p_r, n0);
  } else {
    throw ValidationError("unknown detector '" + detector_id + "'");
  }
  return run;
}

std::optional<double> theory_for_point(const std::string& detector_id,
                                       const SceneContext& ctx,
                                       const RadarSceneConfig& pt,
                                       const DetectorRun& run) {
  const double n0 = pt.resolved_n0();
  try {
    if (detector_id == "glrt_nlos" && pt.channel == "nlos" &&
        pt.channel_hold == "fixed") {
      return glrt_error_prob(fixed_channel_gain(ctx, pt), ctx.x0, ctx.x1, n0, pt.p_d,
                             run.gamma);
    }
    if (detector_id == "rao_special" && pt.channel == "nlos" &&
        pt.channel_hold == "fixed") {
      return rao_special_error_prob(fixed_channel_gain(ctx, pt), ctx.x0, ctx.x1, n0,
                                    pt.p_d, run.gamma);
    }
    if (detector_id == "ed" && pt.channel == "los") {
      return ed_error_prob(pt.alpha_abs, deg2rad(pt.theta_deg), ctx.x1, n0, pt.p_r,
                           pt.n, pt.p_d, run.gamma, run.eta_tilde, pt.radar_spacing);
    }
  } catch (const SaddleFailure&) {
    return std::nullopt;  // fall back to the empirical column only
  }
  return std::nullopt;
}

}  // namespace

ExperimentResult run_detection_experiment(const RadarSceneConfig& cfg,
                                          const std::string& detector_id,
                                          const std::string& sweep_kind,
                                          const RVec& sweep_values) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  if (sweep_values.size() == 0) throw ValidationError("empty sweep");

  ExperimentResult result;
  result.sweep_kind = sweep_kind;
  result.sweep = sweep_values;
  result.trials = cfg.trials;
  result.seed = cfg.base_seed;

  if (sweep_kind == "threshold") {
    if (detector_id == "ed")
      throw ValidationError(
          "threshold sweeps for the energy detector need the calibrate command "
          "(it sweeps threshold pairs)");
    for (Eigen::Index i = 1; i < sweep_values.size(); ++i)
      if (!(sweep_values(i) > sweep_values(i - 1)))
        throw ValidationError("threshold sweep must be strictly ascending");
    const ThresholdSweep sweep =
        calibrate_threshold(detector_id, cfg, sweep_values, cfg.trials, cfg.base_seed,
                            cfg.channel_hold == "ergodic");
    result.empirical = sweep.error_prob;
    result.ci_halfwidth.resize(sweep.grid.size());
    for (Eigen::Index i = 0; i < sweep.grid.size(); ++i)
      result.ci_halfwidth(i) = wilson_halfwidth(sweep.error_prob(i), cfg.trials);
    result.theory.assign(static_cast<std::size_t>(sweep.grid.size()), std::nullopt);
    result.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
  }

  const SceneContext ctx = build_scene(cfg);
  result.empirical.resize(sweep_values.size());
  result.ci_halfwidth.resize(sweep_values.size());
  result.theory.clear();

  for (Eigen::Index p = 0; p < sweep_values.size(); ++p) {
    const RadarSceneConfig pt = point_config(cfg, sweep_kind, sweep_values(p));
    const DetectorRun run = resolve_thresholds(detector_id, ctx, pt);
    const double n0 = pt.resolved_n0();
    int errors = 0;
    for (int t = 0; t < pt.trials; ++t) {
      const std::uint64_t trial_key =
          (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint64_t>(t);
      const TrialDraw d = draw_trial(ctx, pt, trial_key);
      int decision;
      if (detector_id == "glrt_nlos")
        decision = glrt_nlos(d.y, ctx.x0, ctx.x1, n0).statistic > run.gamma ? 1 : 0;
      else if (detector_id == "rao")
        decision = rao_nlos(d.y, ctx.x0, pt.p_r, n0, run.gamma).decision;
      else if (detector_id == "rao_special")
        decision = rao_special(d.y, ctx.x0, pt.p_r, n0, run.gamma).decision;
      else if (detector_id == "glrt_los")
        decision = glrt_los(d.y, ctx.x0, ctx.x1, n0, pt.radar_spacing, pt.bs_spacing,
                            run.gamma, pt.grid_step_deg)
                       .decision;
      else
        decision = energy_detector(d.y, n0, run.gamma, run.eta_tilde).decision;
      errors += (decision != d.mode) ? 1 : 0;
    }
    const double p_err = static_cast<double>(errors) / pt.trials;
    result.empirical(p) = p_err;
    result.ci_halfwidth(p) = wilson_halfwidth(p_err, pt.trials);
    result.theory.push_back(theory_for_point(detector_id, ctx, pt, run));
  }
  result.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

namespace {

double estimation_error(const std::string& estimator_id, const std::string& metric,
                        const SceneContext& ctx, const RadarSceneConfig& pt,
                        const TrialDraw& d, const CMat& x) {
  const double n0 = pt.resolved_n0();
  if (estimator_id == "mle_nlos") {
    if (metric != "frobenius")
      throw ValidationError("mle_nlos supports metric=frobenius");
    return squared_error(mle_nlos(d.y, x).g_hat, d.channel.gain());
  }
  if (estimator_id == "mle_los") {
    const auto& los = std::get<LosChannel>(d.channel.value);
    const LosMlEstimate est =
        mle_los(d.y, x, pt.radar_spacing, pt.bs_spacing, pt.grid_step_deg);
    if (metric == "theta")
      return squared_error_angular_deg(est.theta_hat_deg, rad2deg(los.theta_rad));
    if (metric == "alpha") return squared_error(est.alpha_hat, los.alpha);
    throw ValidationError("mle_los supports metric=theta or metric=alpha");
  }
  if (estimator_id == "blind_los") {
    const auto& los = std::get<LosChannel>(d.channel.value);
    const LosBlindEstimate est =
        blind_los(d.y, pt.p_r, n0, pt.bs_spacing, pt.grid_step_deg);
    if (metric == "theta") {
      // A degenerate energy estimate identifies no direction; score it as a
      // broadside report so low-SNR sweeps stay finite.
      const double theta_hat = est.degenerate ? 0.0 : est.theta_hat_deg;
      return squared_error_angular_deg(theta_hat, rad2deg(los.theta_rad));
    }
    if (metric == "alpha_sq") {
      const double truth = std::norm(los.alpha);
      return (est.alpha_sq_hat - truth) * (est.alpha_sq_hat - truth);
    }
    throw ValidationError("blind_los supports metric=theta or metric=alpha_sq");
  }
  throw ValidationError("unknown estimator '" + estimator_id + "'");
}

}  // namespace

ExperimentResult run_estimation_experiment(const RadarSceneConfig& cfg,
                                           const std::string& estimator_id,
                                           const std::string& metric,
                                           const std::string& sweep_kind,
                                           const RVec& sweep_values) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  if (sweep_values.size() == 0) throw ValidationError("empty sweep");
  if (sweep_kind != "n" && sweep_kind != "snr")
    throw ValidationError("estimation sweeps support kind 'n' or 'snr'");
  if ((estimator_id == "mle_los" || estimator_id == "blind_los") && cfg.channel != "los")
    throw ValidationError("LoS estimators need channel=los");
  if (estimator_id == "mle_nlos" && cfg.channel != "nlos")
    throw ValidationError("mle_nlos needs channel=nlos");

  const SceneContext ctx = build_scene(cfg, cfg.waveform == "tracking");
  const CMat& x = cfg.waveform == "searching" ? ctx.x0 : ctx.x1;

  ExperimentResult result;
  result.sweep_kind = sweep_kind;
  result.sweep = sweep_values;
  result.trials = cfg.trials;
  result.seed = cfg.base_seed;
  result.empirical.resize(sweep_values.size());
  result.ci_halfwidth.resize(sweep_values.size());

  for (Eigen::Index p = 0; p < sweep_values.size(); ++p) {
    const RadarSceneConfig pt = point_config(cfg, sweep_kind, sweep_values(p));
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < pt.trials; ++t) {
      const std::uint64_t trial_key =
          (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint64_t>(t);
      // Estimation trials do not sample the PRI mode; the waveform is fixed
      // by configuration.
      TrialDraw d;
      d.mode = cfg.waveform == "tracking" ? 1 : 0;
      d.channel = draw_channel(pt, pt.base_seed, trial_key);
      Rng noise_rng(mix_seed(pt.base_seed, trial_key, Stream::Noise));
      d.y = synthesize_rx(d.channel.gain(), x, pt.resolved_n0(), noise_rng);
      const double err = estimation_error(estimator_id, metric, ctx, pt, d, x);
      sum += err;
      sum_sq += err * err;
    }
    const double mean = sum / pt.trials;
    const double var = std::max(0.0, sum_sq / pt.trials - mean * mean);
    result.empirical(p) = mean;
    result.ci_halfwidth(p) = 1.959963984540054 * std::sqrt(var / pt.trials);
    if (estimator_id == "mle_nlos") {
      if (cfg.waveform == "searching")
        result.theory.push_back(
            mse_theory_orthogonal(pt.m, pt.n, pt.l, pt.p_r, pt.resolved_n0()));
      else
        result.theory.push_back(
            mse_theory(ctx.design.covariance, pt.resolved_n0(), pt.n, pt.l));
    } else {
      result.theory.push_back(std::nullopt);
    }
  }
  result.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

ExperimentResult run_theory_curve(const RadarSceneConfig& cfg, const std::string& quantity,
                                  const std::string& sweep_kind, const RVec& sweep_values) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  if (sweep_values.size() == 0) throw ValidationError("empty sweep");

  const SceneContext ctx = build_scene(cfg, quantity != "mse_searching");
  ExperimentResult result;
  result.sweep_kind = sweep_kind;
  result.sweep = sweep_values;
  result.trials = 0;
  result.seed = cfg.base_seed;

  for (Eigen::Index p = 0; p < sweep_values.size(); ++p) {
    const RadarSceneConfig pt = point_config(cfg, sweep_kind, sweep_values(p));
    const double n0 = pt.resolved_n0();
    if (quantity == "glrt") {
      const DetectorRun run = resolve_thresholds("glrt_nlos", ctx, pt);
      result.theory.push_back(glrt_error_prob(fixed_channel_gain(ctx, pt), ctx.x0,
                                              ctx.x1, n0, pt.p_d, run.gamma));
    } else if (quantity == "rao_special") {
      const DetectorRun run = resolve_thresholds("rao_special", ctx, pt);
      result.theory.push_back(rao_special_error_prob(fixed_channel_gain(ctx, pt), ctx.x0,
                                                     ctx.x1, n0, pt.p_d, run.gamma));
    } else if (quantity == "ed") {
      const DetectorRun run = resolve_thresholds("ed", ctx, pt);
      result.theory.push_back(ed_error_prob(pt.alpha_abs, deg2rad(pt.theta_deg), ctx.x1,
                                            n0, pt.p_r, pt.n, pt.p_d, run.gamma,
                                            run.eta_tilde, pt.radar_spacing));
    } else if (quantity == "mse_searching") {
      result.theory.push_back(mse_theory_orthogonal(pt.m, pt.n, pt.l, pt.p_r, n0));
    } else if (quantity == "mse_tracking") {
      result.theory.push_back(mse_theory(ctx.design.covariance, n0, pt.n, pt.l));
    } else {
      throw ValidationError("unknown theory quantity '" + quantity + "'");
    }
  }
  result.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

void emit_results(const ExperimentResult& result, const std::string& path) {
  const auto rows = result.sweep.size();
  const bool have_empirical = result.empirical.size() == rows && rows > 0;
  if (result.empirical.size() != 0 && result.empirical.size() != rows)
    throw ValidationError("emit_results: empirical column length disagrees with sweep");
  if (result.ci_halfwidth.size() != 0 && result.ci_halfwidth.size() != rows)
    throw ValidationError("emit_results: ci column length disagrees with sweep");
  if (!result.theory.empty() && static_cast<Eigen::Index>(result.theory.size()) != rows)
    throw ValidationError("emit_results: theory column length disagrees with sweep");
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write results file '" + path + "'");
  out << "sweep,empirical,ci_halfwidth,theory,trials,seed\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    out << format_g17(result.sweep(i)) << ',';
    if (have_empirical) out << format_g17(result.empirical(i));
    out << ',';
    if (result.ci_halfwidth.size() == rows) out << format_g17(result.ci_halfwidth(i));
    out << ',';
    if (!result.theory.empty() && result.theory[static_cast<std::size_t>(i)])
      out << format_g17(*result.theory[static_cast<std::size_t>(i)]);
    out << ',' << result.trials << ',' << result.seed << '\n';
  }
  if (!out) throw ValidationError("write failed for results file '" + path + "'");
}

}  // namespace icsi
