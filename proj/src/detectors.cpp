#include "icsi/detectors.hpp"

#include <cmath>

#include "icsi/estimators.hpp"
#include "icsi/linalg.hpp"
#include "icsi/saddlepoint.hpp"

namespace icsi {

namespace {

// Ties go to H0 throughout.
int decide(double statistic, double gamma) { return statistic > gamma ? 1 : 0; }

}  // namespace

DetectionResult glrt_nlos(const CMat& y, const CMat& x0, const CMat& x1, double n0,
                          std::optional<double> p_d) {
  if (y.cols() != x0.cols() || y.cols() != x1.cols())
    throw ValidationError("glrt_nlos: sample counts disagree");
  if (!(n0 > 0)) throw ValidationError("glrt_nlos: n0 must be positive");
  DetectionResult res;
  if (p_d) {
    if (!(*p_d > 0 && *p_d < 1))
      throw ValidationError("glrt_nlos: p_d must lie in (0, 1) for the optimal threshold");
    res.gamma = std::log((1.0 - *p_d) / *p_d);
  } else {
    res.gamma = 0.0;
  }
  const CMat c = glrt_core(x0, x1, &res.pinv_fallback);
  res.statistic = re_inner(y, y * c) / n0;  // (1/n0) tr(y c y^H)
  res.decision = decide(res.statistic, res.gamma);
  return res;
}

DetectionResult rao_nlos(const CMat& y, const CMat& x0, double p_r, double n0,
                         double gamma) {
  const auto m = x0.rows();
  const auto l = x0.cols();
  if (y.cols() != l) throw ValidationError("rao_nlos: sample counts disagree");
  if (y.rows() < m)
    throw ValidationError("rao_nlos: needs at least as many receive as transmit antennas");
  if (!(n0 > 0) || !(p_r > 0)) throw ValidationError("rao_nlos: n0 and p_r must be positive");
  DetectionResult res;
  res.gamma = gamma;
  const CMat b =
      (static_cast<double>(m) / (static_cast<double>(l) * p_r)) * (x0.adjoint() * x0);
  const CMat q = y.adjoint() * y;              // L x L
  const CMat qx = q * x0.adjoint();            // L x M
  const CMat core = x0 * qx;                   // M x M
  const CMat t = qx * pseudo_inverse(core, &res.pinv_fallback) * qx.adjoint();
  res.statistic = (2.0 / n0) * (t.trace().real() - re_inner(b, t));
  res.decision = decide(res.statistic, res.gamma);
  return res;
}

DetectionResult rao_special(const CMat& y, const CMat& x0, double p_r, double n0,
                            double gamma) {
  const auto m = x0.rows();
  const auto l = x0.cols();
  if (y.cols() != l) throw ValidationError("rao_special: sample counts disagree");
  if (y.rows() != m)
    throw ValidationError("rao_special: requires equal transmit/receive antenna counts");
  if (l < m) throw ValidationError("rao_special: needs l >= m");
  if (!(n0 > 0) || !(p_r > 0))
    throw ValidationError("rao_special: n0 and p_r must be positive");
  DetectionResult res;
  res.gamma = gamma;
  const CMat b =
      (static_cast<double>(m) / (static_cast<double>(l) * p_r)) * (x0.adjoint() * x0);
  // (2/n0) tr(y (I - B) y^H)
  res.statistic = (2.0 / n0) * (y.squaredNorm() - re_inner(y, y * b));
  res.decision = decide(res.statistic, res.gamma);
  return res;
}

LosDetectionResult glrt_los(const CMat& y, const CMat& x0, const CMat& x1, double n0,
                            double radar_spacing, double bs_spacing, double gamma,
                            double grid_step_deg) {
  if (!(n0 > 0)) throw ValidationError("glrt_los: n0 must be positive");
  const LosScan fit0 = scan_los_objective(y, x0, radar_spacing, bs_spacing, grid_step_deg);
  const LosScan fit1 = scan_los_objective(y, x1, radar_spacing, bs_spacing, grid_step_deg);
  LosDetectionResult res;
  res.gamma = gamma;
  res.statistic = (fit1.objective - fit0.objective) / n0;
  res.decision = decide(res.statistic, res.gamma);
  res.theta0_hat_deg = fit0.theta_deg;
  res.theta1_hat_deg = fit1.theta_deg;
  return res;
}

DetectionResult energy_detector(const CMat& y, double n0, double gamma_tilde,
                                double eta_tilde) {
  if (!(n0 >= 0)) throw ValidationError("energy_detector: n0 must be >= 0");
  if (!(gamma_tilde >= 0))
    throw ValidationError("energy_detector: gamma_tilde must be >= 0");
  if (!(eta_tilde >= gamma_tilde))
    throw ValidationError("energy_detector: need gamma_tilde <= eta_tilde");
  DetectionResult res;
  res.gamma = gamma_tilde;
  res.eta = eta_tilde;
  res.statistic = y.squaredNorm() / static_cast<double>(y.cols());
  const bool in_band = res.statistic >= gamma_tilde && res.statistic <= eta_tilde;
  res.decision = in_band ? 0 : 1;
  return res;
}

}  // namespace icsi
