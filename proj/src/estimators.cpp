#include "icsi/estimators.hpp"

#include <cmath>
#include <limits>

#include "icsi/array.hpp"
#include "icsi/linalg.hpp"

namespace icsi {

NlosEstimate mle_nlos(const CMat& y, const CMat& x) {
  if (y.cols() != x.cols())
    throw ValidationError("mle_nlos: received block and waveform sample counts disagree");
  NlosEstimate est;
  const CMat gram = x * x.adjoint();
  est.g_hat = y * x.adjoint() * pseudo_inverse(gram, &est.pinv_fallback);
  return est;
}

namespace {

constexpr double kGoldenTolDeg = 1e-3;
constexpr double kPowerSkipRel = 1e-12;

struct Objective {
  const CMat& t;      // y x^H, N x M
  const CMat& gram;   // x x^H, M x M
  double n_bs;        // receive antennas N
  double radar_spacing;
  double bs_spacing;

  // Returns false when x radiates (numerically) nothing toward theta.
  bool eval(double theta_deg, double power_floor, double* value, Cplx* alpha) const {
    const double th = deg2rad(theta_deg);
    const CVec a = steering_vector<double>(th, gram.rows(), radar_spacing);
    const double den_core = std::real(static_cast<Cplx>(a.dot(gram * a)));
    if (den_core < power_floor) return false;
    const CVec b = steering_vector<double>(th, t.rows(), bs_spacing);
    const Cplx num = b.dot(t * a);
    const double den = n_bs * den_core;  // N L a^H R_x a with R_x = x x^H / L
    *value = std::norm(num) / den;
    if (alpha) *alpha = num / den;
    return true;
  }
};

}  // namespace

LosScan scan_los_objective(const CMat& y, const CMat& x, double radar_spacing,
                           double bs_spacing, double grid_step_deg) {
  if (y.cols() != x.cols())
    throw ValidationError("scan_los_objective: sample counts disagree");
  if (!(x.norm() > 0)) throw ValidationError("scan_los_objective: waveform is zero");
  if (!(grid_step_deg > 0))
    throw ValidationError("scan_los_objective: grid step must be positive");

  const CMat t = y * x.adjoint();
  const CMat gram = x * x.adjoint();
  const Objective obj{t, gram, static_cast<double>(y.rows()), radar_spacing,
                      bs_spacing};
  // Skip angles receiving less than 1e-12 of the total radiated power.
  const double power_floor = kPowerSkipRel * gram.trace().real();

  const RVec grid = degree_grid(-90.0, 90.0, grid_step_deg);
  double best_theta = 0.0, best_val = -1.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    double v;
    if (obj.eval(grid(i), power_floor, &v, nullptr) && v > best_val) {
      best_val = v;
      best_theta = grid(i);
    }
  }
  if (best_val < 0)
    throw NumericalError("scan_los_objective: every grid angle was skipped (no radiated power)");

  // Golden-section refinement around the best grid point.
  constexpr double invphi = 0.6180339887498949;
  double lo = std::max(-90.0, best_theta - grid_step_deg);
  double hi = std::min(90.0, best_theta + grid_step_deg);
  auto value_or_lowest = [&](double deg) {
    double v;
    return obj.eval(deg, power_floor, &v, nullptr) ? v : -std::numeric_limits<double>::infinity();
  };
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = value_or_lowest(x1);
  double f2 = value_or_lowest(x2);
  while (hi - lo > kGoldenTolDeg) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = value_or_lowest(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = value_or_lowest(x2);
    }
  }

  LosScan out;
  out.theta_deg = 0.5 * (lo + hi);
  Cplx alpha;
  double v;
  if (!obj.eval(out.theta_deg, power_floor, &v, &alpha)) {
    out.theta_deg = best_theta;  // refined point fell into a skipped sliver
    obj.eval(out.theta_deg, power_floor, &v, &alpha);
  }
  if (v < best_val) {  // never let refinement lose to the coarse grid
    out.theta_deg = best_theta;
    obj.eval(out.theta_deg, power_floor, &v, &alpha);
  }
  out.objective = v;
  out.alpha_hat = alpha;
  return out;
}

LosMlEstimate mle_los(const CMat& y, const CMat& x, double radar_spacing,
                      double bs_spacing, double grid_step_deg) {
  const LosScan scan = scan_los_objective(y, x, radar_spacing, bs_spacing, grid_step_deg);
  LosMlEstimate est;
  est.theta_hat_deg = scan.theta_deg;
  est.alpha_hat = scan.alpha_hat;
  const double th = deg2rad(scan.theta_deg);
  const CVec b = steering_vector<double>(th, y.rows(), bs_spacing);
  const CVec a = steering_vector<double>(th, x.rows(), radar_spacing);
  est.cost_at_min = (y - scan.alpha_hat * b * (a.adjoint() * x)).squaredNorm();
  return est;
}

LosBlindEstimate blind_los(const CMat& y, double p_r, double n0, double bs_spacing,
                           double grid_step_deg) {
  if (!(p_r > 0)) throw ValidationError("blind_los: p_r must be positive");
  if (!(n0 >= 0)) throw ValidationError("blind_los: n0 must be >= 0");
  if (!(grid_step_deg > 0)) throw ValidationError("blind_los: grid step must be positive");
  const auto n = y.rows();
  const auto l = y.cols();
  LosBlindEstimate est;
  const double q = y.squaredNorm() / (static_cast<double>(l) * n * p_r) - n0 / p_r;
  if (q <= 0) {
    est.alpha_sq_hat = 0.0;
    est.degenerate = true;
    est.theta_hat_deg = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  est.alpha_sq_hat = q;

  const CMat ryy = y * y.adjoint();
  auto value = [&](double deg) {
    const CVec b = steering_vector<double>(deg2rad(deg), n, bs_spacing);
    return std::real(static_cast<Cplx>(b.dot(ryy * b)));
  };
  const RVec grid = degree_grid(-90.0, 90.0, grid_step_deg);
  double best_theta = grid(0), best_val = -1.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double v = value(grid(i));
    if (v > best_val) {
      best_val = v;
      best_theta = grid(i);
    }
  }
  constexpr double invphi = 0.6180339887498949;
  double lo = std::max(-90.0, best_theta - grid_step_deg);
  double hi = std::min(90.0, best_theta + grid_step_deg);
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  while (hi - lo > kGoldenTolDeg) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = value(x2);
    }
  }
  est.theta_hat_deg = 0.5 * (lo + hi);
  if (value(est.theta_hat_deg) < best_val) est.theta_hat_deg = best_theta;
  return est;
}

}  // namespace icsi
