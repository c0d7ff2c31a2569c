#include "icsi/theory.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "icsi/array.hpp"
#include "icsi/chi_squared.hpp"
#include "icsi/linalg.hpp"
#include "icsi/saddlepoint.hpp"

namespace icsi {

double glrt_optimal_gamma(double p_d) {
  if (!(p_d > 0 && p_d < 1))
    throw ValidationError("glrt_optimal_gamma: p_d must lie in (0, 1)");
  return std::log((1.0 - p_d) / p_d);
}

double glrt_error_prob(const CMat& g, const CMat& x0, const CMat& x1, double n0,
                       double p_d, double gamma) {
  if (!(p_d >= 0 && p_d <= 1))
    throw ValidationError("glrt_error_prob: p_d must lie in [0, 1]");
  const double f0 = saddlepoint_cdf(make_glrt_problem(g, x0, x1, n0, gamma, 0));
  const double f1 = saddlepoint_cdf(make_glrt_problem(g, x0, x1, n0, gamma, 1));
  const double p = (1.0 - f0) * (1.0 - p_d) + f1 * p_d;
  return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

Chi2Law rao_special_h0_law(int n, int m, int l) {
  if (n != m) throw ValidationError("rao_special_h0_law: requires m == n");
  if (l < m) throw ValidationError("rao_special_h0_law: needs l >= m");
  return {2 * n * (l - m), 0.0};
}

Chi2Law rao_special_h1_law(const CMat& g, const CMat& x0, const CMat& x1, double n0) {
  const auto m = x0.rows();
  const auto l = x0.cols();
  const auto n = g.rows();
  if (g.cols() != m || x1.rows() != m || x1.cols() != l)
    throw ValidationError("rao_special_h1_law: dimensions disagree");
  if (n != m) throw ValidationError("rao_special_h1_law: requires m == n");
  if (!(n0 > 0)) throw ValidationError("rao_special_h1_law: n0 must be positive");
  const double p_r = (x0 * x0.adjoint()).trace().real() / static_cast<double>(l);
  const CMat b =
      (static_cast<double>(m) / (static_cast<double>(l) * p_r)) * (x0.adjoint() * x0);
  const CMat gx1 = g * x1;
  double mu = (2.0 / n0) * (gx1.squaredNorm() - re_inner(gx1, gx1 * b));
  const double scale = (2.0 / n0) * gx1.squaredNorm();
  if (mu < -1e-8 * std::max(scale, 1.0))
    throw NumericalError("rao_special_h1_law: negative noncentrality beyond round-off");
  if (mu < 0) mu = 0;
  return {2 * static_cast<int>(n) * static_cast<int>(l - m), mu};
}

double rao_special_error_prob(const CMat& g, const CMat& x0, const CMat& x1,
                              double n0, double p_d, double gamma) {
  if (!(p_d >= 0 && p_d <= 1))
    throw ValidationError("rao_special_error_prob: p_d must lie in [0, 1]");
  const Chi2Law h1 = rao_special_h1_law(g, x0, x1, n0);
  const double f0 = chi2_cdf(std::max(gamma, 0.0), h1.dof);
  const double f1 = noncentral_chi2_cdf(std::max(gamma, 0.0), h1.dof, h1.noncentrality);
  const double p = (1.0 - f0) * (1.0 - p_d) + f1 * p_d;
  return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

double rao_special_optimal_gamma(const CMat& g, const CMat& x0, const CMat& x1,
                                 double n0, double p_d) {
  const Chi2Law h1 = rao_special_h1_law(g, x0, x1, n0);
  const double k = h1.dof;
  auto err = [&](double gamma) {
    return (1.0 - chi2_cdf(gamma, h1.dof)) * (1.0 - p_d) +
           noncentral_chi2_cdf(gamma, h1.dof, h1.noncentrality) * p_d;
  };
  // Coarse scan over a wide log grid, then golden-section refinement; the
  // error is unimodal in the threshold.
  const double lo_scan = k / 10.0;
  const double hi_scan = 10.0 * (k + h1.noncentrality);
  const int count = 257;
  double best = lo_scan, best_err = err(lo_scan);
  const double ratio = std::log(hi_scan / lo_scan);
  int best_i = 0;
  for (int i = 1; i < count; ++i) {
    const double gamma = lo_scan * std::exp(ratio * i / (count - 1));
    const double e = err(gamma);
    if (e < best_err) {
      best_err = e;
      best = gamma;
      best_i = i;
    }
  }
  double lo = lo_scan * std::exp(ratio * std::max(0, best_i - 1) / (count - 1));
  double hi = lo_scan * std::exp(ratio * std::min(count - 1, best_i + 1) / (count - 1));
  constexpr double invphi = 0.6180339887498949;
  double x1g = hi - invphi * (hi - lo);
  double x2g = lo + invphi * (hi - lo);
  double f1 = err(x1g), f2 = err(x2g);
  while (hi - lo > 1e-6 * std::max(1.0, best)) {
    if (f1 <= f2) {
      hi = x2g;
      x2g = x1g;
      f2 = f1;
      x1g = hi - invphi * (hi - lo);
      f1 = err(x1g);
    } else {
      lo = x1g;
      x1g = x2g;
      f1 = f2;
      x2g = lo + invphi * (hi - lo);
      f2 = err(x2g);
    }
  }
  const double refined = 0.5 * (lo + hi);
  return err(refined) < best_err ? refined : best;
}

double ed_default_gamma_tilde(int n_bs, double p_r, double n0) {
  return n_bs * (p_r / 2.0 + n0);
}

double ed_default_eta_tilde(int n_bs, double p_r, double n0) {
  return n_bs * (2.0 * p_r + n0);
}

double ed_error_prob(double alpha_abs, double theta_rad, const CMat& x1, double n0,
                     double p_r, int n_bs, double p_d, double gamma_tilde,
                     double eta_tilde, double radar_spacing) {
  if (!(n0 > 0)) throw ValidationError("ed_error_prob: n0 must be positive");
  if (!(eta_tilde >= gamma_tilde))
    throw ValidationError("ed_error_prob: need gamma_tilde <= eta_tilde");
  if (!(p_d >= 0 && p_d <= 1))
    throw ValidationError("ed_error_prob: p_d must lie in [0, 1]");
  const auto m = x1.rows();
  const auto l = x1.cols();
  const double a2 = alpha_abs * alpha_abs;
  const CVec a = steering_vector<double>(theta_rad, m, radar_spacing);
  const double track_power = std::real(static_cast<Cplx>(a.dot((x1 * x1.adjoint()) * a)));
  const int kappa = 2 * n_bs * static_cast<int>(l);
  const double eps0 = 2.0 * a2 * n_bs * static_cast<double>(l) * p_r / n0;
  const double eps1 = 2.0 * a2 * n_bs * track_power / n0;
  // Thresholds mapped onto the normalized statistic 2 L t / n0.
  const double gamma = 2.0 * l * gamma_tilde / n0;
  const double eta = 2.0 * l * eta_tilde / n0;
  const double f0g = noncentral_chi2_cdf(gamma, kappa, eps0);
  const double f0e = noncentral_chi2_cdf(eta, kappa, eps0);
  const double f1g = noncentral_chi2_cdf(gamma, kappa, eps1);
  const double f1e = noncentral_chi2_cdf(eta, kappa, eps1);
  const double p = (1.0 - (1.0 - f0g) * f0e) * (1.0 - p_d) + (1.0 - f1g) * f1e * p_d;
  return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

double mse_theory(const CMat& r_x, double n0, int n, int l, bool* pinv_flag) {
  if (r_x.rows() != r_x.cols()) throw ValidationError("mse_theory: covariance must be square");
  if (!(n0 >= 0) || n < 1 || l < 1) throw ValidationError("mse_theory: bad parameters");
  Eigen::SelfAdjointEigenSolver<CMat> es(r_x, Eigen::EigenvaluesOnly);
  const RVec ev = es.eigenvalues();
  const double cutoff = kPinvRelTol * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  bool dropped = false;
  double trace_inv = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff && ev(i) > 0)
      trace_inv += 1.0 / ev(i);
    else
      dropped = true;
  }
  if (pinv_flag) *pinv_flag = dropped;
  return n0 * static_cast<double>(n) / static_cast<double>(l) * trace_inv;
}

double mse_theory_orthogonal(int m, int n, int l, double p_r, double n0) {
  if (m < 1 || n < 1 || l < 1 || !(p_r > 0) || !(n0 >= 0))
    throw ValidationError("mse_theory_orthogonal: bad parameters");
  return n0 * static_cast<double>(m) * m * n / (static_cast<double>(l) * p_r);
}

RaoExistenceReport verify_rao_nonexistence(int m, int n, int l, Cplx alpha,
                                           double theta_rad, double n0,
                                           double radar_spacing) {
  if (m <= 2)
    throw ValidationError("verify_rao_nonexistence: the bound needs m > 2");
  if (l < m) throw ValidationError("verify_rao_nonexistence: needs l >= m");
  if (!(n0 > 0)) throw ValidationError("verify_rao_nonexistence: n0 must be positive");
  RaoExistenceReport report;
  report.bound = l + 2;
  if (std::norm(alpha) == 0) {
    report.degenerate = true;  // the zero matrix is singular but proves nothing
    return report;
  }
  const CVec a = steering_vector<double>(theta_rad, m, radar_spacing);
  const CMat block =
      (4.0 * n * std::norm(alpha) / n0) * (a.conjugate() * a.transpose());
  CMat jrr = CMat::Zero(static_cast<Eigen::Index>(m) * l, static_cast<Eigen::Index>(m) * l);
  for (int k = 0; k < l; ++k)
    jrr.block(static_cast<Eigen::Index>(k) * m, static_cast<Eigen::Index>(k) * m, m, m) =
        block;
  Eigen::JacobiSVD<CMat> svd(jrr);
  const RVec sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  report.rank_jrr = rank;
  report.holds = (rank == l) && (l + 2 < m * l);
  return report;
}

}  // namespace icsi
