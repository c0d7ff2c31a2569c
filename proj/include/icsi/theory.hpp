#pragma once

#include "icsi/types.hpp"

namespace icsi {

struct Chi2Law {
  int dof = 1;
  double noncentrality = 0.0;  // 0 means the central law
};

// Bayes-optimal GLRT threshold for mode prior p_d.
double glrt_optimal_gamma(double p_d);

// Decision-error probability of the NLoS GLRT at threshold gamma for a fixed
// channel, via the saddle-point CDF under both hypotheses:
//   (1 - F_H0(gamma)) (1 - p_d) + F_H1(gamma) p_d.
double glrt_error_prob(const CMat& g, const CMat& x0, const CMat& x1, double n0,
                       double p_d, double gamma);

// Equal-antenna Rao statistic laws: central chi-squared with K = 2N(L-M)
// under H0, noncentral with mu = (2/n0) tr(g x1 (I-B) x1^H g^H) under H1.
Chi2Law rao_special_h0_law(int n, int m, int l);
Chi2Law rao_special_h1_law(const CMat& g, const CMat& x0, const CMat& x1, double n0);

double rao_special_error_prob(const CMat& g, const CMat& x0, const CMat& x1,
                              double n0, double p_d, double gamma);

// argmin over gamma of the error probability above (coarse scan over a wide
// log grid plus golden-section refinement; the objective is unimodal).
double rao_special_optimal_gamma(const CMat& g, const CMat& x0, const CMat& x1,
                                 double n0, double p_d);

// Energy-detector error probability for the line-of-sight channel, using the
// chi-squared approximation with kappa = 2NL degrees of freedom and
// noncentralities eps0 = 2|alpha|^2 N L P_R / n0 (searching) and
// eps1 = (2|alpha|^2 N / n0) a^H x1 x1^H a (tracking). Accurate for
// moderate-to-high SNR; degrades below roughly -10 dB.
double ed_error_prob(double alpha_abs, double theta_rad, const CMat& x1, double n0,
                     double p_r, int n_bs, double p_d, double gamma_tilde,
                     double eta_tilde, double radar_spacing);

// Paper-scale defaults for the energy thresholds.
double ed_default_gamma_tilde(int n_bs, double p_r, double n0);
double ed_default_eta_tilde(int n_bs, double p_r, double n0);

// NLoS channel-estimation MSE (n0 N / L) tr(R_x^{-1}); singular covariances
// fall back to the pseudo-inverse trace and set *pinv_flag.
double mse_theory(const CMat& r_x, double n0, int n, int l, bool* pinv_flag = nullptr);

// Orthogonal (searching) waveform special case n0 M^2 N / (L P_R).
double mse_theory_orthogonal(int m, int n, int l, double p_r, double n0);

struct RaoExistenceReport {
  Eigen::Index rank_jrr = 0;
  Eigen::Index bound = 0;      // L + 2 unknowns needing information
  bool holds = false;          // rank == L and L + 2 < M L
  bool degenerate = false;     // alpha == 0: the zero matrix proves nothing
};

// Rank argument that the LoS Fisher information block
// J_rr = (4N|alpha|^2/n0) I_L (x) conj(a) a^T is singular, so no Rao test
// exists for the line-of-sight model. Requires M > 2.
RaoExistenceReport verify_rao_nonexistence(int m, int n, int l, Cplx alpha,
                                           double theta_rad, double n0,
                                           double radar_spacing = 0.5);

}  // namespace icsi
