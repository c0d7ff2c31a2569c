#include "icsi/saddlepoint.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "icsi/linalg.hpp"

namespace icsi {

CMat glrt_core(const CMat& x0, const CMat& x1, bool* pinv_fallback) {
  if (x0.cols() != x1.cols())
    throw ValidationError("glrt_core: waveforms must share the sample count");
  const CMat a = row_space_projector(x1, pinv_fallback);
  const double total0 = (x0 * x0.adjoint()).trace().real();
  if (!(total0 > 0)) throw ValidationError("glrt_core: x0 carries no power");
  const CMat b = (static_cast<double>(x0.rows()) / total0) * (x0.adjoint() * x0);
  CMat c = a - b;
  return 0.5 * (c + c.adjoint().eval());
}

namespace {

SaddlePointProblem assemble(const CMat& g, const CMat& x0, const CMat& x1, double n0,
                            double gamma, int hypothesis, bool direct) {
  if (!(n0 > 0)) throw ValidationError("glrt saddle-point problem: n0 must be > 0");
  if (hypothesis != 0 && hypothesis != 1)
    throw ValidationError("glrt saddle-point problem: hypothesis must be 0 or 1");
  const CMat c = glrt_core(x0, x1);
  const CMat mean = g * (hypothesis == 0 ? x0 : x1);  // N x L
  const auto n = mean.rows();
  const auto l = c.rows();
  SaddlePointProblem p;
  p.gamma = gamma;
  if (!direct) {
    Eigen::SelfAdjointEigenSolver<CMat> es(c);
    p.eigenvalues.resize(n * l);
    for (Eigen::Index k = 0; k < n; ++k)
      p.eigenvalues.segment(k * l, l) = es.eigenvalues();
    const CMat rotated = es.eigenvectors().adjoint() * mean.adjoint();  // L x N
    p.transformed_mean =
        CVec(Eigen::Map<const CVec>(rotated.data(), rotated.size())) / std::sqrt(n0);
  } else {
    CMat d = CMat::Zero(n * l, n * l);
    for (Eigen::Index k = 0; k < n; ++k) d.block(k * l, k * l, l, l) = c;
    Eigen::SelfAdjointEigenSolver<CMat> es(d);
    p.eigenvalues = es.eigenvalues();
    const CMat mh = mean.adjoint();  // L x N, stacked column-major
    const CVec stacked = Eigen::Map<const CVec>(mh.data(), mh.size());
    p.transformed_mean = (es.eigenvectors().adjoint() * stacked) / std::sqrt(n0);
  }
  return p;
}

}  // namespace

SaddlePointProblem make_glrt_problem(const CMat& g, const CMat& x0, const CMat& x1,
                                     double n0, double gamma, int hypothesis) {
  return assemble(g, x0, x1, n0, gamma, hypothesis, false);
}

SaddlePointProblem make_glrt_problem_direct(const CMat& g, const CMat& x0,
                                            const CMat& x1, double n0, double gamma,
                                            int hypothesis) {
  return assemble(g, x0, x1, n0, gamma, hypothesis, true);
}

double saddlepoint_cdf(const SaddlePointProblem& problem) {
  const RVec& lam = problem.eigenvalues;
  const CVec& mean = problem.transformed_mean;
  if (lam.size() == 0 || lam.size() != mean.size())
    throw ValidationError("saddlepoint_cdf: eigenvalue/mean sizes disagree");
  if (!(problem.beta > 0))
    throw ValidationError("saddlepoint_cdf: beta must be positive");
  const Eigen::Index n = lam.size();
  RVec b2(n);
  for (Eigen::Index i = 0; i < n; ++i) b2(i) = std::norm(mean(i));

  const double lam_abs_max = lam.cwiseAbs().maxCoeff();
  if (lam_abs_max == 0.0)
    throw SaddleFailure("saddlepoint_cdf: all eigenvalues vanish; the statistic is degenerate");
  const double z_max = 1.0 / lam_abs_max;

  // The beta probe only needs to sit inside the convergence strip; halve it
  // until it does (the CDF itself depends on the saddle point alone).
  double beta = problem.beta;
  while (beta >= z_max) beta *= 0.5;

  const double gamma = problem.gamma;
  auto s_prime = [&](double z) {
    double v = gamma - 1.0 / z;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = 1.0 + z * lam(i);
      v -= lam(i) / d;
      v -= b2(i) * lam(i) / (d * d);
    }
    return v;
  };

  double lo = 1e-12 * z_max;
  double hi = (1.0 - 1e-12) * z_max;
  // s'(z) -> -inf as z -> 0+, so only a pathological threshold needs this.
  for (int k = 0; k < 60 && s_prime(lo) > 0 && lo > 1e-290; ++k) lo *= 1e-3;
  if (s_prime(lo) > 0)
    throw SaddleFailure("saddlepoint_cdf: no sign change near the strip's lower edge");
  if (s_prime(hi) < 0)
    throw SaddleFailure("saddlepoint_cdf: no saddle point inside the convergence strip");
  for (int k = 0; k < 200 && (hi - lo) > 1e-15 * z_max; ++k) {
    const double mid = 0.5 * (lo + hi);
    (s_prime(mid) < 0 ? lo : hi) = mid;
  }
  const double z0 = 0.5 * (lo + hi);

  double s2 = 1.0 / (z0 * z0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = 1.0 + z0 * lam(i);
    s2 += lam(i) * lam(i) / (d * d);
    s2 += 2.0 * b2(i) * lam(i) * lam(i) / (d * d * d);
  }
  // Analytic curvature cross-checked against a central difference of s'.
  {
    const double h = 1e-5 * std::min(z0, z_max - z0);
    if (h > 0) {
      const double fd = (s_prime(z0 + h) - s_prime(z0 - h)) / (2.0 * h);
      if (std::abs(fd - s2) > 1e-4 * std::max(std::abs(s2), 1e-300))
        throw NumericalError("saddlepoint_cdf: curvature cross-check failed");
    }
  }

  double s = gamma * z0 - std::log(z0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double zl = z0 * lam(i);
    s -= b2(i) * zl / (1.0 + zl);
    s -= std::log1p(zl);
  }
  const double p = std::exp(s) / std::sqrt(2.0 * kPi * s2);
  return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

}  // namespace icsi
