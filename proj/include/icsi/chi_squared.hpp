#pragma once

#include <cmath>
#include <limits>

#include "icsi/types.hpp"

namespace icsi {

// ln(y^s e^-y / Gamma(s+1)). The naive form subtracts terms of size s*ln(y),
// whose rounding error (up to ~1e-10 absolute for s ~ 5e4) would cap the
// attainable accuracy; for large s, Stirling plus log1p keeps the exponent
// good to ~1e-14 absolute.
inline double log_poisson_like(double s, double y) {
  if (!(s > 0) || !(y > 0)) return s * std::log(y) - y - std::lgamma(s + 1.0);
  if (s < 32.0) return s * std::log(y) - y - std::lgamma(s + 1.0);
  const double s2 = s * s;
  const double delta =
      (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * s2)) / s2) / s2) / s;
  return s * std::log1p((y - s) / s) + (s - y) - 0.5 * std::log(2.0 * kPi * s) - delta;
}

// Regularized lower incomplete gamma P(a, x): series expansion for x < a+1,
// Lentz continued fraction for the upper tail otherwise.
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0)) throw ValidationError("regularized_gamma_p: shape must be positive");
  if (!(x >= 0)) throw ValidationError("regularized_gamma_p: argument must be nonnegative");
  if (x == 0) return 0.0;
  // x^a e^-x / Gamma(a) = a * x^a e^-x / Gamma(a+1).
  const double log_prefactor = log_poisson_like(a, x) + std::log(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    const double p = sum * std::exp(log_prefactor);
    return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
  }
  // Modified Lentz evaluation of the continued fraction for Q(a, x).
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / (b == 0 ? tiny : b);
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double q = std::exp(log_prefactor) * h;
  const double p = 1.0 - q;
  return p < 0 ? 0.0 : (p > 1 ? 1.0 : p);
}

inline double chi2_cdf(double x, int dof) {
  if (dof < 1) throw ValidationError("chi2_cdf: dof must be >= 1");
  if (!(x >= 0)) throw ValidationError("chi2_cdf: argument must be nonnegative");
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

// Noncentral chi-squared CDF via the Poisson mixture
//   F(x; k, lambda) = sum_j Pois(j; lambda/2) * F_central(x; k + 2j),
// expanded bidirectionally from the modal Poisson index so it stays stable
// for very large noncentrality. Each sweep stops once a geometric bound on
// the mass it leaves behind drops below 1e-16.
inline double noncentral_chi2_cdf(double x, int dof, double lambda) {
  if (dof < 1) throw ValidationError("noncentral_chi2_cdf: dof must be >= 1");
  if (!(x >= 0)) throw ValidationError("noncentral_chi2_cdf: argument must be nonnegative");
  if (!(lambda >= 0)) throw ValidationError("noncentral_chi2_cdf: noncentrality must be nonnegative");
  if (lambda == 0) return chi2_cdf(x, dof);
  if (x == 0) return 0.0;

  constexpr double tail_tol = 1e-16;
  const double h = 0.5 * lambda;  // Poisson mean
  const double a = 0.5 * dof;
  const double y = 0.5 * x;
  const auto j0 = static_cast<long>(std::floor(h));

  // Central-CDF term D_j = P(a+j, y), its one-step decrement
  // t_j = y^(a+j) e^(-y) / Gamma(a+j+1), and the Poisson weight w_j.
  const double aj0 = a + static_cast<double>(j0);
  const double w_mode = std::exp(log_poisson_like(static_cast<double>(j0), h));
  const double d_mode = regularized_gamma_p(aj0, y);
  const double t_mode = std::exp(log_poisson_like(aj0, y));

  double sum = w_mode * d_mode;

  // Downward from the mode (at most j0 terms): D_{j-1} = D_j + t_{j-1} with
  // t_{j-1} = t_j (a+j)/y. Below index j the weights shrink by at least
  // (j-1)/h per step and D <= 1, so the mass not yet visited is under
  // w (j-1)/h / (1 - (j-1)/h).
  {
    double w = w_mode, d = d_mode, t = t_mode;
    for (long j = j0; j > 0; --j) {
      t *= (a + static_cast<double>(j)) / y;
      d += t;
      if (d > 1) d = 1;
      w *= static_cast<double>(j) / h;
      sum += w * d;
      const double r = static_cast<double>(j - 1) / h;
      if (w * r < (1.0 - r) * tail_tol) break;
    }
  }

  // Upward from the mode: D_{j+1} = D_j - t_j. Above the mode the weights
  // shrink by r = h/(j+1) < 1 per step and D decreases, so the remaining
  // contribution is under w D r/(1-r).
  {
    double w = w_mode, d = d_mode, t = t_mode;
    long j = j0;
    while (true) {
      d -= t;
      if (d < 0) d = 0;
      t *= y / (a + static_cast<double>(j) + 1.0);
      w *= h / (static_cast<double>(j) + 1.0);
      ++j;
      sum += w * d;
      const double r = h / (static_cast<double>(j) + 1.0);
      if (w * d * r < (1.0 - r) * tail_tol) break;
      if (j - j0 > 10000000L)
        throw NumericalError("noncentral_chi2_cdf: Poisson mixture failed to converge");
    }
  }

  return sum < 0 ? 0.0 : (sum > 1 ? 1.0 : sum);
}

}  // namespace icsi
