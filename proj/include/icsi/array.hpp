#pragma once

#include <cmath>

#include "icsi/types.hpp"

namespace icsi {

// Uniform linear array steering vector, element k = exp(j*2*pi*k*spacing*sin(angle)),
// k = 0..elements-1, spacing in wavelengths. Angle measured from broadside, radians.
template <typename Scalar>
VectorC<Scalar> steering_vector(Scalar angle_rad, Eigen::Index elements, Scalar spacing) {
  constexpr Scalar half_pi = Scalar(kPi / 2);
  if (!(angle_rad >= -half_pi - Scalar(1e-12) && angle_rad <= half_pi + Scalar(1e-12)))
    throw ValidationError("steering_vector: angle outside [-pi/2, pi/2]");
  if (elements < 1) throw ValidationError("steering_vector: need at least one element");
  if (!(spacing > Scalar(0))) throw ValidationError("steering_vector: spacing must be positive");
  VectorC<Scalar> a(elements);
  const Scalar phase_step = Scalar(2) * Scalar(kPi) * spacing * std::sin(angle_rad);
  for (Eigen::Index k = 0; k < elements; ++k) {
    const Scalar p = phase_step * Scalar(k);
    a(k) = std::complex<Scalar>(std::cos(p), std::sin(p));
  }
  return a;
}

// Transmit power radiated toward `angle_rad` by a waveform with spatial
// covariance R: a^H R a. R must be Hermitian; tiny negative values from
// round-off are clamped to zero, anything grossly negative is an error.
template <typename Scalar>
Scalar beampattern_value(const MatrixC<Scalar>& r, Scalar angle_rad, Scalar spacing) {
  if (r.rows() != r.cols()) throw ValidationError("beampattern: covariance must be square");
  const Scalar fro = r.norm();
  if ((r - r.adjoint()).norm() > Scalar(1e-8) * std::max(fro, Scalar(1)))
    throw ValidationError("beampattern: covariance is not Hermitian");
  const VectorC<Scalar> a = steering_vector<Scalar>(angle_rad, r.rows(), spacing);
  const Scalar v = std::real(static_cast<std::complex<Scalar>>(a.dot(r * a)));
  if (v < Scalar(-1e-10) * fro)
    throw NumericalError("beampattern: covariance is materially indefinite at this angle");
  return v < Scalar(0) ? Scalar(0) : v;
}

template <typename Scalar>
VectorR<Scalar> beampattern(const MatrixC<Scalar>& r, const VectorR<Scalar>& angles_rad,
                            Scalar spacing) {
  VectorR<Scalar> out(angles_rad.size());
  for (Eigen::Index i = 0; i < angles_rad.size(); ++i)
    out(i) = beampattern_value<Scalar>(r, angles_rad(i), spacing);
  return out;
}

// Degree grid [lo, hi] with the given step, endpoints included (hi is kept
// even when the step does not land on it exactly).
inline RVec degree_grid(double lo_deg, double hi_deg, double step_deg) {
  if (!(step_deg > 0) || !(hi_deg >= lo_deg)) throw ValidationError("degree_grid: bad range/step");
  const auto n = static_cast<Eigen::Index>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9)) + 1;
  RVec g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = lo_deg + step_deg * static_cast<double>(i);
  if (g(n - 1) < hi_deg - 1e-9) {
    g.conservativeResize(n + 1);
    g(n) = hi_deg;
  }
  return g;
}

}  // namespace icsi
