#pragma once

#include "icsi/types.hpp"

namespace icsi {

// Relative singular-value cutoff used everywhere a pseudo-inverse may stand
// in for a plain inverse.
inline constexpr double kPinvRelTol = 1e-10;

// Moore-Penrose pseudo-inverse. Sets *fallback when the matrix is rank
// deficient at the 1e-10 * sigma_max cutoff (i.e. a plain inverse would have
// been unreliable).
CMat pseudo_inverse(const CMat& a, bool* fallback = nullptr);

// Orthogonal projector onto the row space of x, i.e. x^H (x x^H)^{-1} x with
// the inverse replaced by a pseudo-inverse when x is rank deficient.
CMat row_space_projector(const CMat& x, bool* fallback = nullptr);

// Re tr(a^H b); the real Frobenius inner product on complex matrices.
inline double re_inner(const CMat& a, const CMat& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

}  // namespace icsi
