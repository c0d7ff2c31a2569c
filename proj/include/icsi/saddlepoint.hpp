#pragma once

#include "icsi/types.hpp"

namespace icsi {

// CDF problem for an indefinite Hermitian quadratic form
//   T = sum_i lambda_i |v_i|^2,  v ~ CN(b_bar, I),
// namely the GLRT statistic with lambda the eigenvalues of I_N (x) (A - B)
// and b_bar the noise-normalized mean rotated into the eigenbasis.
struct SaddlePointProblem {
  RVec eigenvalues;
  CVec transformed_mean;
  double beta = 1.0;   // initial in-strip probe; halved until admissible
  double gamma = 0.0;  // evaluation threshold
};

// One-term saddle-point approximation of P(T <= gamma), clamped to [0,1].
// The saddle point is the unique root of s'(z) = 0 on (0, 1/max|lambda_i|),
// found by bisection; no sign change raises SaddleFailure (callers may fall
// back to Monte Carlo).
double saddlepoint_cdf(const SaddlePointProblem& problem);

// Builds the GLRT problem for hypothesis h (mean g*x0 under 0, g*x1 under 1)
// using the Kronecker structure: only the L x L core A - B is
// eigendecomposed and its spectrum replicated N times.
SaddlePointProblem make_glrt_problem(const CMat& g, const CMat& x0, const CMat& x1,
                                     double n0, double gamma, int hypothesis);

// Reference path eigendecomposing the full NL x NL matrix; exists to
// cross-check the Kronecker shortcut.
SaddlePointProblem make_glrt_problem_direct(const CMat& g, const CMat& x0,
                                            const CMat& x1, double n0, double gamma,
                                            int hypothesis);

// The L x L GLRT core A - B (difference of the two row-space projectors).
CMat glrt_core(const CMat& x0, const CMat& x1, bool* pinv_fallback = nullptr);

}  // namespace icsi
