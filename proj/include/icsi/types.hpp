#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace icsi {

template <typename Scalar>
using MatrixC = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorC = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixR = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorR = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMat = MatrixC<double>;
using CVec = VectorC<double>;
using RMat = MatrixR<double>;
using RVec = VectorR<double>;
using Cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Bad arguments / malformed inputs: CLI exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown (non-convergence, singularities, ...): CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Saddle-point root bracketing failed; callers may fall back to Monte Carlo.
struct SaddleFailure : NumericalError {
  explicit SaddleFailure(const std::string& what) : NumericalError(what) {}
};

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace icsi
