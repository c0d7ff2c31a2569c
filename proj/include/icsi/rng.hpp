#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "icsi/types.hpp"

namespace icsi {

// Independent substreams per (trial, purpose) pair so experiments can replay
// any trial bit-identically and calibration can reuse common random numbers.
enum class Stream : std::uint64_t {
  Mode = 1,
  Channel = 2,
  Noise = 3,
  AlphaPhase = 4,
  SearchWaveform = 5,
  TrackWaveform = 6,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t trial, Stream stream) {
  std::uint64_t s = base;
  std::uint64_t a = splitmix64(s);
  s ^= trial * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(s);
  s ^= static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL;
  std::uint64_t c = splitmix64(s);
  return a ^ (b + 0x2545f4914f6cdd1dULL * c);
}

// mt19937_64 with a hand-rolled Box-Muller so normal draws are bit-stable
// across standard libraries (std::normal_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform on (0,1]; never 0 so log() is safe.
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * kPi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Circularly-symmetric complex normal CN(0, var): real and imaginary parts
  // are independent N(0, var/2).
  Cplx cnormal(double var = 1.0) {
    const double s = std::sqrt(var / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  // Column-major fill order (Eigen's default storage) so matrix draws are
  // reproducible for a given shape.
  CMat cnormal_matrix(Eigen::Index rows, Eigen::Index cols, double var = 1.0) {
    CMat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal(var);
    return m;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace icsi
