#include <doctest.h>

#include <cmath>

#include "icsi/channel.hpp"
#include "icsi/detectors.hpp"
#include "icsi/linalg.hpp"
#include "icsi/waveform.hpp"

using namespace icsi;

namespace {

struct Fixture {
  int m, n, l;
  double p_r = 1.0, n0 = 0.05;
  CMat x0, x1, g;

  Fixture(int m_, int n_, int l_, std::uint64_t seed) : m(m_), n(n_), l(l_) {
    Rng rng(seed);
    x0 = searching_waveform(m, l, p_r, rng);
    CMat b = rng.cnormal_matrix(m, m);
    CMat r = b * b.adjoint();
    r *= p_r / r.trace().real();
    x1 = covariance_to_waveform(r, l, rng);
    g = rng.cnormal_matrix(n, m);
  }
};

}  // namespace

TEST_CASE("nlos glrt separates the modes at high snr") {
  Fixture f(4, 5, 12, 21);
  Rng noise(77);
  const CMat y1 = synthesize_rx(f.g, f.x1, f.n0, noise);
  const CMat y0 = synthesize_rx(f.g, f.x0, f.n0, noise);
  CHECK(glrt_nlos(y1, f.x0, f.x1, f.n0).decision == 1);
  CHECK(glrt_nlos(y0, f.x0, f.x1, f.n0).decision == 0);
}

TEST_CASE("nlos glrt statistic matches the projector form") {
  Fixture f(3, 4, 9, 22);
  Rng noise(5);
  const CMat y = synthesize_rx(f.g, f.x1, f.n0, noise);
  const DetectionResult res = glrt_nlos(y, f.x0, f.x1, f.n0);

  const CMat a = row_space_projector(f.x1);
  const CMat b = (static_cast<double>(f.m) / (f.l * f.p_r)) * f.x0.adjoint() * f.x0;
  const double manual = ((y * (a - b) * y.adjoint()).trace().real()) / f.n0;
  CHECK(res.statistic == doctest::Approx(manual).epsilon(1e-10));
  CHECK_FALSE(res.pinv_fallback);
}

TEST_CASE("nlos glrt threshold follows the prior when given") {
  Fixture f(3, 3, 8, 23);
  Rng noise(6);
  const CMat y = synthesize_rx(f.g, f.x0, f.n0, noise);
  CHECK(glrt_nlos(y, f.x0, f.x1, f.n0).gamma == 0.0);
  const double expected = std::log(0.1 / 0.9);
  CHECK(glrt_nlos(y, f.x0, f.x1, f.n0, 0.9).gamma == doctest::Approx(expected).epsilon(1e-15));
  CHECK_THROWS_AS(glrt_nlos(y, f.x0, f.x1, f.n0, 1.0), ValidationError);
  CHECK_THROWS_AS(glrt_nlos(y, f.x0, f.x1, 0.0), ValidationError);
}

TEST_CASE("general rao reduces to the equal-antenna form when m = n") {
  Fixture f(5, 5, 11, 24);
  Rng noise(7);
  const CMat y = synthesize_rx(f.g, f.x0, f.n0, noise);
  const double general = rao_nlos(y, f.x0, f.p_r, f.n0, 3.0).statistic;
  const double special = rao_special(y, f.x0, f.p_r, f.n0, 3.0).statistic;
  CHECK(general == doctest::Approx(special).epsilon(1e-8));
}

TEST_CASE("equal-antenna rao statistic is chi squared under searching") {
  const int m = 4, n = 4, l = 8;
  const double n0 = 0.3, p_r = 1.0;
  Rng rng(31);
  const CMat x0 = searching_waveform(m, l, p_r, rng);
  const CMat g = rng.cnormal_matrix(n, m);
  const int k = 2 * n * (l - m);  // null degrees of freedom
  double mean = 0.0;
  const int draws = 4000;
  for (int d = 0; d < draws; ++d) {
    const CMat y = synthesize_rx(g, x0, n0, rng);
    const double s = rao_special(y, x0, p_r, n0, 0.0).statistic;
    CHECK(s >= 0.0);
    mean += s;
  }
  mean /= draws;
  // chi^2_k sample mean: s.e. = sqrt(2k/draws) ~ 0.18
  CHECK(std::abs(mean - k) < 0.6);
}

TEST_CASE("rao preconditions") {
  Fixture f(5, 3, 11, 25);  // fewer receive than transmit antennas
  Rng noise(8);
  const CMat y = synthesize_rx(f.g, f.x0, f.n0, noise);
  CHECK_THROWS_AS(rao_nlos(y, f.x0, f.p_r, f.n0, 1.0), ValidationError);
  CHECK_THROWS_AS(rao_special(y, f.x0, f.p_r, f.n0, 1.0), ValidationError);
}

TEST_CASE("los glrt separates the modes and recovers the direction") {
  const int m = 6, n = 8, l = 16;
  const double p_r = 1.0, n0 = 1e-4;
  Rng rng(41);
  const CMat x0 = searching_waveform(m, l, p_r, rng);
  const TrackingDesign d = design_tracking_covariance(m, p_r, 0.0, 10.0);
  const CMat x1 = covariance_to_waveform(d.covariance, l, rng);
  const double theta = 20.0;
  const ChannelRealization chan =
      make_los_channel(deg2rad(theta), std::polar(1.0, 0.3), n, m, 0.5, 0.5);

  const CMat y1 = synthesize_rx(chan.gain(), x1, n0, rng);
  const LosDetectionResult r1 = glrt_los(y1, x0, x1, n0, 0.5, 0.5);
  CHECK(r1.decision == 1);
  CHECK(std::abs(r1.theta1_hat_deg - theta) < 0.1);

  const CMat y0 = synthesize_rx(chan.gain(), x0, n0, rng);
  const LosDetectionResult r0 = glrt_los(y0, x0, x1, n0, 0.5, 0.5);
  CHECK(r0.decision == 0);
  CHECK(std::abs(r0.theta0_hat_deg - theta) < 0.1);
}

TEST_CASE("energy detector bands") {
  CMat y(2, 4);
  y.setZero();
  y(0, 0) = Cplx(2.0, 0.0);  // statistic = 4 / 4 = 1
  const DetectionResult in = energy_detector(y, 0.1, 0.5, 2.0);
  CHECK(in.statistic == doctest::Approx(1.0));
  CHECK(in.decision == 0);
  CHECK(energy_detector(y, 0.1, 1.5, 2.0).decision == 1);   // below the band
  CHECK(energy_detector(y, 0.1, 0.1, 0.5).decision == 1);   // above the band
  CHECK(energy_detector(y, 0.1, 1.0, 2.0).decision == 0);   // boundary stays H0
  CHECK_THROWS_AS(energy_detector(y, 0.1, 2.0, 1.0), ValidationError);
}
