#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "icsi/array.hpp"
#include "icsi/channel.hpp"

using namespace icsi;

TEST_CASE("pri mode follows the prior") {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) CHECK(sample_pri_mode(0.0, rng) == 0);
  for (int i = 0; i < 50; ++i) CHECK(sample_pri_mode(1.0, rng) == 1);
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += sample_pri_mode(0.9, rng);
  CHECK(std::abs(static_cast<double>(ones) / n - 0.9) < 0.01);
  CHECK_THROWS_AS(sample_pri_mode(1.5, rng), ValidationError);
}

TEST_CASE("rich-scattering channel has unit-variance entries") {
  Rng rng(2);
  const int n = 4, m = 3, draws = 4000;
  double e1 = 0.0, e2 = 0.0;
  for (int d = 0; d < draws; ++d) {
    const ChannelRealization c = sample_nlos_channel(n, m, rng);
    REQUIRE(c.gain().rows() == n);
    REQUIRE(c.gain().cols() == m);
    CHECK_FALSE(c.is_los());
    e1 += c.gain().sum().real();
    e2 += c.gain().squaredNorm();
  }
  const double cells = static_cast<double>(draws) * n * m;
  CHECK(std::abs(e1 / cells) < 0.02);
  CHECK(std::abs(e2 / cells - 1.0) < 0.03);
}

TEST_CASE("line-of-sight channel is rank one with the right energy") {
  const double theta = deg2rad(20.0);
  const Cplx alpha = std::polar(1.0, 0.7);
  const int n = 6, m = 4;
  const ChannelRealization c = make_los_channel(theta, alpha, n, m, 0.5, 0.5);
  CHECK(c.is_los());
  const CMat& g = c.gain();
  CHECK(std::abs(g.squaredNorm() - std::norm(alpha) * n * m) < 1e-10 * n * m);

  Eigen::JacobiSVD<CMat> svd(g);
  CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));

  const CVec a = steering_vector<double>(theta, m, 0.5);
  const CVec b = steering_vector<double>(theta, n, 0.5);
  CHECK((g - alpha * b * a.adjoint()).norm() < 1e-12 * g.norm());

  const auto& los = std::get<LosChannel>(c.value);
  CHECK(los.theta_rad == theta);
  CHECK(los.alpha == alpha);
}

TEST_CASE("received block is signal plus scaled noise") {
  Rng rng(3);
  const ChannelRealization c = sample_nlos_channel(4, 3, rng);
  const CMat x = rng.cnormal_matrix(3, 10);

  Rng quiet(5);
  const CMat clean = synthesize_rx(c.gain(), x, 0.0, quiet);
  CHECK((clean - c.gain() * x).norm() == 0.0);

  const double n0 = 0.25;
  double power = 0.0;
  const int draws = 2000;
  for (int d = 0; d < draws; ++d) {
    const CMat y = synthesize_rx(c.gain(), x, n0, rng);
    power += (y - c.gain() * x).squaredNorm();
  }
  power /= static_cast<double>(draws) * 4 * 10;
  CHECK(std::abs(power - n0) < 0.02 * n0);
}

TEST_CASE("dimension mismatches are rejected") {
  Rng rng(9);
  const ChannelRealization c = sample_nlos_channel(4, 3, rng);
  const CMat x = rng.cnormal_matrix(5, 10);  // wrong row count
  CHECK_THROWS_AS(synthesize_rx(c.gain(), x, 0.1, rng), ValidationError);
  CHECK_THROWS_AS(sample_nlos_channel(0, 3, rng), ValidationError);
  CHECK_THROWS_AS(make_los_channel(0.1, Cplx(1, 0), 0, 3, 0.5, 0.5), ValidationError);
}
