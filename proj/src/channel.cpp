#include "icsi/channel.hpp"

#include <cmath>

#include "icsi/array.hpp"

namespace icsi {

int sample_pri_mode(double p_d, Rng& rng) {
  if (!(p_d >= 0.0 && p_d <= 1.0))
    throw ValidationError("sample_pri_mode: p_d must lie in [0, 1]");
  return rng.uniform01() <= p_d ? 1 : 0;
}

ChannelRealization sample_nlos_channel(int n, int m, Rng& rng) {
  if (n < 1 || m < 1) throw ValidationError("sample_nlos_channel: bad dimensions");
  NlosChannel c;
  c.g = rng.cnormal_matrix(n, m);
  return {std::move(c)};
}

ChannelRealization make_los_channel(double theta_rad, Cplx alpha, int n, int m,
                                    double radar_spacing, double bs_spacing) {
  if (n < 1 || m < 1) throw ValidationError("make_los_channel: bad dimensions");
  LosChannel c;
  c.theta_rad = theta_rad;
  c.alpha = alpha;
  const CVec b = steering_vector<double>(theta_rad, n, bs_spacing);
  const CVec a = steering_vector<double>(theta_rad, m, radar_spacing);
  c.g = alpha * b * a.adjoint();
  const double want = std::norm(alpha) * n * m;
  if (std::abs(c.g.squaredNorm() - want) > 1e-10 * std::max(want, 1.0))
    throw NumericalError("make_los_channel: rank-one norm identity violated");
  return {std::move(c)};
}

CMat synthesize_rx(const CMat& g, const CMat& x, double n0, Rng& rng) {
  if (g.cols() != x.rows())
    throw ValidationError("synthesize_rx: channel/waveform dimensions disagree");
  if (!(n0 >= 0)) throw ValidationError("synthesize_rx: n0 must be >= 0");
  return g * x + rng.cnormal_matrix(g.rows(), x.cols(), n0);
}

}  // namespace icsi
