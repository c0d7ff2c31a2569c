#pragma once

#include <variant>

#include "icsi/rng.hpp"
#include "icsi/types.hpp"

namespace icsi {

// Rich scattering: i.i.d. CN(0,1) entries.
struct NlosChannel {
  CMat g;
};

// Single path: g = alpha * b(theta) a(theta)^H.
struct LosChannel {
  double theta_rad = 0.0;
  Cplx alpha{1.0, 0.0};
  CMat g;
};

struct ChannelRealization {
  std::variant<NlosChannel, LosChannel> value;

  const CMat& gain() const {
    return std::visit([](const auto& c) -> const CMat& { return c.g; }, value);
  }
  bool is_los() const { return std::holds_alternative<LosChannel>(value); }
};

// Radar operating mode for one PRI: 1 (tracking) with probability p_d,
// else 0 (searching).
int sample_pri_mode(double p_d, Rng& rng);

ChannelRealization sample_nlos_channel(int n, int m, Rng& rng);

// Builds the rank-one line-of-sight channel; ||g||_F^2 = |alpha|^2 N M by
// construction (verified to 1e-10).
ChannelRealization make_los_channel(double theta_rad, Cplx alpha, int n, int m,
                                    double radar_spacing, double bs_spacing);

// y = g x + w, w entries i.i.d. CN(0, n0). n0 = 0 (noise free) is allowed.
CMat synthesize_rx(const CMat& g, const CMat& x, double n0, Rng& rng);

}  // namespace icsi
