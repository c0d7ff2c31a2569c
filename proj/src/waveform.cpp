#include "icsi/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "icsi/array.hpp"
#include "icsi/linalg.hpp"

namespace icsi {

namespace {

CMat orthonormal_rows(int m, int l, Rng& rng) {
  const CMat g = rng.cnormal_matrix(l, m);
  Eigen::HouseholderQR<CMat> qr(g);
  const CMat q = qr.householderQ() * CMat::Identity(l, m);
  return q.adjoint();
}

// <c, r> >= offset with c Hermitian.
struct Halfspace {
  CMat c;
  double offset = 0.0;
  double c_norm2 = 1.0;
};

struct ProbeResult {
  CMat r;
  bool feasible = false;
  int sweeps = 0;
  double residual = 0.0;
};

double worst_violation(const CMat& r, const std::vector<Halfspace>& hs, double p_r,
                       int m) {
  double resid = 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(r, Eigen::EigenvaluesOnly);
  resid = std::max(resid, -es.eigenvalues().minCoeff());
  for (int i = 0; i < m; ++i) {
    resid = std::max(resid, std::abs(r(i, i).real() - p_r / m));
    resid = std::max(resid, std::abs(r(i, i).imag()));
  }
  for (const auto& h : hs)
    resid = std::max(resid, h.offset - re_inner(h.c, r));
  return resid;
}

// One Dykstra feasibility probe: cyclic projections onto every halfspace,
// the PSD cone, and the fixed-diagonal affine set, with the usual
// per-set correction terms.
ProbeResult dykstra_probe(const CMat& r_init, const std::vector<Halfspace>& hs,
                          double p_r, int m, const SolverOptions& opts) {
  const std::size_t n_sets = hs.size() + 2;
  std::vector<CMat> corr(n_sets, CMat::Zero(m, m));
  CMat r = r_init;
  const double cutoff = 10.0 * opts.tol * std::max(1.0, p_r);
  // Near-degenerate intersections make the per-sweep change stall while the
  // residual is still marginally over the cutoff; when that happens, demand
  // progressively more progress before giving up.
  double stall_thresh = opts.tol;
  double resid = std::numeric_limits<double>::infinity();
  bool resid_fresh = false;
  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    const CMat r_prev = r;
    std::size_t k = 0;
    for (const auto& h : hs) {
      const CMat z = r + corr[k];
      const double v = re_inner(h.c, z);
      if (v < h.offset)
        r = z + ((h.offset - v) / h.c_norm2) * h.c;
      else
        r = z;
      corr[k] = z - r;
      ++k;
    }
    {
      CMat z = r + corr[k];
      z = 0.5 * (z + z.adjoint().eval());
      Eigen::SelfAdjointEigenSolver<CMat> es(z);
      const RVec ev = es.eigenvalues().cwiseMax(0.0);
      r = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
      corr[k] = z - r;
      ++k;
    }
    {
      const CMat z = r + corr[k];
      r = z;
      for (int i = 0; i < m; ++i) r(i, i) = Cplx(p_r / m, 0.0);
      corr[k] = z - r;
    }
    resid_fresh = false;
    if ((r - r_prev).norm() < stall_thresh * std::max(1.0, r.norm())) {
      resid = worst_violation(r, hs, p_r, m);
      resid_fresh = true;
      if (resid <= cutoff || stall_thresh <= 1e-15) {
        ++sweep;
        break;
      }
      stall_thresh *= 1e-2;
    }
  }
  if (!resid_fresh) resid = worst_violation(r, hs, p_r, m);
  return {r, resid <= cutoff, sweep, resid};
}

}  // namespace

CMat searching_waveform(int m, int l, double p_r, Rng& rng) {
  if (m < 1) throw ValidationError("searching_waveform: m must be >= 1");
  if (l < m) throw ValidationError("searching_waveform: need l >= m samples");
  if (!(p_r > 0)) throw ValidationError("searching_waveform: p_r must be positive");
  const double scale = l * p_r / m;
  CMat x0 = std::sqrt(scale) * orthonormal_rows(m, l, rng);
  const CMat gram = x0 * x0.adjoint();
  const double err = (gram - scale * CMat::Identity(m, m)).norm();
  if (err > 1e-10 * scale * std::sqrt(static_cast<double>(m)))
    throw NumericalError("searching_waveform: orthogonality drifted beyond 1e-10");
  return x0;
}

void WaveformSet::validate(const CMat* r_track) const {
  const auto m = x0.rows();
  const auto l = x0.cols();
  if (x1.rows() != m || x1.cols() != l)
    throw ValidationError("waveform set: x0 and x1 shapes disagree");
  const double scale = static_cast<double>(l) * p_r / static_cast<double>(m);
  const CMat gram0 = x0 * x0.adjoint();
  if ((gram0 - scale * CMat::Identity(m, m)).norm() >
      1e-8 * scale * std::sqrt(static_cast<double>(m)))
    throw ValidationError("waveform set: x0 rows are not orthogonal at power L P_R / M");
  if (std::abs(gram0.trace().real() - l * p_r) > 1e-8 * l * p_r)
    throw ValidationError("waveform set: x0 total power != L P_R");
  const CMat r1 = (x1 * x1.adjoint()) / static_cast<double>(l);
  if (std::abs(r1.trace().real() * l - l * p_r) > 1e-8 * l * p_r)
    throw ValidationError("waveform set: x1 total power != L P_R");
  for (Eigen::Index i = 0; i < m; ++i)
    if (std::abs(r1(i, i).real() - p_r / m) > 1e-6 * p_r)
      throw ValidationError("waveform set: x1 per-antenna power != P_R / M");
  if (r_track && (r1 - *r_track).norm() > 1e-6 * std::max(1.0, r_track->norm()))
    throw ValidationError("waveform set: x1 sample covariance drifted from its design");
}

TrackingDesign design_tracking_covariance(int m, double p_r, double theta0_deg,
                                          double width_deg,
                                          const SolverOptions& opts) {
  if (m < 2) throw ValidationError("design_tracking_covariance: m must be >= 2");
  if (!(p_r > 0)) throw ValidationError("design_tracking_covariance: p_r must be positive");
  if (!(width_deg > 0) || width_deg >= 180)
    throw ValidationError("design_tracking_covariance: width must be in (0, 180) deg");
  if (theta0_deg < -90 || theta0_deg > 90)
    throw ValidationError("design_tracking_covariance: theta0 outside [-90, 90] deg");

  const double half_width = 0.5 * width_deg;
  const CVec a0 = steering_vector<double>(deg2rad(theta0_deg), m, opts.spacing);
  const CMat aa0 = a0 * a0.adjoint();

  // Sidelobe margin constraints <aa0 - a a^H, R> >= t; the offsets are set
  // per probe. Half-power edges add fixed band constraints.
  std::vector<Halfspace> hs;
  std::vector<double> sidelobe_deg;
  const RVec grid = degree_grid(-90.0, 90.0, opts.grid_step_deg);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (std::abs(grid(i) - theta0_deg) < half_width + opts.exclusion_deg) continue;
    sidelobe_deg.push_back(grid(i));
    const CVec am = steering_vector<double>(deg2rad(grid(i)), m, opts.spacing);
    Halfspace h;
    h.c = aa0 - am * am.adjoint();
    h.c_norm2 = h.c.squaredNorm();
    hs.push_back(std::move(h));
  }
  const std::size_t n_sidelobe = hs.size();
  for (const double edge : {theta0_deg - half_width, theta0_deg + half_width}) {
    if (edge < -90 || edge > 90) continue;
    const CVec ae = steering_vector<double>(deg2rad(edge), m, opts.spacing);
    const CMat aae = ae * ae.adjoint();
    const double lo = 0.5 * (1.0 - opts.half_power_band);
    const double hi = 0.5 * (1.0 + opts.half_power_band);
    Halfspace below;  // P(edge) >= lo * P(theta0)
    below.c = aae - lo * aa0;
    below.c_norm2 = below.c.squaredNorm();
    hs.push_back(std::move(below));
    Halfspace above;  // P(edge) <= hi * P(theta0)
    above.c = hi * aa0 - aae;
    above.c_norm2 = above.c.squaredNorm();
    hs.push_back(std::move(above));
  }

  auto set_margin = [&](double t) {
    for (std::size_t i = 0; i < n_sidelobe; ++i) hs[i].offset = t;
  };

  const CMat r_iso = (p_r / m) * CMat::Identity(m, m);
  double t_lo = -2.0 * m * p_r;
  double t_hi = m * p_r;

  set_margin(t_lo);
  ProbeResult best = dykstra_probe(r_iso, hs, p_r, m, opts);
  int total_sweeps = best.sweeps;
  if (!best.feasible) {
    std::ostringstream msg;
    msg << "design_tracking_covariance: no feasible covariance even at margin "
        << t_lo << " (residual " << best.residual << " after " << best.sweeps
        << " sweeps)";
    throw NumericalError(msg.str());
  }
  double t_best = t_lo;

  while (t_hi - t_best > opts.bisect_rel_gap * std::max(1.0, std::abs(t_best))) {
    const double mid = 0.5 * (t_best + t_hi);
    set_margin(mid);
    ProbeResult probe = dykstra_probe(best.r, hs, p_r, m, opts);
    total_sweeps += probe.sweeps;
    if (probe.feasible) {
      best = std::move(probe);
      t_best = mid;
    } else {
      t_hi = mid;
    }
  }

  // Polish: exact diagonal, then a small blend toward the isotropic
  // covariance. The blend keeps the diagonal exact, makes R strictly
  // positive definite (the isotropic beampattern is flat so relative
  // margins survive), and keeps the factorized waveform well conditioned.
  CMat r = best.r;
  r = 0.5 * (r + r.adjoint().eval());
  for (int i = 0; i < m; ++i) r(i, i) = Cplx(p_r / m, 0.0);
  r = (1.0 - opts.diag_load) * r + opts.diag_load * r_iso;

  TrackingDesign design;
  design.covariance = r;
  design.converged = true;
  design.sweeps = total_sweeps;
  design.max_residual = best.residual;
  const double p0 = beampattern_value<double>(r, deg2rad(theta0_deg), opts.spacing);
  double margin = std::numeric_limits<double>::infinity();
  for (const double ang : sidelobe_deg)
    margin = std::min(margin,
                      p0 - beampattern_value<double>(r, deg2rad(ang), opts.spacing));
  design.margin = margin;
  design.margin_positive = margin > 0;
  return design;
}

CMat covariance_to_waveform(const CMat& r, int l, Rng& rng) {
  if (r.rows() != r.cols())
    throw ValidationError("covariance_to_waveform: covariance must be square");
  const int m = static_cast<int>(r.rows());
  if (l < m) throw ValidationError("covariance_to_waveform: need l >= m samples");
  if ((r - r.adjoint()).norm() > 1e-8 * std::max(1.0, r.norm()))
    throw ValidationError("covariance_to_waveform: covariance is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(r);
  const RVec ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -1e-8 * std::max(top, 1e-300))
    throw ValidationError("covariance_to_waveform: covariance is not positive semidefinite");
  const RVec root = ev.cwiseMax(0.0).cwiseSqrt();
  const CMat f = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
  return std::sqrt(static_cast<double>(l)) * f * orthonormal_rows(m, l, rng);
}

}  // namespace icsi
