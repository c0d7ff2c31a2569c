#include "icsi/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace icsi {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_covariance_csv(const std::string& path, const CMat& r) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write covariance file '" + path + "'");
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      if (j) out << ',';
      out << format_g17(r(i, j).real()) << ',' << format_g17(r(i, j).imag());
    }
    out << '\n';
  }
  if (!out) throw ValidationError("write failed for covariance file '" + path + "'");
}

CMat read_covariance_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open covariance file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("covariance file '" + path + "': bad number '" + cell + "'");
      }
    }
    if (vals.empty()) continue;
    if (vals.size() % 2 != 0)
      throw ValidationError("covariance file '" + path + "': odd entry count (need re,im pairs)");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ValidationError("covariance file '" + path + "' is empty");
  const std::size_t m = rows.size();
  for (const auto& r : rows)
    if (r.size() != 2 * m)
      throw ValidationError("covariance file '" + path + "' is not square");
  CMat r(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Cplx(rows[i][2 * j], rows[i][2 * j + 1]);
  return r;
}

void write_beampattern_csv(const std::string& path, const RVec& angles_deg,
                           const RVec& power) {
  if (angles_deg.size() != power.size())
    throw ValidationError("beampattern CSV: angle/power lengths disagree");
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write beampattern file '" + path + "'");
  out << "angle_deg,power_db\n";
  for (Eigen::Index i = 0; i < angles_deg.size(); ++i)
    out << format_g17(angles_deg(i)) << ','
        << format_g17(10.0 * std::log10(std::max(power(i), 1e-30))) << '\n';
  if (!out) throw ValidationError("write failed for beampattern file '" + path + "'");
}

void write_threshold_csv(const std::string& path, const RVec& thresholds,
                         const RVec& error_prob) {
  if (thresholds.size() != error_prob.size())
    throw ValidationError("threshold CSV: column lengths disagree");
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write threshold file '" + path + "'");
  out << "threshold,error_prob\n";
  for (Eigen::Index i = 0; i < thresholds.size(); ++i)
    out << format_g17(thresholds(i)) << ',' << format_g17(error_prob(i)) << '\n';
  if (!out) throw ValidationError("write failed for threshold file '" + path + "'");
}

void write_ed_threshold_csv(const std::string& path, const RVec& gamma_tilde,
                            const RVec& eta_tilde, const RVec& error_prob) {
  if (gamma_tilde.size() != eta_tilde.size() || gamma_tilde.size() != error_prob.size())
    throw ValidationError("energy threshold CSV: column lengths disagree");
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write threshold file '" + path + "'");
  out << "gamma_tilde,eta_tilde,error_prob\n";
  for (Eigen::Index i = 0; i < gamma_tilde.size(); ++i)
    out << format_g17(gamma_tilde(i)) << ',' << format_g17(eta_tilde(i)) << ','
        << format_g17(error_prob(i)) << '\n';
  if (!out) throw ValidationError("write failed for threshold file '" + path + "'");
}

}  // namespace icsi
