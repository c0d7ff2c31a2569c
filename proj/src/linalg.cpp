#include "icsi/linalg.hpp"

#include <Eigen/SVD>

namespace icsi {

CMat pseudo_inverse(const CMat& a, bool* fallback) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  const double cutoff = sv.size() ? kPinvRelTol * sv(0) : 0.0;
  RVec inv_sv = RVec::Zero(sv.size());
  bool dropped = false;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0)
      inv_sv(i) = 1.0 / sv(i);
    else
      dropped = true;
  }
  if (fallback) *fallback = dropped;
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

CMat row_space_projector(const CMat& x, bool* fallback) {
  Eigen::JacobiSVD<CMat> svd(x, Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  const double cutoff = sv.size() ? kPinvRelTol * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0) ++rank;
  if (fallback) *fallback = rank < std::min(x.rows(), x.cols());
  const CMat v = svd.matrixV().leftCols(rank);
  return v * v.adjoint();
}

}  // namespace icsi
