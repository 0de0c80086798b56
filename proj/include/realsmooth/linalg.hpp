#ifndef REALSMOOTH_LINALG_HPP
#define REALSMOOTH_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>

#include "realsmooth/poly_system.hpp"

namespace realsmooth {

// Count of singular values above tol_rel * sigma_1; rank 0 for a zero matrix.
inline int numerical_rank(const CMat& M, double tol_rel = 1e-8) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol_rel * sv(0)) ++rank;
  return rank;
}

// Rank with an absolute guard: singular values are measured against
// tol_rel * max(sigma_1, scale). Jacobians evaluated at anchors on squared-up
// varieties can be uniformly tiny; a purely relative cutoff would count their
// noise rows as rank, which derails the deflation sequence.
inline int anchored_rank(const CMat& M, double tol_rel, double scale) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = tol_rel * std::max(sv(0), scale);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

// Ratio sigma_1 / sigma_min as a cheap conditioning estimate; infinity when
// the matrix is numerically singular.
inline double condition_estimate(const CMat& M) {
  Eigen::JacobiSVD<CMat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return std::numeric_limits<double>::infinity();
  double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace realsmooth

#endif
