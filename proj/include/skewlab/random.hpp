#pragma once

#include <cstdint>
#include <random>

#include "skewlab/linalg.hpp"

namespace skewlab {

/// All randomness flows through explicitly seeded engines.
using Rng = std::mt19937_64;

inline Vec random_normal(int n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

inline Vec random_unit(int n, Rng& rng) {
  Vec v = random_normal(n, rng);
  while (v.norm() == 0.0) v = random_normal(n, rng);
  return v / v.norm();
}

/// Haar-ish random rotation: QR of a Gaussian matrix with sign fix, det +1.
inline Mat random_orthogonal(int n, Rng& rng) {
  Mat g(n, n);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = dist(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace skewlab
