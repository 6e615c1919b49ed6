#pragma once

// Dense kernels on so(n): brackets, exponentials, spans and nullspaces.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewlab/tolerances.hpp"

namespace skewlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

namespace detail {

inline void require_square(const Mat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }
}

inline void require_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace detail

/// Largest entry of |A + Aᵀ|.
inline double skew_defect(const Mat& a) {
  detail::require_square(a, "skew_defect");
  if (a.size() == 0) return 0.0;
  return (a + a.transpose()).cwiseAbs().maxCoeff();
}

inline bool is_skew(const Mat& a, double atol) { return skew_defect(a) <= atol; }

/// ‖QᵀQ − I‖_F
inline double orthogonality_defect(const Mat& q) {
  detail::require_square(q, "orthogonality_defect");
  return (q.transpose() * q - Mat::Identity(q.rows(), q.cols())).norm();
}

/// Commutator AB − BA.
inline Mat bracket(const Mat& a, const Mat& b) {
  detail::require_square(a, "bracket");
  detail::require_same_shape(a, b, "bracket");
  return a * b - b * a;
}

/// exp(t·A) by scaling and squaring with Padé approximants.
inline Mat expm(const Mat& a, double t = 1.0) {
  detail::require_square(a, "expm");
  Mat scaled = t * a;
  return scaled.exp();
}

/// Principal logarithm; callers keep the argument near the identity.
inline Mat logm(const Mat& q) {
  detail::require_square(q, "logm");
  return q.log();
}

/// Elementary rotation generator J_pq = e_q e_pᵀ − e_p e_qᵀ, so J_pq e_p = e_q.
inline Mat elementary_skew(int n, int p, int q) {
  Mat j = Mat::Zero(n, n);
  j(q, p) = 1.0;
  j(p, q) = -1.0;
  return j;
}

/// Column-major flattening; the Euclidean inner product of flattened matrices
/// is trace(AᵀB).
inline Vec flatten(const Mat& a) { return Eigen::Map<const Vec>(a.data(), a.size()); }

inline Mat unflatten(const Vec& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n) {
    throw std::invalid_argument("unflatten: size mismatch");
  }
  return Eigen::Map<const Mat>(v.data(), n, n);
}

/// Ratio σ_{r−1}/σ_r at a cut; +∞ when nothing is dropped or the dropped value is 0.
inline double spectral_gap(const Vec& sigma, Eigen::Index rank) {
  if (rank <= 0 || rank >= sigma.size()) return std::numeric_limits<double>::infinity();
  if (sigma(rank) == 0.0) return std::numeric_limits<double>::infinity();
  return sigma(rank - 1) / sigma(rank);
}

struct SpanResult {
  int rank = 0;
  std::vector<Mat> basis;  // orthonormal under trace(AᵀB)
  Vec singular_values;
  double gap = std::numeric_limits<double>::infinity();

  bool determinate() const { return gap >= kMinSpectralGap; }
};

/// Rank of the linear span of a family of equally sized square matrices, with
/// an orthonormal basis. Singular values ≤ rtol·σ_max are treated as zero.
inline SpanResult rank_of_span(std::span<const Mat> mats, double rtol) {
  SpanResult out;
  if (mats.empty()) return out;
  const auto n = mats.front().rows();
  for (const auto& m : mats) {
    if (m.rows() != n || m.cols() != n) {
      throw std::invalid_argument("rank_of_span: matrices must share a common square dimension");
    }
  }
  Mat stacked(n * n, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) stacked.col(static_cast<Eigen::Index>(i)) = flatten(mats[i]);

  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU);
  out.singular_values = svd.singularValues();
  if (out.singular_values.size() == 0 || out.singular_values(0) == 0.0) return out;

  const double cut = rtol * out.singular_values(0);
  Eigen::Index r = 0;
  while (r < out.singular_values.size() && out.singular_values(r) > cut) ++r;
  out.rank = static_cast<int>(r);
  out.gap = spectral_gap(out.singular_values, r);
  out.basis.reserve(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) out.basis.push_back(unflatten(svd.matrixU().col(i), static_cast<int>(n)));
  return out;
}

inline SpanResult rank_of_span(const std::vector<Mat>& mats, double rtol) {
  return rank_of_span(std::span<const Mat>(mats.data(), mats.size()), rtol);
}

struct NullspaceResult {
  int dim = 0;
  Mat basis;  // columns, orthonormal
  double gap = std::numeric_limits<double>::infinity();

  bool determinate() const { return gap >= kMinSpectralGap; }
};

/// Right nullspace of `a`. Singular values ≤ rtol·max(σ_max, scale) count as
/// zero; `scale` is the size the entries of `a` would have without
/// cancellation, so a system that is pure rounding noise has full nullity.
inline NullspaceResult nullspace(const Mat& a, double rtol, double scale = 0.0) {
  NullspaceResult out;
  const auto cols = a.cols();
  if (a.rows() == 0 || a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) {
    out.dim = static_cast<int>(cols);
    out.basis = Mat::Identity(cols, cols);
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& sigma = svd.singularValues();
  const double cut = rtol * std::max(sigma(0), scale);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  out.dim = static_cast<int>(cols - r);
  out.gap = spectral_gap(sigma, r);
  out.basis = svd.matrixV().rightCols(cols - r);
  return out;
}

/// Throws Indeterminate unless the decision behind `gap` is clear-cut.
inline void require_determinate(double gap, const std::string& what) {
  if (!(gap >= kMinSpectralGap)) throw Indeterminate(what, gap);
}

/// Completes the unit vector along `v` to an orthonormal basis (columns);
/// the first column is v/‖v‖.
inline Mat adapted_frame(const Vec& v) {
  const double nrm = v.norm();
  if (nrm == 0.0) throw std::invalid_argument("adapted_frame: zero vector");
  const auto n = v.size();
  Mat seed = Mat::Identity(n, n);
  seed.col(0) = v / nrm;
  // Column-pivot-free Householder QR keeps the first direction.
  Eigen::HouseholderQR<Mat> qr(seed);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  if (q.col(0).dot(v) < 0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace skewlab
