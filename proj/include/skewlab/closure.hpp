#pragma once

// Lie subalgebras of so(n) obtained by generation.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewlab/linalg.hpp"
#include "skewlab/three_form.hpp"
#include "skewlab/tolerances.hpp"

namespace skewlab {

/// A subspace of so(n) given by a trace-orthonormal basis. `bracket_defect`
/// measures how far the span is from being closed under commutators.
class LieSubalgebra {
 public:
  explicit LieSubalgebra(int ambient_dim) : n_(ambient_dim), flat_(Mat::Zero(ambient_dim * ambient_dim, 0)) {
    if (ambient_dim <= 0) throw std::invalid_argument("LieSubalgebra: ambient dimension must be positive");
  }

  /// Takes a basis that is already orthonormal under trace(AᵀB).
  LieSubalgebra(int ambient_dim, std::vector<Mat> orthonormal_basis) : LieSubalgebra(ambient_dim) {
    flat_.resize(static_cast<Eigen::Index>(n_) * n_, static_cast<Eigen::Index>(orthonormal_basis.size()));
    for (std::size_t i = 0; i < orthonormal_basis.size(); ++i) {
      const auto& b = orthonormal_basis[i];
      if (b.rows() != n_ || b.cols() != n_) throw std::invalid_argument("LieSubalgebra: basis dimension mismatch");
      flat_.col(static_cast<Eigen::Index>(i)) = flatten(b);
    }
    basis_ = std::move(orthonormal_basis);
    bracket_defect_ = compute_bracket_defect();
  }

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Mat>& basis() const { return basis_; }
  double bracket_defect() const { return bracket_defect_; }
  bool is_full() const { return dim() == n_ * (n_ - 1) / 2; }

  /// Orthogonal projection onto the span.
  Mat project(const Mat& a) const {
    if (dim() == 0) return Mat::Zero(n_, n_);
    return unflatten(flat_ * (flat_.transpose() * flatten(a)), n_);
  }

  /// ‖A − P(A)‖_F
  double projection_residual(const Mat& a) const {
    if (a.rows() != n_ || a.cols() != n_) throw std::invalid_argument("projection_residual: dimension mismatch");
    const Vec v = flatten(a);
    if (dim() == 0) return v.norm();
    return (v - flat_ * (flat_.transpose() * v)).norm();
  }

  /// Largest relative projection residual of the other algebra's basis.
  double containment_residual_of(const LieSubalgebra& other) const {
    double worst = 0.0;
    for (const auto& b : other.basis()) worst = std::max(worst, projection_residual(b));
    return worst;
  }

  LieSubalgebra conjugated(const Mat& q) const {
    std::vector<Mat> out;
    out.reserve(basis_.size());
    for (const auto& b : basis_) out.push_back(q * b * q.transpose());
    return LieSubalgebra(n_, std::move(out));
  }

 private:
  double compute_bracket_defect() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < basis_.size(); ++a)
      for (std::size_t b = a + 1; b < basis_.size(); ++b)
        worst = std::max(worst, projection_residual(bracket(basis_[a], basis_[b])));
    return worst;
  }

  int n_;
  std::vector<Mat> basis_;
  Mat flat_;  // n²×dim, columns are the flattened basis
  double bracket_defect_ = 0.0;
};

/// Span of the generators, not closed under brackets.
struct SpanCandidate {
  LieSubalgebra span;
  bool zero_form = false;
};

/// g*_Θ = span{Θ_v : v ∈ Rⁿ}, spanned by the basis contractions.
inline SpanCandidate span_contractions(const ThreeForm& theta, const Tolerances& tol = {}) {
  if (theta.is_zero()) return {LieSubalgebra(theta.dim()), true};
  auto s = rank_of_span(contractions(theta), tol.rank_rtol);
  return {LieSubalgebra(theta.dim(), std::move(s.basis)), false};
}

namespace detail {

/// Growing orthonormal basis stored as flattened columns.
class OrthonormalAccumulator {
 public:
  explicit OrthonormalAccumulator(int n) : n_(n), flat_(Mat::Zero(n * n, 0)) {}

  int size() const { return static_cast<int>(flat_.cols()); }

  /// Adds the component of `a` orthogonal to the current span when its norm
  /// exceeds `threshold`. Two Gram-Schmidt passes.
  bool try_add(const Mat& a, double threshold) {
    Vec v = flatten(a);
    for (int pass = 0; pass < 2; ++pass) {
      if (flat_.cols() > 0) v -= flat_ * (flat_.transpose() * v);
    }
    const double r = v.norm();
    if (!(r > threshold)) return false;
    flat_.conservativeResize(Eigen::NoChange, flat_.cols() + 1);
    flat_.col(flat_.cols() - 1) = v / r;
    return true;
  }

  Mat element(int i) const { return unflatten(flat_.col(i), n_); }

  std::vector<Mat> elements() const {
    std::vector<Mat> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i) out.push_back(element(i));
    return out;
  }

 private:
  int n_;
  Mat flat_;
};

}  // namespace detail

/// Residual threshold for admitting a new direction during closure. Basis
/// elements are unit-norm, so brackets are O(1) and the threshold is absolute.
inline double closure_threshold(const Tolerances& tol) { return tol.rank_rtol; }

/// Smallest bracket-closed subspace of so(n) containing the generators.
/// Each round brackets the newly added elements against the whole basis and
/// keeps components orthogonal to the current span.
inline LieSubalgebra lie_closure(const std::vector<Mat>& generators, int ambient_dim, const Tolerances& tol = {}) {
  for (const auto& g : generators) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim) {
      throw std::invalid_argument("lie_closure: generators must be " + std::to_string(ambient_dim) + "x" +
                                  std::to_string(ambient_dim));
    }
    const double defect = skew_defect(g);
    if (defect > tol.skew_atol * std::max(1.0, g.norm())) {
      throw std::invalid_argument("lie_closure: generator is not skew (defect " + std::to_string(defect) + ")");
    }
  }
  detail::OrthonormalAccumulator acc(ambient_dim);
  for (auto& b : rank_of_span(generators, tol.rank_rtol).basis) acc.try_add(b, closure_threshold(tol));

  const int max_dim = ambient_dim * (ambient_dim - 1) / 2;
  int fresh_begin = 0;
  while (fresh_begin < acc.size() && acc.size() < max_dim) {
    const int fresh_end = acc.size();
    for (int a = fresh_begin; a < fresh_end; ++a) {
      const Mat xa = acc.element(a);
      for (int b = 0; b < fresh_end; ++b) {
        if (b >= fresh_begin && b <= a) continue;  // each fresh pair once
        acc.try_add(bracket(xa, acc.element(b)), closure_threshold(tol));
        if (acc.size() >= max_dim) break;
      }
      if (acc.size() >= max_dim) break;
    }
    fresh_begin = fresh_end;
  }
  return LieSubalgebra(ambient_dim, acc.elements());
}

inline LieSubalgebra lie_closure(const LieSubalgebra& h, const Tolerances& tol = {}) {
  return lie_closure(h.basis(), h.ambient_dim(), tol);
}

/// [h, h], closed.
inline LieSubalgebra derived_algebra(const LieSubalgebra& h, const Tolerances& tol = {}) {
  std::vector<Mat> brackets;
  const auto& b = h.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) brackets.push_back(bracket(b[i], b[j]));
  return lie_closure(brackets, h.ambient_dim(), tol);
}

/// Orthogonality threshold for transports fed into pullbacks.
inline constexpr double kTransportOrthogonalityTol = 1e-8;

/// Closure of the pulled-back contractions τ⁻¹ ∘ Θ^s_v ∘ τ over samples s and
/// basis vectors v. One form and one orthogonal transport per sample.
inline LieSubalgebra sampled_h_p(const std::vector<ThreeForm>& forms, const std::vector<Mat>& transports,
                                 const Tolerances& tol = {}) {
  if (forms.empty()) throw std::invalid_argument("sampled_h_p: no samples");
  if (forms.size() != transports.size()) throw std::invalid_argument("sampled_h_p: one transport per sample required");
  const int n = forms.front().dim();
  std::vector<Mat> generators;
  for (std::size_t s = 0; s < forms.size(); ++s) {
    const auto& q = transports[s];
    if (forms[s].dim() != n || q.rows() != n || q.cols() != n) {
      throw std::invalid_argument("sampled_h_p: dimension mismatch at sample " + std::to_string(s));
    }
    const double defect = orthogonality_defect(q);
    if (defect > kTransportOrthogonalityTol) {
      throw std::invalid_argument("sampled_h_p: transport " + std::to_string(s) + " is not orthogonal (defect " +
                                  std::to_string(defect) + ")");
    }
    for (const auto& m : contractions(forms[s])) generators.push_back(q.transpose() * m * q);
  }
  return lie_closure(generators, n, tol);
}

/// Same as sampled_h_p for operator families that are not backed by a
/// ThreeForm (each entry: the contraction operators at one sample).
inline LieSubalgebra sampled_operator_closure(const std::vector<std::vector<Mat>>& operators,
                                              const std::vector<Mat>& transports, int n, const Tolerances& tol = {}) {
  if (operators.size() != transports.size()) {
    throw std::invalid_argument("sampled_operator_closure: one transport per sample required");
  }
  std::vector<Mat> generators;
  for (std::size_t s = 0; s < operators.size(); ++s) {
    const auto& q = transports[s];
    if (orthogonality_defect(q) > kTransportOrthogonalityTol) {
      throw std::invalid_argument("sampled_operator_closure: transport " + std::to_string(s) + " is not orthogonal");
    }
    for (const auto& m : operators[s]) generators.push_back(q.transpose() * m * q);
  }
  return lie_closure(generators, n, tol);
}

}  // namespace skewlab
