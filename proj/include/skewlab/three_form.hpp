#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skewlab/linalg.hpp"

namespace skewlab {

using Triple = std::array<int, 3>;

namespace detail {

/// Sorts a triple in place and returns the permutation sign, or 0 on a repeat.
inline int sort_with_sign(Triple& t) {
  int sign = 1;
  if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
  if (t[1] > t[2]) { std::swap(t[1], t[2]); sign = -sign; }
  if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
  if (t[0] == t[1] || t[1] == t[2]) return 0;
  return sign;
}

inline std::string triple_string(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i << "," << j << "," << k << ")";
  return os.str();
}

}  // namespace detail

/// Dense n×n×n array of a trilinear form, T(i,j,k) at i + n·(j + n·k).
class Tensor3 {
 public:
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

 private:
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) +
                                                                         static_cast<std::size_t>(n_) * k);
  }
  int n_;
  std::vector<double> data_;
};

/// Totally skew trilinear form on Rⁿ, stored on strictly increasing index
/// triples. Values at other orderings carry the permutation sign.
class ThreeForm {
 public:
  using Terms = std::map<Triple, double>;

  explicit ThreeForm(int dim, std::optional<std::string> name = std::nullopt) : dim_(dim), name_(std::move(name)) {
    if (dim <= 0) throw std::invalid_argument("ThreeForm: dimension must be positive");
  }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  const std::optional<std::string>& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Sets the coefficient of e_i∧e_j∧e_k; requires 0 ≤ i < j < k < dim.
  void set(int i, int j, int k, double c) {
    if (!(0 <= i && i < j && j < k && k < dim_)) {
      throw std::invalid_argument("ThreeForm: triple " + detail::triple_string(i, j, k) +
                                  " is not strictly increasing within [0, " + std::to_string(dim_) + ")");
    }
    if (c == 0.0) {
      terms_.erase(Triple{i, j, k});
    } else {
      terms_[Triple{i, j, k}] = c;
    }
  }

  /// Adds `c` at an arbitrarily ordered triple, applying the permutation sign.
  void add(int i, int j, int k, double c) {
    Triple t{i, j, k};
    const int sign = detail::sort_with_sign(t);
    if (sign == 0) return;
    set(t[0], t[1], t[2], coefficient(t[0], t[1], t[2]) + sign * c);
  }

  /// Stored coefficient at an increasing triple (0 if absent).
  double coefficient(int i, int j, int k) const {
    auto it = terms_.find(Triple{i, j, k});
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Θ(e_i, e_j, e_k) for any index order.
  double operator()(int i, int j, int k) const {
    Triple t{i, j, k};
    const int sign = detail::sort_with_sign(t);
    if (sign == 0) return 0.0;
    return sign * coefficient(t[0], t[1], t[2]);
  }

  /// Θ(x, y, z) for vectors.
  double evaluate(const Vec& x, const Vec& y, const Vec& z) const {
    double s = 0.0;
    for (const auto& [t, c] : terms_) {
      const int i = t[0], j = t[1], k = t[2];
      // Expand the determinant of the 3×3 minor.
      s += c * (x(i) * (y(j) * z(k) - y(k) * z(j)) - x(j) * (y(i) * z(k) - y(k) * z(i)) +
                x(k) * (y(i) * z(j) - y(j) * z(i)));
    }
    return s;
  }

  bool is_zero() const { return terms_.empty(); }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [t, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  ThreeForm scaled(double s) const {
    ThreeForm out(dim_, name_);
    for (const auto& [t, c] : terms_) out.set(t[0], t[1], t[2], s * c);
    return out;
  }

  Tensor3 dense() const {
    Tensor3 d(dim_);
    for (const auto& [t, c] : terms_) {
      const int i = t[0], j = t[1], k = t[2];
      d(i, j, k) = c;
      d(j, k, i) = c;
      d(k, i, j) = c;
      d(j, i, k) = -c;
      d(i, k, j) = -c;
      d(k, j, i) = -c;
    }
    return d;
  }

  /// Θ transformed by an orthogonal Q: (Q·Θ)(x,y,z) = Θ(Qᵀx, Qᵀy, Qᵀz).
  ThreeForm transformed(const Mat& q, double drop_below = 0.0) const;

 private:
  int dim_;
  std::optional<std::string> name_;
  Terms terms_;
};

/// Θ_v: the skew matrix M with ⟨M y, z⟩ = Θ(v, y, z).
inline Mat contract(const ThreeForm& theta, const Vec& v) {
  if (v.size() != theta.dim()) {
    throw std::invalid_argument("contract: vector length " + std::to_string(v.size()) +
                                " does not match form dimension " + std::to_string(theta.dim()));
  }
  const int n = theta.dim();
  Mat m = Mat::Zero(n, n);
  for (const auto& [t, c] : theta.terms()) {
    const int i = t[0], j = t[1], k = t[2];
    // M(k, j) = Σ_a v_a Θ(a, j, k), expanded over the six orderings.
    m(k, j) += c * v(i);
    m(j, k) -= c * v(i);
    m(i, k) += c * v(j);
    m(k, i) -= c * v(j);
    m(j, i) += c * v(k);
    m(i, j) -= c * v(k);
  }
  return m;
}

inline Mat contract_basis(const ThreeForm& theta, int i) {
  return contract(theta, Vec::Unit(theta.dim(), i));
}

/// {Θ_{e_0}, …, Θ_{e_{n−1}}}
inline std::vector<Mat> contractions(const ThreeForm& theta) {
  std::vector<Mat> out;
  out.reserve(static_cast<std::size_t>(theta.dim()));
  for (int i = 0; i < theta.dim(); ++i) out.push_back(contract_basis(theta, i));
  return out;
}

inline ThreeForm ThreeForm::transformed(const Mat& q, double drop_below) const {
  if (q.rows() != dim_ || q.cols() != dim_) throw std::invalid_argument("ThreeForm::transformed: dimension mismatch");
  const Mat qt = q.transpose();
  ThreeForm out(dim_, name_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      for (int k = j + 1; k < dim_; ++k) {
        const double c = evaluate(qt.col(i), qt.col(j), qt.col(k));
        if (std::abs(c) > drop_below) out.set(i, j, k, c);
      }
    }
  }
  return out;
}

/// Largest violation of total skewness of a dense trilinear array, checked
/// over a swap of the first two and of the last two slots.
inline double alternation_defect(const Tensor3& t) {
  const int n = t.dim();
  double defect = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        defect = std::max(defect, std::abs(t(i, j, k) + t(j, i, k)));
        defect = std::max(defect, std::abs(t(i, j, k) + t(i, k, j)));
      }
  return defect;
}

/// Structure constants c(a,b,d) with [e_a, e_b] = Σ_d c(a,b,d) e_d.
using StructureConstants = Tensor3;

/// Θ(x, y, z) = ⟨[x, y], z⟩ for a bracket written in an orthonormal basis of an
/// ad-invariant inner product.
inline ThreeForm three_form_from_bracket(const StructureConstants& c, double atol,
                                         std::optional<std::string> name = std::nullopt) {
  const double defect = alternation_defect(c);
  if (defect > atol) {
    throw std::invalid_argument("three_form_from_bracket: bracket is not skew for the inner product (max symmetry defect " +
                                std::to_string(defect) + ")");
  }
  const int n = c.dim();
  ThreeForm out(n, std::move(name));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double v = c(i, j, k);
        if (std::abs(v) > atol) out.set(i, j, k, v);
      }
  return out;
}

}  // namespace skewlab
