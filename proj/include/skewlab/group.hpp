#pragma once

// Compact matrix Lie groups with a bi-invariant metric, in left trivialization.
//
// The Lie algebra is identified with Rⁿ through a basis {E_a} of the defining
// representation that is orthonormal for ⟨X, Y⟩ = −Re trace(XY). Structure
// constants c(a,b,d) = ⟨[E_a, E_b], E_d⟩ are totally antisymmetric.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewlab/linalg.hpp"
#include "skewlab/random.hpp"
#include "skewlab/three_form.hpp"

namespace skewlab {

class GroupModel {
 public:
  GroupModel(std::string name, std::vector<CMat> basis) : name_(std::move(name)), basis_(std::move(basis)) {
    if (basis_.empty()) throw std::invalid_argument("GroupModel: empty basis");
    matrix_dim_ = static_cast<int>(basis_.front().rows());
    const int n = lie_dim();
    c_ = Tensor3(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const CMat br = basis_[a] * basis_[b] - basis_[b] * basis_[a];
        for (int d = 0; d < n; ++d) c_(a, b, d) = inner(br, basis_[d]);
      }
    antisymmetry_defect_ = alternation_defect(c_);
    jacobi_defect_ = compute_jacobi_defect();
  }

  const std::string& name() const { return name_; }
  int matrix_dim() const { return matrix_dim_; }
  int lie_dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<CMat>& basis() const { return basis_; }
  const StructureConstants& structure_constants() const { return c_; }
  double antisymmetry_defect() const { return antisymmetry_defect_; }
  double jacobi_defect() const { return jacobi_defect_; }
  static constexpr const char* inner_product_convention() { return "<X,Y> = -Re tr(XY), basis orthonormal"; }

  /// ⟨X, Y⟩ = −Re trace(XY) on defining matrices.
  static double inner(const CMat& x, const CMat& y) { return -(x * y).trace().real(); }

  /// Σ x_a E_a
  CMat to_matrix(const Vec& x) const {
    require_algebra(x);
    CMat m = CMat::Zero(matrix_dim_, matrix_dim_);
    for (int a = 0; a < lie_dim(); ++a) m += x(a) * basis_[static_cast<std::size_t>(a)];
    return m;
  }

  /// Coordinates of an algebra matrix.
  Vec coordinates(const CMat& m) const {
    Vec x(lie_dim());
    for (int a = 0; a < lie_dim(); ++a) x(a) = inner(m, basis_[static_cast<std::size_t>(a)]);
    return x;
  }

  /// (ad_x)(d, b) = Σ_a x_a c(a,b,d)
  Mat ad(const Vec& x) const {
    require_algebra(x);
    const int n = lie_dim();
    Mat m = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      if (x(a) == 0.0) continue;
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) m(d, b) += x(a) * c_(a, b, d);
    }
    return m;
  }

  Mat ad_basis(int a) const { return ad(Vec::Unit(lie_dim(), a)); }

  Vec bracket(const Vec& x, const Vec& y) const { return ad(x) * y; }

  /// exp of an algebra element in the defining representation.
  CMat exp(const Vec& x) const {
    const CMat m = to_matrix(x);
    return m.exp();
  }

  CMat identity() const { return CMat::Identity(matrix_dim_, matrix_dim_); }

  /// Θ(x,y,z) = ⟨[x,y], z⟩
  ThreeForm bracket_form(double atol = 1e-12) const { return three_form_from_bracket(c_, atol, name_); }

  /// Killing form trace(ad_a ad_b).
  Mat killing_form() const {
    const int n = lie_dim();
    std::vector<Mat> ads;
    for (int a = 0; a < n; ++a) ads.push_back(ad_basis(a));
    Mat b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = (ads[i] * ads[j]).trace();
    return b;
  }

  bool is_real() const {
    for (const auto& e : basis_)
      if (e.imag().cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
  }

 private:
  void require_algebra(const Vec& x) const {
    if (x.size() != lie_dim()) throw std::invalid_argument("GroupModel: algebra vector has wrong length");
  }

  double compute_jacobi_defect() const {
    const int n = lie_dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc)
          for (int e = 0; e < n; ++e) {
            double s = 0.0;
            for (int d = 0; d < n; ++d)
              s += c_(b, cc, d) * c_(a, d, e) + c_(cc, a, d) * c_(b, d, e) + c_(a, b, d) * c_(cc, d, e);
            worst = std::max(worst, std::abs(s));
          }
    return worst;
  }

  std::string name_;
  std::vector<CMat> basis_;
  int matrix_dim_ = 0;
  Tensor3 c_{1};
  double antisymmetry_defect_ = 0.0;
  double jacobi_defect_ = 0.0;
};

namespace detail {

inline GroupModel make_su(int k) {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<CMat> basis;
  // Generalized Gell-Mann matrices λ in Gell-Mann order; E = −iλ/√2.
  for (int q = 1; q < k; ++q) {
    for (int p = 0; p < q; ++p) {
      CMat sym = CMat::Zero(k, k);
      sym(p, q) = 1.0;
      sym(q, p) = 1.0;
      CMat asym = CMat::Zero(k, k);
      asym(p, q) = -i;
      asym(q, p) = i;
      basis.push_back(-i * s * sym);
      basis.push_back(-i * s * asym);
    }
    CMat diag = CMat::Zero(k, k);
    const double norm = std::sqrt(2.0 / (q * (q + 1.0)));
    for (int m = 0; m < q; ++m) diag(m, m) = norm;
    diag(q, q) = -q * norm;
    basis.push_back(-i * s * diag);
  }
  return GroupModel("su" + std::to_string(k), std::move(basis));
}

inline GroupModel make_so(int k) {
  std::vector<CMat> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) basis.push_back((s * elementary_skew(k, p, q)).cast<std::complex<double>>());
  return GroupModel("so" + std::to_string(k), std::move(basis));
}

inline GroupModel make_torus(int k) {
  std::vector<CMat> basis;
  for (int p = 0; p < k; ++p) {
    CMat d = CMat::Zero(k, k);
    d(p, p) = std::complex<double>(0.0, 1.0);
    basis.push_back(d);
  }
  return GroupModel("torus" + std::to_string(k), std::move(basis));
}

}  // namespace detail

/// Supported names: su<k> (k ≥ 2), so<k> (k ≥ 3; also so_n(k)), torus<k>.
inline GroupModel make_group(const std::string& name) {
  std::smatch m;
  static const std::regex su_re(R"(su(\d+))"), so_re(R"(so(\d+)|so_n\((\d+)\))"), torus_re(R"(torus(\d+))");
  if (std::regex_match(name, m, su_re)) {
    const int k = std::stoi(m[1]);
    if (k >= 2 && k <= 8) return detail::make_su(k);
  } else if (std::regex_match(name, m, so_re)) {
    const int k = std::stoi(m[1].matched ? m[1].str() : m[2].str());
    if (k >= 3 && k <= 12) return detail::make_so(k);
  } else if (std::regex_match(name, m, torus_re)) {
    const int k = std::stoi(m[1]);
    if (k >= 1 && k <= 16) return detail::make_torus(k);
  }
  throw std::invalid_argument("make_group: unsupported group '" + name + "'");
}

/// f(g) = c, or f(g) = α + β·Re trace(P·g) for a fixed seeded matrix P.
class ScalarField {
 public:
  enum class Kind { Constant, Trace };

  static ScalarField constant(double c) {
    ScalarField f;
    f.kind_ = Kind::Constant;
    f.alpha_ = c;
    return f;
  }

  /// P has standard normal entries (complex for complex groups) drawn from `seed`.
  static ScalarField trace(double alpha, double beta, const GroupModel& group, std::uint64_t seed) {
    ScalarField f;
    f.kind_ = Kind::Trace;
    f.alpha_ = alpha;
    f.beta_ = beta;
    f.seed_ = seed;
    Rng rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    const int m = group.matrix_dim();
    const bool real = group.is_real();
    f.p_ = CMat::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double re = dist(rng);
        const double im = real ? 0.0 : dist(rng);
        f.p_(i, j) = {re, im};
      }
    return f;
  }

  /// Parses `const:<c>` or `trace:<alpha>,<beta>`.
  static ScalarField parse(const std::string& spec, const GroupModel& group, std::uint64_t seed) {
    std::smatch m;
    static const std::regex const_re(R"(const:([^,]+))"), trace_re(R"(trace:([^,]+),([^,]+))");
    try {
      if (std::regex_match(spec, m, const_re)) return constant(std::stod(m[1]));
      if (std::regex_match(spec, m, trace_re)) return trace(std::stod(m[1]), std::stod(m[2]), group, seed);
    } catch (const std::logic_error&) {
    }
    throw std::invalid_argument("scalar field spec '" + spec + "' is not const:<c> or trace:<alpha>,<beta>");
  }

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant || beta_ == 0.0; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  const CMat& p() const { return p_; }

  std::string describe() const {
    if (kind_ == Kind::Constant) return "const:" + format(alpha_);
    return "trace:" + format(alpha_) + "," + format(beta_) + "@seed" + std::to_string(seed_);
  }

  double value(const CMat& g) const {
    if (kind_ == Kind::Constant) return alpha_;
    return alpha_ + beta_ * (p_ * g).trace().real();
  }

  /// (Xf)(g) for the left-invariant field X, whose value at g is g·X.
  double derivative(const GroupModel& group, const CMat& g, const Vec& x) const {
    if (kind_ == Kind::Constant) return 0.0;
    return beta_ * (p_ * g * group.to_matrix(x)).trace().real();
  }

  /// Gradient in left-trivialized orthonormal coordinates.
  Vec gradient(const GroupModel& group, const CMat& g) const {
    Vec out = Vec::Zero(group.lie_dim());
    if (kind_ == Kind::Constant) return out;
    const CMat pg = p_ * g;
    for (int a = 0; a < group.lie_dim(); ++a) out(a) = beta_ * (pg * group.basis()[a]).trace().real();
    return out;
  }

 private:
  static std::string format(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }

  Kind kind_ = Kind::Constant;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::uint64_t seed_ = 0;
  CMat p_;
};

/// ∇̃^f = ∇ − f·D^λ with D^λ_X Y = (λ/2)[X, Y] on left-invariant fields.
/// λ = 0 is Levi-Civita, λ = ±1 with f ≡ 1 are the flat canonical connections.
struct ConnectionSpec {
  double lambda = 0.0;
  ScalarField f = ScalarField::constant(1.0);

  /// Coefficient k in ∇̃_X Y = X(Y) + k·[X, Y]: k = (1 − fλ)/2.
  double bracket_coefficient(double f_value) const { return 0.5 * (1.0 - f_value * lambda); }

  bool difference_vanishes() const { return lambda == 0.0 || (f.kind() == ScalarField::Kind::Constant && f.alpha() == 0.0); }
};

}  // namespace skewlab
