#pragma once

// Classification predicates for skew-torsion holonomy systems [V, Θ, h] and a
// checker for the conclusions that hold when h is irreducible and not all of
// so(V): symmetric, non-transitive, simple bracket of rank ≥ 2, a unique
// invariant 3-form, and a self-normalizing h.
//
// Group conditions are tested at the Lie-algebra level (the groups involved
// are connected).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewlab/closure.hpp"
#include "skewlab/linalg.hpp"
#include "skewlab/random.hpp"
#include "skewlab/three_form.hpp"
#include "skewlab/tolerances.hpp"

namespace skewlab {

/// Θ together with a subalgebra h ⊂ so(n) that contains every Θ_v.
class HolonomySystem {
 public:
  static constexpr double kValueResidualTol = 1e-8;

  HolonomySystem(ThreeForm theta, LieSubalgebra h) : theta_(std::move(theta)), h_(std::move(h)) {
    if (theta_.dim() != h_.ambient_dim()) throw std::invalid_argument("HolonomySystem: dimension mismatch");
    for (int i = 0; i < theta_.dim(); ++i) {
      const Mat m = contract_basis(theta_, i);
      const double scale = std::max(1.0, m.norm());
      const double r = h_.projection_residual(m);
      if (r > kValueResidualTol * scale) {
        throw std::invalid_argument("HolonomySystem: Θ_e" + std::to_string(i) + " is not in h (residual " +
                                    std::to_string(r) + ")");
      }
    }
  }

  /// Builds h as the closure of the span of the contractions of Θ.
  static HolonomySystem generated_by(const ThreeForm& theta, const Tolerances& tol = {}) {
    return HolonomySystem(theta, lie_closure(contractions(theta), theta.dim(), tol));
  }

  const ThreeForm& theta() const { return theta_; }
  const LieSubalgebra& h() const { return h_; }

 private:
  ThreeForm theta_;
  LieSubalgebra h_;
};

namespace detail {

/// Orthonormal-ish basis of symmetric n×n matrices (E_ii, E_ij + E_ji).
inline std::vector<Mat> symmetric_basis(int n) {
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat s = Mat::Zero(n, n);
      s(i, j) = 1.0;
      s(j, i) = 1.0;
      out.push_back(s);
    }
  return out;
}

/// (A·Θ)(x,y,z) = Θ(Ax,y,z) + Θ(x,Ay,z) + Θ(x,y,Az), restricted to i<j<k.
inline std::vector<double> infinitesimal_action(const Tensor3& theta, const Mat& a) {
  const int n = theta.dim();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) * (n - 2) / 6));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += a(l, i) * theta(l, j, k) + a(l, j) * theta(i, l, k) + a(l, k) * theta(i, j, l);
        }
        out.push_back(s);
      }
  return out;
}

}  // namespace detail

/// Dimension of {S symmetric : [A, S] = 0 for every A in `ops`}.
inline NullspaceResult symmetric_commutant(const std::vector<Mat>& ops, int n, const Tolerances& tol = {}) {
  const auto sym = detail::symmetric_basis(n);
  Mat system(static_cast<Eigen::Index>(ops.size()) * n * n, static_cast<Eigen::Index>(sym.size()));
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (std::size_t s = 0; s < sym.size(); ++s)
      system.block(static_cast<Eigen::Index>(a) * n * n, static_cast<Eigen::Index>(s), n * n, 1) =
          flatten(bracket(ops[a], sym[s]));
  double scale = 0.0;
  for (const auto& a : ops) scale = std::max(scale, a.norm());
  return nullspace(system, tol.rank_rtol, scale);
}

/// True iff the only symmetric matrices commuting with h are multiples of I.
/// An invariant subspace would contribute its orthogonal projection.
inline bool is_irreducible(const LieSubalgebra& h, const Tolerances& tol = {}) {
  const int n = h.ambient_dim();
  if (n == 1) return true;
  if (h.dim() == 0) return false;
  const auto ns = symmetric_commutant(h.basis(), n, tol);
  require_determinate(ns.gap, "is_irreducible");
  return ns.dim == 1;
}

/// Dimension of the tangent space {Xv : X ∈ h} at a unit vector v.
inline int orbit_tangent_dim(const LieSubalgebra& h, const Vec& v, const Tolerances& tol = {}) {
  const int n = h.ambient_dim();
  if (h.dim() == 0) return 0;
  Mat cols(n, h.dim());
  for (int i = 0; i < h.dim(); ++i) cols.col(i) = h.basis()[static_cast<std::size_t>(i)] * v;
  Eigen::JacobiSVD<Mat> svd(cols);
  const Vec& sigma = svd.singularValues();
  if (sigma(0) == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > tol.rank_rtol * sigma(0)) ++r;
  require_determinate(spectral_gap(sigma, r), "orbit_tangent_dim");
  return static_cast<int>(r);
}

/// Transitive on the unit sphere iff every sampled orbit is open, i.e. its
/// tangent space has dimension n − 1.
inline bool is_transitive_sphere(const LieSubalgebra& h, int trials, std::uint64_t seed, const Tolerances& tol = {}) {
  if (trials < 1) throw std::invalid_argument("is_transitive_sphere: trials must be >= 1");
  const int n = h.ambient_dim();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    if (orbit_tangent_dim(h, random_unit(n, rng), tol) != n - 1) return false;
  }
  return true;
}

/// max |A·Θ| over basis elements A of h and increasing triples.
inline double symmetry_defect(const ThreeForm& theta, const LieSubalgebra& h) {
  if (theta.dim() != h.ambient_dim()) throw std::invalid_argument("symmetry_defect: dimension mismatch");
  const Tensor3 dense = theta.dense();
  double worst = 0.0;
  for (const auto& a : h.basis())
    for (double v : detail::infinitesimal_action(dense, a)) worst = std::max(worst, std::abs(v));
  return worst;
}

/// Θ is h-invariant, relative to the size of Θ.
inline bool is_symmetric_system(const HolonomySystem& s, const Tolerances& tol = {}) {
  if (s.theta().is_zero()) return true;
  return symmetry_defect(s.theta(), s.h()) <= tol.rank_rtol * s.theta().max_abs_coefficient();
}

/// max over basis triples of ‖[x,[y,z]] + [y,[z,x]] + [z,[x,y]]‖ for [a,b] = Θ_a b.
inline double jacobi_defect(const ThreeForm& theta) {
  const int n = theta.dim();
  const Tensor3 c = theta.dense();  // [e_a, e_b] = Σ_d c(a,b,d) e_d
  double worst = 0.0;
  Vec j(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int cc = b + 1; cc < n; ++cc) {
        j.setZero();
        for (int d = 0; d < n; ++d) {
          const double bc = c(b, cc, d), ca = c(cc, a, d), ab = c(a, b, d);
          if (bc == 0.0 && ca == 0.0 && ab == 0.0) continue;
          for (int e = 0; e < n; ++e) j(e) += bc * c(a, d, e) + ca * c(b, d, e) + ab * c(cc, d, e);
        }
        worst = std::max(worst, j.norm());
      }
  return worst;
}

/// Jacobi tolerance relative to max|Θ|².
inline bool satisfies_jacobi(const ThreeForm& theta, double rtol) {
  const double scale = theta.max_abs_coefficient();
  return jacobi_defect(theta) <= rtol * std::max(scale * scale, 1e-300);
}

class NotALieBracket : public std::domain_error {
 public:
  explicit NotALieBracket(double defect)
      : std::domain_error("not a Lie bracket (Jacobi defect " + std::to_string(defect) + ")") {}
};

struct LieRankInfo {
  int rank = 0;
  bool simple = false;
  bool killing_negdef = false;
};

/// Killing form B(e_a, e_b) = trace(ad_a ad_b) with ad_a = Θ_{e_a}.
inline Mat killing_form(const ThreeForm& theta) {
  const auto ad = contractions(theta);
  const int n = theta.dim();
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = (ad[static_cast<std::size_t>(i)] * ad[static_cast<std::size_t>(j)]).trace();
  return b;
}

/// Rank = smallest kernel dimension of ad_x over `trials` random x;
/// simplicity = nondegenerate Killing form and no proper ideal (symmetric
/// commutant of the adjoint representation is one-dimensional).
inline LieRankInfo lie_rank_and_simplicity(const ThreeForm& theta, std::uint64_t seed, const Tolerances& tol = {},
                                           int trials = 5) {
  if (!satisfies_jacobi(theta, 1e-8)) throw NotALieBracket(jacobi_defect(theta));
  const int n = theta.dim();
  LieRankInfo info;
  Rng rng(seed);
  info.rank = n;
  for (int t = 0; t < trials; ++t) {
    const Vec x = random_normal(n, rng);
    const Mat ad = contract(theta, x);
    const auto ker = nullspace(ad, tol.rank_rtol, x.norm() * theta.max_abs_coefficient());
    require_determinate(ker.gap, "lie_rank");
    info.rank = std::min(info.rank, ker.dim);
  }

  const Mat b = killing_form(theta);
  Eigen::SelfAdjointEigenSolver<Mat> eig(b);
  const Vec& ev = eig.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  if (scale == 0.0) return info;
  const double cut = tol.rank_rtol * scale;
  const bool nondegenerate = (ev.cwiseAbs().array() > cut).all();
  info.killing_negdef = (ev.array() < -cut).all();
  if (nondegenerate) {
    const auto comm = symmetric_commutant(contractions(theta), n, tol);
    require_determinate(comm.gap, "ideal detection");
    info.simple = comm.dim == 1;
  }
  return info;
}

/// Dimension of the space of 3-forms annihilated by every element of h.
inline NullspaceResult invariant_threeforms(const LieSubalgebra& h, const Tolerances& tol = {}) {
  const int n = h.ambient_dim();
  std::vector<Triple> triples;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) triples.push_back({i, j, k});
  const auto m = static_cast<Eigen::Index>(triples.size());
  if (m == 0) return {};
  Mat system = Mat::Zero(static_cast<Eigen::Index>(h.dim()) * m, m);
  for (Eigen::Index col = 0; col < m; ++col) {
    ThreeForm unit(n);
    const auto& t = triples[static_cast<std::size_t>(col)];
    unit.set(t[0], t[1], t[2], 1.0);
    const Tensor3 dense = unit.dense();
    for (int a = 0; a < h.dim(); ++a) {
      const auto act = detail::infinitesimal_action(dense, h.basis()[static_cast<std::size_t>(a)]);
      for (Eigen::Index r = 0; r < m; ++r) system(a * m + r, col) = act[static_cast<std::size_t>(r)];
    }
  }
  return nullspace(system, tol.rank_rtol, 1.0);
}

inline int invariant_threeform_dim(const LieSubalgebra& h, const Tolerances& tol = {}) {
  const auto ns = invariant_threeforms(h, tol);
  require_determinate(ns.gap, "invariant_threeform_dim");
  return ns.dim;
}

/// {A ∈ so(n) : [A, h] ⊆ h}
inline LieSubalgebra normalizer_in_so(const LieSubalgebra& h, const Tolerances& tol = {}) {
  const int n = h.ambient_dim();
  std::vector<Mat> gens;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) gens.push_back(elementary_skew(n, p, q));
  if (h.dim() == 0) return LieSubalgebra(n, rank_of_span(gens, tol.rank_rtol).basis);

  const auto m = static_cast<Eigen::Index>(gens.size());
  Mat system(static_cast<Eigen::Index>(h.dim()) * n * n, m);
  double scale = 0.0;
  for (Eigen::Index col = 0; col < m; ++col)
    for (int a = 0; a < h.dim(); ++a) {
      const Mat br = bracket(gens[static_cast<std::size_t>(col)], h.basis()[static_cast<std::size_t>(a)]);
      scale = std::max(scale, br.norm());
      system.block(static_cast<Eigen::Index>(a) * n * n, col, n * n, 1) = flatten(br - h.project(br));
    }
  const auto ns = nullspace(system, tol.rank_rtol, scale);
  require_determinate(ns.gap, "normalizer_in_so");
  std::vector<Mat> elements;
  for (int c = 0; c < ns.dim; ++c) {
    Mat x = Mat::Zero(n, n);
    for (Eigen::Index g = 0; g < m; ++g) x += ns.basis(g, c) * gens[static_cast<std::size_t>(g)];
    elements.push_back(x);
  }
  return LieSubalgebra(n, rank_of_span(elements, tol.rank_rtol).basis);
}

struct StructureReport {
  int ambient_dim = 0;
  int h_dim = 0;
  bool irreducible = false;
  bool transitive = false;
  bool symmetric = false;
  double jacobi_defect = 0.0;
  bool simple = false;
  int rank = 0;
  bool killing_negdef = false;
  int invariant_threeform_dim = 0;
  bool normalizer_equals_h = false;
  int normalizer_dim = 0;
  /// irreducible ∧ h ≠ so(n); when false the implication holds vacuously.
  bool hypothesis_met = false;
  bool passed = true;
  std::vector<std::string> failures;
  std::vector<std::string> indeterminate;
  /// Set when an irreducible proper system produces a rank-1 bracket.
  bool rank_one_observed = false;
  std::uint64_t seed = 0;
  Tolerances tolerances;
};

/// Absolute Jacobi threshold used by the implication check, relative to max|Θ|².
inline constexpr double kJacobiRtol = 1e-10;

/// Evaluates every predicate and checks the implication
/// irreducible ∧ h ≠ so(n) ⇒ symmetric, non-transitive, Jacobi, simple,
/// rank ≥ 2, one invariant 3-form, h self-normalizing.
inline StructureReport verify_stht(const HolonomySystem& s, std::uint64_t seed, const Tolerances& tol = {},
                                   int trials = 5) {
  if (s.theta().is_zero()) throw std::invalid_argument("verify_stht: Θ must be nonzero");
  StructureReport r;
  r.seed = seed;
  r.tolerances = tol;
  r.ambient_dim = s.theta().dim();
  r.h_dim = s.h().dim();

  auto guarded = [&r](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const Indeterminate&) {
      r.indeterminate.emplace_back(name);
    }
  };

  guarded("irreducible", [&] { r.irreducible = is_irreducible(s.h(), tol); });
  guarded("transitive", [&] { r.transitive = is_transitive_sphere(s.h(), trials, seed, tol); });
  r.symmetric = is_symmetric_system(s, tol);
  r.jacobi_defect = jacobi_defect(s.theta());
  guarded("rank_and_simplicity", [&] {
    try {
      const auto info = lie_rank_and_simplicity(s.theta(), seed, tol, trials);
      r.rank = info.rank;
      r.simple = info.simple;
      r.killing_negdef = info.killing_negdef;
    } catch (const NotALieBracket&) {
      r.rank = 0;
      r.simple = false;
      r.killing_negdef = false;
    }
  });
  guarded("invariant_threeform_dim", [&] { r.invariant_threeform_dim = invariant_threeform_dim(s.h(), tol); });
  guarded("normalizer", [&] {
    const auto nrm = normalizer_in_so(s.h(), tol);
    r.normalizer_dim = nrm.dim();
    r.normalizer_equals_h = nrm.dim() == s.h().dim();
  });

  r.hypothesis_met = r.irreducible && !s.h().is_full();
  if (!r.hypothesis_met) return r;

  auto expect = [&r](bool ok, const char* what) {
    if (!ok) {
      r.passed = false;
      r.failures.emplace_back(what);
    }
  };
  for (const auto& name : r.indeterminate) expect(false, ("indeterminate:" + name).c_str());
  const double scale = s.theta().max_abs_coefficient();
  expect(r.symmetric, "symmetric");
  expect(!r.transitive, "non-transitive");
  expect(r.jacobi_defect <= kJacobiRtol * std::max(scale * scale, 1.0), "jacobi");
  expect(r.simple, "simple");
  expect(r.rank >= 2, "rank>=2");
  expect(r.invariant_threeform_dim == 1, "invariant_threeform_dim==1");
  expect(r.normalizer_equals_h, "normalizer==h");
  r.rank_one_observed = r.rank == 1;
  return r;
}

}  // namespace skewlab
