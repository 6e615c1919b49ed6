#pragma once

// Holonomy and torsion-generated algebras of ∇̃^f on a bi-invariant group,
// estimated by pulling operators back to the identity along geodesics.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewlab/closure.hpp"
#include "skewlab/geometry.hpp"
#include "skewlab/group.hpp"
#include "skewlab/random.hpp"
#include "skewlab/tolerances.hpp"

namespace skewlab {

/// Curvature threshold below which an operator counts as zero.
inline constexpr double kFlatThreshold = 1e-10;

/// A sample point exp(X) reached from e along the geodesic exp(tX), t ∈ [0,1].
struct SamplePoint {
  Vec direction;
  CMat point;
};

/// Sample 0 is the identity; later samples use Gaussian directions of
/// expected norm ~1.5. The first k samples do not depend on the total count.
inline std::vector<SamplePoint> sample_points(const GroupModel& g, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("sample_points: need at least one sample");
  Rng rng(seed);
  std::vector<SamplePoint> out;
  const int n = g.lie_dim();
  out.push_back({Vec::Zero(n), g.identity()});
  for (int s = 1; s < n_samples; ++s) {
    Vec x = random_normal(n, rng) * (1.5 / std::sqrt(static_cast<double>(n)));
    out.push_back({x, g.exp(x)});
  }
  return out;
}

/// ∇̃^f transport from e to exp(X) along the geodesic.
inline Mat f_transport_to(const GroupModel& g, const ConnectionSpec& spec, const Vec& x, const Tolerances& tol = {}) {
  CMat p = g.identity();
  const int substeps = std::max(1, static_cast<int>(std::ceil(1.0 / tol.ode_step)));
  return transport_along_leg(g, spec, p, x, 1.0, substeps);
}

/// ad(g) ⊂ so(g), the algebra every holonomy algebra here must sit in.
inline LieSubalgebra adjoint_algebra(const GroupModel& g, const Tolerances& tol = {}) {
  std::vector<Mat> ads;
  for (int a = 0; a < g.lie_dim(); ++a) ads.push_back(g.ad_basis(a));
  return LieSubalgebra(g.lie_dim(), rank_of_span(ads, tol.rank_rtol).basis);
}

/// Closure of τ̃⁻¹ ∘ R̃^f(e_a, e_b) ∘ τ̃ over sample points and basis pairs.
inline LieSubalgebra ambrose_singer_closure(const GroupModel& g, const ConnectionSpec& spec, int n_samples,
                                            std::uint64_t seed, const Tolerances& tol = {}) {
  const int n = g.lie_dim();
  std::vector<Mat> generators;
  for (const auto& sp : sample_points(g, n_samples, seed)) {
    const Mat tau = f_transport_to(g, spec, sp.direction, tol);
    const Mat tau_inv = tau.inverse();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const Mat r = curvature_f(g, spec, Vec::Unit(n, a), Vec::Unit(n, b), sp.point);
        if (r.norm() < kFlatThreshold) continue;
        generators.push_back(tau_inv * r * tau);
      }
  }
  return lie_closure(generators, n, tol);
}

struct HpEstimate {
  LieSubalgebra algebra;
  /// "Levi-Civita: D vanishes" when λ = 0 or f ≡ 0.
  std::optional<std::string> flag;
};

/// Closure of τ⁻¹ ∘ (f·D^λ)_v ∘ τ with τ the Levi-Civita transport.
inline HpEstimate h_p_estimate(const GroupModel& g, const ConnectionSpec& spec, int n_samples, std::uint64_t seed,
                               const Tolerances& tol = {}) {
  const int n = g.lie_dim();
  if (spec.difference_vanishes()) return {LieSubalgebra(n), std::string("Levi-Civita: D vanishes")};
  std::vector<Mat> generators;
  for (const auto& sp : sample_points(g, n_samples, seed)) {
    const Mat tau = transport_closed_form(g, 0.0, sp.direction, 1.0);
    const Mat tau_inv = tau.transpose();
    const double f = spec.f.value(sp.point);
    for (int a = 0; a < n; ++a)
      generators.push_back(tau_inv * (f * difference_operator(g, spec.lambda, Vec::Unit(n, a))) * tau);
  }
  return {lie_closure(generators, n, tol), std::nullopt};
}

struct HolonomyReport {
  std::string group;
  double lambda = 0.0;
  std::string field;
  std::uint64_t seed = 0;
  int samples = 0;
  int lie_dim = 0;
  int hol_dim = 0;
  int h_p_dim = 0;
  bool flat = false;
  double hol_bracket_defect = 0.0;
  double containment_residual = 0.0;  // hol ⊆ ad(g)
  std::optional<std::string> h_p_flag;
  Tolerances tolerances;
};

inline HolonomyReport holonomy_report(const GroupModel& g, const ConnectionSpec& spec, int n_samples,
                                      std::uint64_t seed, const Tolerances& tol = {}) {
  HolonomyReport r;
  r.group = g.name();
  r.lambda = spec.lambda;
  r.field = spec.f.describe();
  r.seed = seed;
  r.samples = n_samples;
  r.lie_dim = g.lie_dim();
  r.tolerances = tol;
  const auto hol = ambrose_singer_closure(g, spec, n_samples, seed, tol);
  r.hol_dim = hol.dim();
  r.flat = hol.dim() == 0;
  r.hol_bracket_defect = hol.bracket_defect();
  r.containment_residual = adjoint_algebra(g, tol).containment_residual_of(hol);
  const auto hp = h_p_estimate(g, spec, n_samples, seed, tol);
  r.h_p_dim = hp.algebra.dim();
  r.h_p_flag = hp.flag;
  return r;
}

/// Uniform grid lo, lo + Δ, …, hi with `count` points.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
  double resolution() const { return count > 1 ? (hi - lo) / (count - 1) : 0.0; }

  /// Parses "lo:hi:count".
  static Grid parse(const std::string& spec) {
    static const std::regex re(R"(([^:]+):([^:]+):(\d+))");
    std::smatch m;
    if (std::regex_match(spec, m, re)) {
      try {
        Grid grid{std::stod(m[1]), std::stod(m[2]), std::stoi(m[3])};
        if (grid.count >= 1 && grid.hi >= grid.lo) return grid;
      } catch (const std::logic_error&) {
      }
    }
    throw std::invalid_argument("grid spec '" + spec + "' is not lo:hi:count");
  }
};

struct FlatScanRow {
  double f = 0.0;
  double max_curvature_norm = 0.0;
};

struct FlatScan {
  std::vector<FlatScanRow> rows;
  std::vector<double> zeros;  // f values with max curvature norm < kFlatThreshold
};

/// max over basis pairs of ‖R̃^f(e_a, e_b)‖ for a constant field f.
inline double constant_field_curvature_norm(const GroupModel& g, double lambda, double f) {
  const int n = g.lie_dim();
  const ConnectionSpec spec{lambda, ScalarField::constant(f)};
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      worst = std::max(worst, curvature_f(g, spec, Vec::Unit(n, a), Vec::Unit(n, b), g.identity()).norm());
  return worst;
}

/// Curvature of ∇̃^f for each constant f on the grid.
inline FlatScan flat_scan(const GroupModel& g, double lambda, const Grid& grid) {
  if (lambda == 0.0) throw std::invalid_argument("flat_scan: lambda must be nonzero");
  if (grid.count < 1) throw std::invalid_argument("flat_scan: empty grid");
  FlatScan out;
  for (int i = 0; i < grid.count; ++i) {
    const double f = grid.at(i);
    const double norm = constant_field_curvature_norm(g, lambda, f);
    out.rows.push_back({f, norm});
    if (norm < kFlatThreshold) out.zeros.push_back(f);
  }
  return out;
}

/// max over sample points and basis pairs of ‖R̃^f(e_a, e_b)‖.
inline double max_curvature_norm(const GroupModel& g, const ConnectionSpec& spec, int n_points, std::uint64_t seed) {
  const int n = g.lie_dim();
  double worst = 0.0;
  for (const auto& sp : sample_points(g, n_points, seed))
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        worst = std::max(worst, curvature_f(g, spec, Vec::Unit(n, a), Vec::Unit(n, b), sp.point).norm());
  return worst;
}

/// max over basis pairs of the flatness-equation operator for constant f.
inline double flatness_equation_residual(const GroupModel& g, double lambda, double f) {
  const int n = g.lie_dim();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      worst = std::max(worst,
                       flatness_equation_operator(g, lambda, f, 0.0, 0.0, Vec::Unit(n, a), Vec::Unit(n, b)).norm());
  return worst;
}

struct WitnessResult {
  int i = -1;
  int j = -1;
  /// Whether the curvature part ran (needs a nonzero gradient at the point).
  bool curvature_checked = false;
  int curvature_rank = 0;
  bool curvature_independent = false;
  /// max_j ‖R̃(grad f, e_j) − ((f² − 1/λ²)[D_grad, D_j] − ‖grad f‖² D_j)‖
  double adapted_formula_residual = 0.0;
};

/// Finds basis indices i < j with D_i, D_j, [D_i, D_j] linearly independent,
/// then checks in a frame adapted to grad f that the n − 1 operators
/// R̃^f(grad f, e_j), e_j ⊥ grad f, are linearly independent.
inline WitnessResult independence_witness(const GroupModel& g, const ConnectionSpec& spec, const CMat& point,
                                          const Tolerances& tol = {}) {
  if (spec.lambda == 0.0) throw std::invalid_argument("independence_witness: lambda must be nonzero");
  const int n = g.lie_dim();
  WitnessResult out;
  for (int i = 0; i < n && out.i < 0; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Mat di = difference_operator(g, spec.lambda, Vec::Unit(n, i));
      const Mat dj = difference_operator(g, spec.lambda, Vec::Unit(n, j));
      if (rank_of_span(std::vector<Mat>{di, dj, bracket(di, dj)}, tol.rank_rtol).rank == 3) {
        out.i = i;
        out.j = j;
        break;
      }
    }
  }
  if (out.i < 0) {
    throw std::runtime_error("independence_witness: no index pair with D_i, D_j, [D_i, D_j] independent on " +
                             g.name());
  }

  const Vec grad = spec.f.gradient(g, point);
  if (grad.norm() == 0.0) return out;
  out.curvature_checked = true;
  const Mat frame = adapted_frame(grad);
  const double f = spec.f.value(point);
  const double lam = spec.lambda;
  const Mat d_grad = difference_operator(g, lam, grad);
  std::vector<Mat> ops;
  for (int j = 1; j < n; ++j) {
    const Vec ej = frame.col(j);
    const Mat r = curvature_f(g, spec, grad, ej, point);
    const Mat dj = difference_operator(g, lam, ej);
    const Mat expected = (f * f - 1.0 / (lam * lam)) * bracket(d_grad, dj) - grad.squaredNorm() * dj;
    out.adapted_formula_residual = std::max(out.adapted_formula_residual, (r - expected).norm());
    ops.push_back(r);
  }
  out.curvature_rank = rank_of_span(ops, tol.rank_rtol).rank;
  out.curvature_independent = out.curvature_rank == n - 1;
  return out;
}

}  // namespace skewlab
