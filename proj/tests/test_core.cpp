#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "skewlab/skewlab.hpp"

using namespace skewlab;

namespace {

ThreeForm e123_r4() {
  ThreeForm f(4, std::string("e123"));
  f.set(0, 1, 2, 1.0);
  return f;
}

ThreeForm random_form(int n, Rng& rng) {
  ThreeForm f(n);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) f.set(i, j, k, dist(rng));
  return f;
}

LieSubalgebra full_so(int n) {
  std::vector<Mat> gens;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) gens.push_back(elementary_skew(n, p, q));
  return LieSubalgebra(n, rank_of_span(gens, 1e-9).basis);
}

/// so(k) on the first k coordinates of Rⁿ.
LieSubalgebra corner_so(int k, int n) {
  std::vector<Mat> gens;
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) gens.push_back(elementary_skew(n, p, q));
  return LieSubalgebra(n, rank_of_span(gens, 1e-9).basis);
}

ThreeForm bracket_form(const std::string& name) { return make_group(name).bracket_form(); }

}  // namespace

// ---------------------------------------------------------------- algebra core

TEST(Contract, E123FirstBasisVector) {
  const Mat m = contract(e123_r4(), Vec::Unit(4, 0));
  EXPECT_TRUE(m.col(1).isApprox(Vec::Unit(4, 2)));
  EXPECT_TRUE(m.col(2).isApprox(-Vec::Unit(4, 1)));
  EXPECT_EQ(m.col(3).norm(), 0.0);
  EXPECT_EQ(m.col(0).norm(), 0.0);
}

TEST(Contract, ZeroVectorGivesZero) {
  Rng rng(3);
  const auto f = random_form(6, rng);
  EXPECT_EQ(contract(f, Vec::Zero(6)).norm(), 0.0);
}

TEST(Contract, DimensionMismatchThrows) { EXPECT_THROW(contract(e123_r4(), Vec::Zero(3)), std::invalid_argument); }

TEST(Contract, Su2BracketFormGivesAdjoint) {
  const auto basis = oracle::su2_pauli_basis();
  const Mat ad0 = oracle::ad_from_matrices(basis, Vec::Unit(3, 0));
  EXPECT_LT((contract(bracket_form("su2"), Vec::Unit(3, 0)) - ad0).norm(), 1e-14);
}

TEST(Contract, DefiningIdentity) {
  Rng rng(11);
  const auto f = random_form(7, rng);
  for (int t = 0; t < 20; ++t) {
    const Vec v = random_normal(7, rng), y = random_normal(7, rng), z = random_normal(7, rng);
    EXPECT_NEAR((contract(f, v) * y).dot(z), f.evaluate(v, y, z), 1e-12);
    EXPECT_LT(skew_defect(contract(f, v)), 1e-14);
  }
}

TEST(ThreeFormType, StoresIncreasingTriplesAndSigns) {
  ThreeForm f(5);
  f.set(0, 2, 4, 1.5);
  f.add(3, 1, 0, 2.0);  // stored as (0,1,3) with sign −1
  std::set<Triple> keys;
  for (const auto& [t, c] : f.terms()) {
    EXPECT_LT(t[0], t[1]);
    EXPECT_LT(t[1], t[2]);
    keys.insert(t);
  }
  EXPECT_EQ(keys.size(), 2u);
  EXPECT_DOUBLE_EQ(f(0, 1, 3), -2.0);
  EXPECT_DOUBLE_EQ(f(4, 2, 0), -1.5);
  EXPECT_DOUBLE_EQ(f(2, 4, 0), 1.5);
  EXPECT_DOUBLE_EQ(f(0, 0, 3), 0.0);
}

TEST(ThreeFormType, SetRejectsBadTriples) {
  ThreeForm f(4);
  EXPECT_THROW(f.set(1, 0, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(f.set(0, 1, 4, 1.0), std::invalid_argument);
}

TEST(ThreeFormProperty, AlternatingUnderTranspositions) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 5;
    const auto f = random_form(n, rng);
    const Vec x = random_normal(n, rng), y = random_normal(n, rng), z = random_normal(n, rng);
    const double v = f.evaluate(x, y, z);
    const double atol = Tolerances{}.skew_atol;
    EXPECT_NEAR(f.evaluate(y, x, z), -v, atol);
    EXPECT_NEAR(f.evaluate(x, z, y), -v, atol);
    EXPECT_NEAR(f.evaluate(z, y, x), -v, atol);
    EXPECT_NEAR(f.evaluate(y, z, x), v, atol);
  }
}

TEST(ThreeFormProperty, ContractIsLinear) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_form(6, rng);
    const Vec u = random_normal(6, rng), v = random_normal(6, rng);
    const double a = 1.7, b = -0.3;
    const Mat lhs = contract(f, a * u + b * v);
    const Mat rhs = a * contract(f, u) + b * contract(f, v);
    EXPECT_LT((lhs - rhs).norm(), 1e-13 * (1.0 + rhs.norm()));
  }
}

TEST(ThreeFormProperty, ReconstructionFromContractions) {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_form(6, rng);
    const auto ms = contractions(f);
    for (const auto& [t, c] : f.terms()) {
      const double rebuilt = ms[t[0]].col(t[1]).dot(Vec::Unit(6, t[2]));
      EXPECT_EQ(rebuilt, c);
    }
  }
}

TEST(ThreeFormProperty, TransformIsEquivariant) {
  Rng rng(8);
  const auto f = random_form(5, rng);
  const Mat q = random_orthogonal(5, rng);
  const auto g = f.transformed(q);
  const Vec v = random_normal(5, rng);
  EXPECT_LT((contract(g, q * v) - q * contract(f, v) * q.transpose()).norm(), 1e-12);
}

TEST(BracketForm, Su2IsMultipleOfVolume) {
  const auto c = oracle::structure_constants(oracle::su2_pauli_basis());
  const auto f = three_form_from_bracket(c, 1e-12);
  ASSERT_EQ(f.terms().size(), 1u);
  EXPECT_NEAR(f.coefficient(0, 1, 2), std::sqrt(2.0), 1e-14);
  EXPECT_GT(f.coefficient(0, 1, 2), 0.0);
  EXPECT_LT((contractions(f)[0] - contractions(bracket_form("su2"))[0]).norm(), 1e-14);
}

TEST(BracketForm, AbelianGivesZero) { EXPECT_TRUE(bracket_form("torus3").is_zero()); }

TEST(BracketForm, So3IsMultipleOfVolume) {
  std::vector<CMat> basis;
  for (int p = 0; p < 3; ++p)
    for (int q = p + 1; q < 3; ++q) basis.push_back((elementary_skew(3, p, q) / std::sqrt(2.0)).cast<std::complex<double>>());
  const auto f = three_form_from_bracket(oracle::structure_constants(basis), 1e-12);
  ASSERT_EQ(f.terms().size(), 1u);
  EXPECT_NEAR(std::abs(f.coefficient(0, 1, 2)), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(BracketForm, NonSkewBracketReportsDefect) {
  Tensor3 c(3);
  c(0, 1, 2) = 1.0;
  c(1, 0, 2) = -1.0;  // antisymmetric in the first pair only
  try {
    three_form_from_bracket(c, 1e-12);
    FAIL() << "expected a throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("symmetry defect 1"), std::string::npos) << e.what();
  }
}

TEST(Bracket, Examples) {
  Rng rng(9);
  const Mat a = elementary_skew(3, 0, 1), b = elementary_skew(3, 1, 2);
  EXPECT_EQ(bracket(a, a).norm(), 0.0);
  const Mat c = bracket(a, b);
  EXPECT_TRUE(c.isApprox(elementary_skew(3, 0, 2)) || c.isApprox(-elementary_skew(3, 0, 2)));
  const Mat x = Mat::Random(4, 4), y = Mat::Random(4, 4);
  const Mat xs = x - x.transpose(), ys = y - y.transpose();
  EXPECT_LT((bracket(xs, ys) + bracket(ys, xs)).norm(), 1e-15);
  EXPECT_LT(skew_defect(bracket(xs, ys)), 1e-14);
  EXPECT_THROW(bracket(Mat::Zero(3, 3), Mat::Zero(4, 4)), std::invalid_argument);
}

TEST(Expm, IdentityAtZeroAndQuarterTurn) {
  const Mat j = elementary_skew(2, 0, 1);
  EXPECT_EQ((expm(j, 0.0) - Mat::Identity(2, 2)).norm(), 0.0);
  Mat rot(2, 2);
  rot << 0, -1, 1, 0;
  EXPECT_LT((expm(j, std::numbers::pi / 2) - rot).norm(), 1e-14);
}

TEST(Expm, MatchesRodrigues) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    Mat a = Mat::Zero(3, 3);
    const Vec w = random_normal(3, rng) * (1.0 + t * 0.4);
    a(2, 1) = w(0), a(1, 2) = -w(0), a(0, 2) = w(1), a(2, 0) = -w(1), a(1, 0) = w(2), a(0, 1) = -w(2);
    EXPECT_LT((expm(a) - oracle::rodrigues(a)).norm(), 1e-12) << "norm " << a.norm();
  }
}

TEST(ExpmProperty, GroupLawAndOrthogonality) {
  Rng rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6;
    const Mat x = Mat::Random(n, n);
    Mat a = x - x.transpose();
    a *= 10.0 / a.norm() * std::abs(u(rng));  // ‖a‖ ≤ 10
    const double s = u(rng), t = u(rng);
    EXPECT_LT((expm(a, s) * expm(a, t) - expm(a, s + t)).norm(), 1e-10);
    const Mat q = expm(a, 1.0);
    EXPECT_LE(orthogonality_defect(q), 1e-10);
    EXPECT_NEAR(q.determinant(), 1.0, 1e-10);
  }
}

TEST(RankOfSpan, Examples) {
  const Mat j = elementary_skew(4, 0, 1);
  EXPECT_EQ(rank_of_span(std::vector<Mat>{j, 2.0 * j}, 1e-9).rank, 1);
  EXPECT_EQ(rank_of_span(contractions(e123_r4()), 1e-9).rank, 3);
  EXPECT_EQ(full_so(4).dim(), 6);
  const auto empty = rank_of_span(std::vector<Mat>{}, 1e-9);
  EXPECT_EQ(empty.rank, 0);
  EXPECT_TRUE(empty.basis.empty());
  EXPECT_THROW(rank_of_span(std::vector<Mat>{Mat::Zero(3, 3), Mat::Zero(4, 4)}, 1e-9), std::invalid_argument);
}

TEST(RankOfSpan, BasisIsOrthonormalAndSpansInput) {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_form(6, rng);
    std::vector<Mat> ms = contractions(f);
    ms.push_back(ms[0] + 2.0 * ms[3]);
    // The Gram oracle squares singular values, so it only resolves cutoffs
    // well above sqrt(eps).
    const auto r = rank_of_span(ms, 1e-6);
    EXPECT_EQ(r.rank, oracle::gram_rank(ms, 1e-6));
    EXPECT_EQ(r.rank, rank_of_span(ms, 1e-9).rank);
    for (int a = 0; a < r.rank; ++a)
      for (int b = 0; b < r.rank; ++b)
        EXPECT_NEAR((r.basis[a].transpose() * r.basis[b]).trace(), a == b ? 1.0 : 0.0, 1e-12);
    const LieSubalgebra span(6, r.basis);
    for (const auto& m : ms) EXPECT_LT(span.projection_residual(m), 1e-12 * (1.0 + m.norm()));
  }
}

TEST(Tolerances, RejectNonPositive) {
  EXPECT_NO_THROW(Tolerances{}.validate());
  EXPECT_THROW((Tolerances{0.0, 1e-10, 1e-3}.validate()), std::invalid_argument);
  EXPECT_THROW((Tolerances{1e-9, -1.0, 1e-3}.validate()), std::invalid_argument);
  EXPECT_THROW((Tolerances{1e-9, 1e-10, 0.0}.validate()), std::invalid_argument);
}

TEST(Json, RoundTrip) {
  Rng rng(14);
  const auto f = random_form(5, rng);
  const auto g = three_form_from_json(to_json(f));
  EXPECT_EQ(g.dim(), 5);
  EXPECT_EQ(g.terms(), f.terms());
}

TEST(Json, RejectsNonIncreasingTripleByName) {
  const json j = json::parse(R"({"dim": 4, "terms": [{"i": 0, "j": 1, "k": 2, "c": 1}, {"i": 2, "j": 1, "k": 3, "c": 1}]})");
  try {
    three_form_from_json(j);
    FAIL() << "expected a throw";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("(2,1,3)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(three_form_from_json(json::parse(R"({"dim": 3, "terms": [{"i": 0, "j": 1, "k": 3, "c": 1}]})")),
               FormatError);
  EXPECT_THROW(three_form_from_json(json::parse(R"({"terms": []})")), FormatError);
  EXPECT_THROW(three_form_from_json(json::parse(R"({"dim": 3, "terms": [{"i": 0, "j": 1, "k": 2, "c": 1},
               {"i": 0, "j": 1, "k": 2, "c": 2}]})")),
               FormatError);
}

// -------------------------------------------------------------------- closure

TEST(SpanContractions, Examples) {
  EXPECT_EQ(span_contractions(e123_r4()).span.dim(), 3);
  const auto zero = span_contractions(ThreeForm(5));
  EXPECT_EQ(zero.span.dim(), 0);
  EXPECT_TRUE(zero.zero_form);
  EXPECT_EQ(span_contractions(bracket_form("su3")).span.dim(), 8);
  const auto g = make_group("su3");
  std::vector<Mat> ads;
  for (int a = 0; a < 8; ++a) ads.push_back(oracle::ad_from_matrices(g.basis(), Vec::Unit(8, a)));
  EXPECT_EQ(oracle::gram_rank(ads, 1e-9), 8);
}

TEST(LieClosure, Examples) {
  ThreeForm b(4);
  b.set(1, 2, 3, 1.0);
  std::vector<Mat> gens = contractions(e123_r4());
  for (const auto& m : contractions(b)) gens.push_back(m);
  EXPECT_EQ(lie_closure(gens, 4).dim(), 6);
  EXPECT_EQ(lie_closure(std::vector<Mat>{elementary_skew(5, 1, 3)}, 5).dim(), 1);
  const auto su3 = lie_closure(contractions(bracket_form("su3")), 8);
  EXPECT_EQ(su3.dim(), 8);
  const auto d = derived_algebra(su3);
  EXPECT_EQ(d.dim(), 8);
  EXPECT_LT(su3.containment_residual_of(d), 1e-9);
  EXPECT_EQ(lie_closure(std::vector<Mat>{}, 3).dim(), 0);
  EXPECT_THROW(lie_closure(std::vector<Mat>{Mat::Ones(3, 3)}, 3), std::invalid_argument);
}

TEST(DerivedAlgebra, Examples) {
  EXPECT_EQ(derived_algebra(lie_closure(std::vector<Mat>{elementary_skew(4, 0, 1), elementary_skew(4, 2, 3)}, 4)).dim(),
            0);
  EXPECT_EQ(derived_algebra(full_so(3)).dim(), 3);
  const auto span = span_contractions(bracket_form("su3")).span;
  const auto d = derived_algebra(span);
  EXPECT_EQ(d.dim(), span.dim());
  EXPECT_LT(span.containment_residual_of(d), 1e-9);
}

TEST(SampledHp, SinglePointMatchesClosure) {
  const auto f = bracket_form("su2");
  const auto a = sampled_h_p({f}, {Mat::Identity(3, 3)});
  EXPECT_EQ(a.dim(), lie_closure(contractions(f), 3).dim());
  ThreeForm b(4);
  b.set(1, 2, 3, 1.0);
  EXPECT_EQ(sampled_h_p({e123_r4(), b}, {Mat::Identity(4, 4), Mat::Identity(4, 4)}).dim(), 6);
  EXPECT_EQ(sampled_h_p({e123_r4()}, {Mat::Identity(4, 4)}).dim(), 3);
}

TEST(SampledHp, RejectsNonOrthogonalTransport) {
  EXPECT_THROW(sampled_h_p({e123_r4()}, {2.0 * Mat::Identity(4, 4)}), std::invalid_argument);
  EXPECT_THROW(sampled_h_p({e123_r4()}, {}), std::invalid_argument);
}

TEST(ProductFamily, FlaggedNotSkew) {
  const auto e = catalog_get("product_2n");
  EXPECT_FALSE(e.valid);
  EXPECT_NEAR(e.alternation_defect, 1.0, 1e-12);
  EXPECT_THROW(e.form(), std::logic_error);
  // Each block operator is skew; only the induced trilinear form fails.
  ASSERT_EQ(e.operators.size(), 14u);
  for (const auto& m : e.operators) EXPECT_EQ(skew_defect(m), 0.0);
  // A symmetric generator is rejected by the closure.
  Mat sym = Mat::Zero(14, 14);
  sym(0, 1) = sym(1, 0) = 1.0;
  EXPECT_THROW(lie_closure({e.operators[0], sym}, 14), std::invalid_argument);
}

TEST(ClosureProperty, ContainsGeneratorsIdempotentBounded) {
  Rng rng(16);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 4 + trial % 3;
    ThreeForm f(n);
    f.set(0, 1, 2, 1.0);
    if (trial % 2) f.set(1, 2, 3, 0.5);
    const auto gens = contractions(f);
    const auto h = lie_closure(gens, n);
    for (const auto& g : gens) EXPECT_LT(h.projection_residual(g), 1e-9);
    EXPECT_LE(h.dim(), n * (n - 1) / 2);
    EXPECT_LT(h.bracket_defect(), 1e-9);
    const auto hh = lie_closure(h);
    EXPECT_EQ(hh.dim(), h.dim());
    EXPECT_LT(h.containment_residual_of(hh), 1e-9);
    const auto d = derived_algebra(h);
    EXPECT_LT(h.containment_residual_of(d), 1e-9);
  }
}

TEST(ClosureProperty, Monotone) {
  Rng rng(17);
  const auto f = random_form(5, rng);
  auto gens = contractions(f);
  std::vector<Mat> part;
  int last = 0;
  for (const auto& g : gens) {
    part.push_back(g);
    const auto h = lie_closure(part, 5);
    EXPECT_GE(h.dim(), last);
    last = h.dim();
    const auto smaller = lie_closure(std::vector<Mat>(part.begin(), part.end() - 1), 5);
    EXPECT_LT(h.containment_residual_of(smaller), 1e-9);
  }
}

TEST(ClosureProperty, OrthogonalEquivariance) {
  Rng rng(18);
  ThreeForm f(6);
  f.set(0, 1, 2, 1.0);
  f.set(3, 4, 5, 2.0);
  const auto h = lie_closure(contractions(f), 6);
  const Mat q = random_orthogonal(6, rng);
  std::vector<Mat> rotated;
  for (const auto& m : contractions(f)) rotated.push_back(q * m * q.transpose());
  const auto hq = lie_closure(rotated, 6);
  EXPECT_EQ(hq.dim(), h.dim());
  EXPECT_LT(hq.containment_residual_of(h.conjugated(q)), 1e-9);
  EXPECT_LT(h.conjugated(q).containment_residual_of(hq), 1e-9);
}

TEST(ClosureProperty, Deterministic) {
  const auto a = lie_closure(contractions(bracket_form("so5")), 10);
  const auto b = lie_closure(contractions(bracket_form("so5")), 10);
  ASSERT_EQ(a.dim(), b.dim());
  for (int i = 0; i < a.dim(); ++i) EXPECT_EQ((a.basis()[i] - b.basis()[i]).norm(), 0.0);
}

// ------------------------------------------------------------------ structure

TEST(HolonomySystemType, RejectsValuesOutsideH) {
  EXPECT_THROW(HolonomySystem(e123_r4(), corner_so(2, 4)), std::invalid_argument);
  EXPECT_NO_THROW(HolonomySystem(e123_r4(), full_so(4)));
  EXPECT_THROW(HolonomySystem(e123_r4(), full_so(3)), std::invalid_argument);
}

TEST(Irreducible, Examples) {
  for (int n = 2; n <= 5; ++n) EXPECT_TRUE(is_irreducible(full_so(n))) << n;
  EXPECT_FALSE(is_irreducible(lie_closure(contractions(e123_r4()), 4)));
  EXPECT_TRUE(is_irreducible(lie_closure(contractions(bracket_form("su3")), 8)));
  EXPECT_FALSE(is_irreducible(LieSubalgebra(4)));
  EXPECT_TRUE(is_irreducible(LieSubalgebra(1)));
  EXPECT_FALSE(is_irreducible(lie_closure(contractions(bracket_form("so4")), 6)));
}

TEST(Transitive, Examples) {
  for (int n = 2; n <= 5; ++n) EXPECT_TRUE(is_transitive_sphere(full_so(n), 3, 1)) << n;
  EXPECT_TRUE(is_transitive_sphere(lie_closure(contractions(bracket_form("su2")), 3), 3, 1));
  const auto su3 = lie_closure(contractions(bracket_form("su3")), 8);
  EXPECT_FALSE(is_transitive_sphere(su3, 3, 1));
  Rng rng(2);
  EXPECT_EQ(orbit_tangent_dim(su3, random_unit(8, rng)), 6);
  EXPECT_THROW(is_transitive_sphere(su3, 0, 1), std::invalid_argument);
}

TEST(Symmetric, Examples) {
  EXPECT_TRUE(is_symmetric_system(HolonomySystem::generated_by(bracket_form("su3"))));
  const HolonomySystem e(e123_r4(), full_so(4));
  EXPECT_FALSE(is_symmetric_system(e));
  // Direct evaluation: J_03 sends e_3 to −e_0, so (J·Θ)(e_1, e_2, e_3) = Θ(e_1, e_2, −e_0) = −1.
  Tensor3 dense = e123_r4().dense();
  const auto act = detail::infinitesimal_action(dense, elementary_skew(4, 0, 3));
  double worst = 0.0;
  for (double v : act) worst = std::max(worst, std::abs(v));
  EXPECT_DOUBLE_EQ(worst, 1.0);
  EXPECT_TRUE(is_symmetric_system(HolonomySystem(ThreeForm(4), full_so(4))));
}

TEST(Jacobi, Examples) {
  EXPECT_LT(jacobi_defect(bracket_form("su2")), 1e-12);
  ThreeForm f(5);
  f.set(0, 1, 2, 1.0);
  f.set(0, 3, 4, 1.0);
  EXPECT_GT(jacobi_defect(f), 0.0);
  double worst = 0.0;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      for (int c = b + 1; c < 5; ++c)
        worst = std::max(worst, oracle::jacobi_norm(f, Vec::Unit(5, a), Vec::Unit(5, b), Vec::Unit(5, c)));
  EXPECT_NEAR(jacobi_defect(f), worst, 1e-14);
  EXPECT_GT(worst, 0.5);
  ThreeForm r3(3);
  r3.set(0, 1, 2, -2.7);
  EXPECT_EQ(jacobi_defect(r3), 0.0);
}

TEST(LieRank, Examples) {
  const auto su2 = lie_rank_and_simplicity(bracket_form("su2"), 1);
  EXPECT_EQ(su2.rank, 1);
  EXPECT_TRUE(su2.simple);
  EXPECT_TRUE(su2.killing_negdef);
  const auto su3 = lie_rank_and_simplicity(bracket_form("su3"), 1);
  EXPECT_EQ(su3.rank, 2);
  EXPECT_TRUE(su3.simple);
  EXPECT_TRUE(su3.killing_negdef);
  const auto so4 = lie_rank_and_simplicity(bracket_form("so4"), 1);
  EXPECT_EQ(so4.rank, 2);
  EXPECT_FALSE(so4.simple);
  EXPECT_TRUE(so4.killing_negdef);
  ThreeForm f(5);
  f.set(0, 1, 2, 1.0);
  f.set(0, 3, 4, 1.0);
  EXPECT_THROW(lie_rank_and_simplicity(f, 1), NotALieBracket);
}

TEST(LieRank, RegularElementKernelOracle) {
  // A generic element of su(3) is conjugate to diag(ia, ib, −i(a+b)); its
  // centralizer is the diagonal torus, of dimension 2.
  const auto g = make_group("su3");
  Rng rng(4);
  const Mat ad = oracle::ad_from_matrices(g.basis(), random_normal(8, rng));
  Eigen::JacobiSVD<Mat> svd(ad);
  const Vec s = svd.singularValues();
  EXPECT_LT(s(6), 1e-12 * s(0));
  EXPECT_GT(s(5), 1e-3 * s(0));
}

TEST(InvariantForms, Examples) {
  EXPECT_EQ(invariant_threeform_dim(lie_closure(contractions(bracket_form("su3")), 8)), 1);
  EXPECT_EQ(invariant_threeform_dim(LieSubalgebra(4)), 4);
  EXPECT_EQ(invariant_threeform_dim(full_so(4)), 0);
  EXPECT_EQ(invariant_threeform_dim(full_so(5)), 0);
  EXPECT_EQ(invariant_threeform_dim(full_so(3)), 1);
}

TEST(Normalizer, Examples) {
  const auto su3 = lie_closure(contractions(bracket_form("su3")), 8);
  const auto n = normalizer_in_so(su3);
  EXPECT_EQ(n.dim(), 8);
  EXPECT_LT(n.containment_residual_of(su3), 1e-9);
  EXPECT_EQ(normalizer_in_so(LieSubalgebra(5)).dim(), 10);
  // so(3) on the first three coordinates of R⁴ is self-normalizing: the
  // off-block part v must satisfy Xv = 0 for all X ∈ so(3).
  EXPECT_EQ(normalizer_in_so(corner_so(3, 4)).dim(), 3);
  // so(2) ⊂ so(4) is normalized by so(2) ⊕ so(2).
  const auto n2 = normalizer_in_so(corner_so(2, 4));
  EXPECT_EQ(n2.dim(), 2);
  EXPECT_LT(n2.projection_residual(elementary_skew(4, 2, 3)), 1e-12);
  EXPECT_EQ(normalizer_in_so(full_so(3)).dim(), 3);
}

TEST(Stht, Su3AndSo5Pass) {
  for (const char* name : {"su3", "so5"}) {
    const auto r = verify_stht(HolonomySystem::generated_by(bracket_form(name)), 42);
    EXPECT_TRUE(r.hypothesis_met) << name;
    EXPECT_TRUE(r.passed) << name;
    EXPECT_TRUE(r.symmetric);
    EXPECT_FALSE(r.transitive);
    EXPECT_LT(r.jacobi_defect, 1e-10);
    EXPECT_TRUE(r.simple);
    EXPECT_GE(r.rank, 2);
    EXPECT_EQ(r.invariant_threeform_dim, 1);
    EXPECT_TRUE(r.normalizer_equals_h);
    EXPECT_TRUE(r.indeterminate.empty());
    EXPECT_FALSE(r.rank_one_observed);
  }
}

TEST(Stht, VacuousCases) {
  const auto cross = verify_stht(HolonomySystem::generated_by(cross_product_form_r7()), 42);
  EXPECT_EQ(cross.h_dim, 21);
  EXPECT_FALSE(cross.hypothesis_met);
  EXPECT_TRUE(cross.passed);
  EXPECT_TRUE(cross.transitive);
  Rng rng(19);
  const auto generic = verify_stht(HolonomySystem::generated_by(random_form(6, rng)), 42);
  EXPECT_EQ(generic.h_dim, 15);
  EXPECT_FALSE(generic.hypothesis_met);
  EXPECT_TRUE(generic.passed);
  const auto e = verify_stht(HolonomySystem::generated_by(e123_r4()), 42);
  EXPECT_FALSE(e.irreducible);
  EXPECT_FALSE(e.hypothesis_met);
  EXPECT_TRUE(e.passed);
  EXPECT_EQ(e.h_dim, 3);
  EXPECT_TRUE(e.indeterminate.empty());
  EXPECT_THROW(verify_stht(HolonomySystem(ThreeForm(4), full_so(4)), 1), std::invalid_argument);
}

TEST(StructureProperty, OrthogonalEquivariance) {
  Rng rng(20);
  const auto f = bracket_form("su3");
  const auto base = verify_stht(HolonomySystem::generated_by(f), 7);
  for (int trial = 0; trial < 2; ++trial) {
    const Mat q = random_orthogonal(8, rng);
    const auto r = verify_stht(HolonomySystem::generated_by(f.transformed(q, 1e-14)), 7);
    EXPECT_EQ(r.irreducible, base.irreducible);
    EXPECT_EQ(r.transitive, base.transitive);
    EXPECT_EQ(r.symmetric, base.symmetric);
    EXPECT_EQ(r.simple, base.simple);
    EXPECT_EQ(r.rank, base.rank);
    EXPECT_EQ(r.invariant_threeform_dim, base.invariant_threeform_dim);
    EXPECT_EQ(r.normalizer_equals_h, base.normalizer_equals_h);
    EXPECT_TRUE(r.passed);
  }
}

TEST(StructureProperty, ScalingInvariance) {
  const auto f = bracket_form("su3");
  const auto h = lie_closure(contractions(f), 8);
  const auto base = lie_rank_and_simplicity(f, 3);
  for (double c : {-2.5, 0.1, 7.0}) {
    const auto g = f.scaled(c);
    const HolonomySystem s(g, h);
    EXPECT_TRUE(is_symmetric_system(s));
    EXPECT_TRUE(is_irreducible(lie_closure(contractions(g), 8)));
    EXPECT_FALSE(is_transitive_sphere(lie_closure(contractions(g), 8), 2, 3));
    const auto info = lie_rank_and_simplicity(g, 3);
    EXPECT_EQ(info.rank, base.rank);
    EXPECT_EQ(info.simple, base.simple);
  }
  ThreeForm k(5);
  k.set(0, 1, 2, 1.0);
  k.set(0, 3, 4, 0.7);
  for (double c : {-3.0, 0.5, 4.0})
    EXPECT_NEAR(jacobi_defect(k.scaled(c)), c * c * jacobi_defect(k), 1e-12 * c * c);
}

TEST(StructureProperty, KillingProportionalToInner) {
  for (const char* name : {"su2", "su3", "so5"}) {
    const Mat b = killing_form(bracket_form(name));
    const int n = static_cast<int>(b.rows());
    const double k = -b.trace() / n;
    EXPECT_GT(k, 0.0) << name;
    EXPECT_LT((b + k * Mat::Identity(n, n)).norm() / k, 1e-8) << name;
  }
}

TEST(StructureProperty, SameSeedSameReport) {
  const auto s = HolonomySystem::generated_by(bracket_form("so5"));
  EXPECT_EQ(to_json(verify_stht(s, 5)).dump(), to_json(verify_stht(s, 5)).dump());
}

// -------------------------------------------------------------------- catalog

namespace {

std::string computed(const CatalogEntry& e, const std::string& field) {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  if (field == "valid") return b(e.valid);
  if (field == "operator_closure_dim") {
    Rng rng(15);
    const int half = static_cast<int>(e.operators.size()) / 2;
    Mat q = Mat::Zero(2 * half, 2 * half);
    q.topLeftCorner(half, half) = random_orthogonal(half, rng);
    q.bottomRightCorner(half, half) = random_orthogonal(half, rng);
    return std::to_string(
        sampled_operator_closure({e.operators, e.operators}, {Mat::Identity(2 * half, 2 * half), q}, 2 * half).dim());
  }
  if (e.kind == EntryKind::MultiPoint) {
    const int n = e.forms.front().dim();
    std::vector<Mat> ids(e.forms.size(), Mat::Identity(n, n));
    if (field == "closure_dim") return std::to_string(sampled_h_p(e.forms, ids).dim());
    if (field == "single_point_closure_dim") return std::to_string(lie_closure(contractions(e.forms.front()), n).dim());
  }
  const auto& f = e.form();
  if (field == "closure_dim") return std::to_string(lie_closure(contractions(f), f.dim()).dim());
  if (field == "span_dim") return std::to_string(span_contractions(f).span.dim());
  if (field == "irreducible") return b(is_irreducible(lie_closure(contractions(f), f.dim())));
  if (field == "lie_dim") return std::to_string(e.group->lie_dim());
  if (field == "rank") return std::to_string(lie_rank_and_simplicity(f, 1).rank);
  if (field == "simple") return b(lie_rank_and_simplicity(f, 1).simple);
  if (field == "invariant_threeform_dim")
    return std::to_string(invariant_threeform_dim(lie_closure(contractions(f), f.dim())));
  if (field == "normalizer_equals_h") {
    const auto h = lie_closure(contractions(f), f.dim());
    return b(normalizer_in_so(h).dim() == h.dim());
  }
  return "<unknown field " + field + ">";
}

}  // namespace

TEST(Catalog, EveryEntryReproducesItsExpectations) {
  for (const auto& key : catalog_keys()) {
    const auto e = catalog_get(key);
    EXPECT_EQ(e.key, key);
    for (const auto& x : e.expectations) {
      EXPECT_TRUE(x.tag == "PAPER" || x.tag == "TRIVIAL" || x.tag == "DERIVED") << key;
      EXPECT_EQ(computed(e, x.field), x.value) << key << "." << x.field;
    }
    if (e.valid) {
      for (const auto& f : e.forms) {
        EXPECT_LT(alternation_defect(f.dense()), 1e-12) << key;
        EXPECT_EQ(three_form_from_json(to_json(f)).terms(), f.terms()) << key;
      }
    }
  }
  EXPECT_THROW(catalog_get("nope"), std::invalid_argument);
}

TEST(Catalog, CrossProductFormIsRecorded) {
  const auto e = catalog_get("cross_r7");
  const auto h = lie_closure(contractions(e.form()), 7);
  std::cout << "cross_r7 closure dim " << h.dim() << "\n";
  EXPECT_GE(h.dim(), 7);
  EXPECT_LE(h.dim(), 21);
  // Octonion multiplication table: e_1 e_2 = e_3 on the first line, i.e. Θ_{e0} e1 = e2.
  EXPECT_TRUE(contract_basis(e.form(), 0).col(1).isApprox(Vec::Unit(7, 2)));
  // Its stabilizer in so(7) has dimension 14.
  const Tensor3 dense = e.form().dense();
  std::vector<Mat> js;
  for (int p = 0; p < 7; ++p)
    for (int q = p + 1; q < 7; ++q) js.push_back(elementary_skew(7, p, q));
  Mat system(35, static_cast<Eigen::Index>(js.size()));
  for (std::size_t c = 0; c < js.size(); ++c) {
    const auto act = detail::infinitesimal_action(dense, js[c]);
    for (int r = 0; r < 35; ++r) system(r, static_cast<Eigen::Index>(c)) = act[r];
  }
  EXPECT_EQ(nullspace(system, 1e-9).dim, 14);
}
