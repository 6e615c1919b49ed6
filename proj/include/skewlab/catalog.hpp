#pragma once

// Built-in 3-forms and groups.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewlab/group.hpp"
#include "skewlab/linalg.hpp"
#include "skewlab/three_form.hpp"

namespace skewlab {

/// Expected value attached to an entry, with the provenance of the number.
struct Expectation {
  std::string field;
  std::string value;
  std::string tag;  // "PAPER", "TRIVIAL" or "DERIVED"
};

enum class EntryKind { Form, MultiPoint, Group, OperatorFamily };

struct CatalogEntry {
  std::string key;
  std::string description;
  EntryKind kind = EntryKind::Form;
  /// One form per sample point (MultiPoint), otherwise a single form.
  std::vector<ThreeForm> forms;
  std::optional<GroupModel> group;
  /// OperatorFamily only: the contraction operators on the basis vectors.
  std::vector<Mat> operators;
  /// Whether the trilinear map behind the entry is totally skew.
  bool valid = true;
  double alternation_defect = 0.0;
  std::string validity_note;
  std::vector<Expectation> expectations;

  const ThreeForm& form() const {
    if (forms.empty()) throw std::logic_error("catalog entry '" + key + "' has no 3-form: " + validity_note);
    return forms.front();
  }
};

/// Imaginary-octonion cross product on R⁷: e_i e_j = e_k on the oriented
/// lines (1,2,3), (1,4,5), (1,7,6), (2,4,6), (2,5,7), (3,4,7), (3,6,5)
/// (one-based).
inline ThreeForm cross_product_form_r7() {
  ThreeForm phi(7, std::string("cross_r7"));
  const int lines[7][3] = {{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5}};
  for (const auto& l : lines) phi.add(l[0] - 1, l[1] - 1, l[2] - 1, 1.0);
  return phi;
}

/// Operators on R^{2n} built from a form D on Rⁿ by
///   D̃_(v,w) = [[D_v, D_w], [D_w, D_w]],
/// listed for the basis (e_0,0), …, (e_{n−1},0), (0,e_0), …, (0,e_{n−1}).
inline std::vector<Mat> product_operator_family(const ThreeForm& base) {
  const int n = base.dim();
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i) {
    Mat m = Mat::Zero(2 * n, 2 * n);
    m.topLeftCorner(n, n) = contract_basis(base, i);
    out.push_back(m);
  }
  for (int i = 0; i < n; ++i) {
    const Mat d = contract_basis(base, i);
    Mat m = Mat::Zero(2 * n, 2 * n);
    m.topRightCorner(n, n) = d;
    m.bottomLeftCorner(n, n) = d;
    m.bottomRightCorner(n, n) = d;
    out.push_back(m);
  }
  return out;
}

/// t(a, b, c) = ⟨Op_a e_b, e_c⟩ for an operator family indexed by basis vectors.
inline Tensor3 trilinear_from_operators(const std::vector<Mat>& ops) {
  const int n = static_cast<int>(ops.size());
  Tensor3 t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) t(a, b, c) = ops[static_cast<std::size_t>(a)](c, b);
  return t;
}

inline const std::vector<std::string>& catalog_keys() {
  static const std::vector<std::string> keys{"e123_r4", "e123_e234_r4_twopoint", "su2", "su3", "so4", "so5",
                                             "cross_r7", "product_2n"};
  return keys;
}

namespace detail {

inline CatalogEntry group_entry(const std::string& key, const std::string& description,
                                std::vector<Expectation> expectations) {
  CatalogEntry e;
  e.key = key;
  e.description = description;
  e.kind = EntryKind::Group;
  e.group = make_group(key);
  e.forms.push_back(e.group->bracket_form());
  e.expectations = std::move(expectations);
  return e;
}

}  // namespace detail

inline CatalogEntry catalog_get(const std::string& key) {
  if (key == "e123_r4") {
    CatalogEntry e;
    e.key = key;
    e.description = "e_0 ^ e_1 ^ e_2 on R^4";
    ThreeForm f(4, key);
    f.set(0, 1, 2, 1.0);
    e.forms.push_back(f);
    e.expectations = {{"closure_dim", "3", "PAPER"}, {"irreducible", "false", "PAPER"}};
    return e;
  }
  if (key == "e123_e234_r4_twopoint") {
    CatalogEntry e;
    e.key = key;
    e.description = "e_0^e_1^e_2 and e_1^e_2^e_3 on R^4 at two points with disjoint support, identity transports";
    e.kind = EntryKind::MultiPoint;
    ThreeForm a(4, std::string("e123_r4")), b(4, std::string("e234_r4"));
    a.set(0, 1, 2, 1.0);
    b.set(1, 2, 3, 1.0);
    e.forms = {a, b};
    e.expectations = {{"closure_dim", "6", "PAPER"}, {"single_point_closure_dim", "3", "PAPER"}};
    return e;
  }
  if (key == "su2") {
    return detail::group_entry(key, "su(2) with <X,Y> = -Re tr(XY)",
                               {{"lie_dim", "3", "TRIVIAL"}, {"rank", "1", "TRIVIAL"}, {"simple", "true", "TRIVIAL"}});
  }
  if (key == "su3") {
    return detail::group_entry(key, "su(3) with <X,Y> = -Re tr(XY)",
                               {{"lie_dim", "8", "TRIVIAL"},
                                {"rank", "2", "DERIVED"},
                                {"simple", "true", "DERIVED"},
                                {"invariant_threeform_dim", "1", "PAPER"},
                                {"normalizer_equals_h", "true", "PAPER"}});
  }
  if (key == "so4") {
    return detail::group_entry(key, "so(4) = su(2) + su(2) with <X,Y> = -tr(XY)",
                               {{"lie_dim", "6", "TRIVIAL"}, {"simple", "false", "DERIVED"}, {"rank", "2", "DERIVED"}});
  }
  if (key == "so5") {
    return detail::group_entry(key, "so(5) with <X,Y> = -tr(XY)",
                               {{"lie_dim", "10", "TRIVIAL"},
                                {"rank", "2", "DERIVED"},
                                {"simple", "true", "DERIVED"},
                                {"invariant_threeform_dim", "1", "PAPER"}});
  }
  if (key == "cross_r7") {
    CatalogEntry e;
    e.key = key;
    e.description = "octonionic cross-product 3-form on R^7";
    e.forms.push_back(cross_product_form_r7());
    // The closure dimension is computed by the engine and reported, not
    // asserted from a literature value.
    e.expectations = {{"span_dim", "7", "TRIVIAL"}};
    return e;
  }
  if (key == "product_2n") {
    CatalogEntry e;
    e.key = key;
    e.description = "block construction [[D_v, D_w], [D_w, D_w]] on R^14 from the R^7 cross product";
    e.kind = EntryKind::OperatorFamily;
    e.operators = product_operator_family(cross_product_form_r7());
    e.alternation_defect = alternation_defect(trilinear_from_operators(e.operators));
    e.valid = e.alternation_defect <= 1e-12;
    e.validity_note = e.valid ? "totally skew"
                              : "block tensor is not totally skew as written (alternation defect " +
                                    std::to_string(e.alternation_defect) + "); no 3-form is derived from it";
    // The operators themselves are skew; their closure is still defined.
    e.expectations = {{"valid", e.valid ? "true" : "false", "DERIVED"}, {"operator_closure_dim", "91", "PAPER"}};
    return e;
  }
  throw std::invalid_argument("catalog: unknown key '" + key + "'");
}

}  // namespace skewlab
