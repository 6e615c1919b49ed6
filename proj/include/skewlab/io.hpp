#pragma once

// JSON and CSV surfaces.
//
// ThreeForm JSON: {"dim": n, "name": str?, "terms": [{"i":..,"j":..,"k":..,"c":..}, ...]}
// with 0-based indices and i < j < k enforced on load.

#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "skewlab/catalog.hpp"
#include "skewlab/closure.hpp"
#include "skewlab/geometry.hpp"
#include "skewlab/holonomy.hpp"
#include "skewlab/structure.hpp"
#include "skewlab/three_form.hpp"
#include "skewlab/tolerances.hpp"

namespace skewlab {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json to_json(const ThreeForm& f) {
  json j;
  j["dim"] = f.dim();
  if (f.name()) j["name"] = *f.name();
  json terms = json::array();
  for (const auto& [t, c] : f.terms()) terms.push_back({{"i", t[0]}, {"j", t[1]}, {"k", t[2]}, {"c", c}});
  j["terms"] = terms;
  return j;
}

inline ThreeForm three_form_from_json(const json& j) {
  try {
    if (!j.is_object()) throw FormatError("ThreeForm JSON must be an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw FormatError("ThreeForm JSON: missing integer 'dim'");
    const int dim = j["dim"].get<int>();
    if (dim <= 0) throw FormatError("ThreeForm JSON: 'dim' must be positive");
    std::optional<std::string> name;
    if (j.contains("name") && !j["name"].is_null()) name = j["name"].get<std::string>();
    ThreeForm f(dim, name);
    if (!j.contains("terms") || !j["terms"].is_array()) throw FormatError("ThreeForm JSON: missing array 'terms'");
    std::set<Triple> seen;
    for (const auto& t : j["terms"]) {
      const int i = t.at("i").get<int>(), jj = t.at("j").get<int>(), k = t.at("k").get<int>();
      const double c = t.at("c").get<double>();
      const std::string triple = detail::triple_string(i, jj, k);
      if (!(i < jj && jj < k)) throw FormatError("ThreeForm JSON: triple " + triple + " violates i < j < k");
      if (i < 0 || k >= dim) throw FormatError("ThreeForm JSON: triple " + triple + " out of range for dim " + std::to_string(dim));
      if (!seen.insert(Triple{i, jj, k}).second) throw FormatError("ThreeForm JSON: duplicate triple " + triple);
      f.set(i, jj, k, c);
    }
    return f;
  } catch (const json::exception& e) {
    throw FormatError(std::string("ThreeForm JSON: ") + e.what());
  }
}

inline ThreeForm load_three_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
  return three_form_from_json(j);
}

inline json to_json(const Tolerances& t) {
  return {{"rank_rtol", t.rank_rtol}, {"skew_atol", t.skew_atol}, {"ode_step", t.ode_step}};
}

inline json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const LieSubalgebra& h, bool with_basis = false) {
  json j{{"ambient_dim", h.ambient_dim()}, {"dim", h.dim()}, {"bracket_defect", h.bracket_defect()}};
  if (with_basis) {
    json b = json::array();
    for (const auto& m : h.basis()) b.push_back(matrix_to_json(m));
    j["basis"] = b;
  }
  return j;
}

inline json to_json(const StructureReport& r) {
  return {{"ambient_dim", r.ambient_dim},
          {"h_dim", r.h_dim},
          {"irreducible", r.irreducible},
          {"transitive", r.transitive},
          {"symmetric", r.symmetric},
          {"jacobi_defect", r.jacobi_defect},
          {"simple", r.simple},
          {"rank", r.rank},
          {"killing_negdef", r.killing_negdef},
          {"invariant_threeform_dim", r.invariant_threeform_dim},
          {"normalizer_equals_h", r.normalizer_equals_h},
          {"normalizer_dim", r.normalizer_dim},
          {"hypothesis_met", r.hypothesis_met},
          {"passed", r.passed},
          {"failures", r.failures},
          {"indeterminate", r.indeterminate},
          {"rank_one_observed", r.rank_one_observed},
          {"seed", r.seed},
          {"tolerances", to_json(r.tolerances)}};
}

inline json to_json(const HolonomyReport& r) {
  json j{{"group", r.group},
         {"lambda", r.lambda},
         {"field", r.field},
         {"seed", r.seed},
         {"samples", r.samples},
         {"lie_dim", r.lie_dim},
         {"hol_dim", r.hol_dim},
         {"h_p_dim", r.h_p_dim},
         {"flat", r.flat},
         {"hol_bracket_defect", r.hol_bracket_defect},
         {"containment_residual", r.containment_residual},
         {"tolerances", to_json(r.tolerances)}};
  j["h_p_flag"] = r.h_p_flag ? json(*r.h_p_flag) : json(nullptr);
  return j;
}

inline json to_json(const Expectation& e) { return {{"field", e.field}, {"value", e.value}, {"tag", e.tag}}; }

namespace detail {

inline std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace detail

/// Columns: t, residual_lemma, residual_corollary, orthogonality_defect.
inline std::string transport_csv(const TransportResult& r) {
  std::ostringstream os;
  os << "t,residual_lemma,residual_corollary,orthogonality_defect\n";
  for (const auto& row : r.rows) {
    os << detail::csv_number(row.t) << ',' << detail::csv_number(row.residual_lemma) << ','
       << detail::csv_number(row.residual_corollary) << ',' << detail::csv_number(row.orthogonality_defect) << '\n';
  }
  return os.str();
}

inline json to_json(const TransportResult& r) {
  json dir = json::array();
  for (Eigen::Index i = 0; i < r.direction.size(); ++i) dir.push_back(r.direction(i));
  json j{{"group", r.group},
         {"lambda", r.lambda},
         {"field", r.field},
         {"direction", dir},
         {"step", r.step},
         {"geodesic", !r.bend.has_value()},
         {"closed_form_asserted", r.closed_form_asserted},
         {"max_residual_lemma", r.max_residual_lemma},
         {"max_residual_corollary", r.max_residual_corollary},
         {"max_orthogonality_defect", r.max_orthogonality_defect},
         {"rows", r.rows.size()}};
  return j;
}

/// Columns: f, max_curv_norm.
inline std::string flat_scan_csv(const FlatScan& scan) {
  std::ostringstream os;
  os << "f,max_curv_norm\n";
  for (const auto& row : scan.rows) os << detail::csv_number(row.f) << ',' << detail::csv_number(row.max_curvature_norm) << '\n';
  return os.str();
}

}  // namespace skewlab
