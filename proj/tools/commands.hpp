#pragma once

// skewlab command-line front end. Kept in a header so the test binaries can
// drive it in-process.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skewlab/skewlab.hpp"

namespace skewlab::cli {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Exit codes.
enum Exit : int { kPass = 0, kInputError = 1, kCheckFailed = 2 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string form;  // analyze: "catalog:<key>" or a JSON path
  std::string group = "su2";
  double lambda = 1.0;
  std::string field = "const:1";
  std::optional<std::uint64_t> seed;
  Tolerances tol;
  std::string out;
  std::string format;  // empty: command default
  double tmax = 1.0;
  std::string direction;
  std::string bend;
  int samples = 8;
  std::string grid = "-2:2:401";
  double loop_s = 1e-2;
};

/// --seed, then SKEWLAB_SEED, then 42.
inline std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("SKEWLAB_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::logic_error&) {
    }
    throw UsageError(std::string("SKEWLAB_SEED='") + env + "' is not an unsigned integer");
  }
  return kDefaultSeed;
}

/// "random:<seed>" or comma-separated coefficients in the orthonormal basis.
inline Vec parse_direction(const std::string& spec, int n, std::uint64_t fallback_seed) {
  if (spec.empty()) {
    Rng rng(fallback_seed);
    return random_unit(n, rng);
  }
  if (spec.rfind("random:", 0) == 0) {
    try {
      Rng rng(std::stoull(spec.substr(7)));
      return random_unit(n, rng);
    } catch (const std::logic_error&) {
      throw UsageError("direction '" + spec + "' is not random:<seed>");
    }
  }
  std::vector<double> coeffs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      coeffs.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("direction coefficient '" + item + "' is not a number");
    }
  }
  if (static_cast<int>(coeffs.size()) != n) {
    throw UsageError("direction has " + std::to_string(coeffs.size()) + " coefficients, the algebra has dimension " +
                     std::to_string(n));
  }
  return Eigen::Map<const Vec>(coeffs.data(), n);
}

inline std::string format_of(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "json" && f != "csv") throw UsageError("format must be json or csv");
  return f;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Outcome {
  int code = kPass;
  std::string text;
};

inline Outcome cmd_analyze(const RunConfig& cfg) {
  if (cfg.form.empty()) throw UsageError("analyze needs --form catalog:<key> or a JSON path");
  if (format_of(cfg, "json") != "json") throw UsageError("analyze writes json only");
  const auto seed = resolve_seed(cfg);
  json j;
  j["command"] = "analyze";
  j["input"] = cfg.form;
  j["seed"] = seed;
  j["tolerances"] = to_json(cfg.tol);

  std::vector<ThreeForm> forms;
  std::vector<Expectation> expectations;
  if (cfg.form.rfind("catalog:", 0) == 0) {
    const auto entry = catalog_get(cfg.form.substr(8));
    if (!entry.valid) throw UsageError("catalog entry '" + entry.key + "': " + entry.validity_note);
    forms = entry.group ? std::vector<ThreeForm>{entry.group->bracket_form(cfg.tol.skew_atol)} : entry.forms;
    expectations = entry.expectations;
  } else {
    forms.push_back(load_three_form(cfg.form));
  }

  int code = kPass;
  if (forms.size() > 1) {
    // Several points with identity transports.
    const int n = forms.front().dim();
    std::vector<Mat> transports(forms.size(), Mat::Identity(n, n));
    const auto h = sampled_h_p(forms, transports, cfg.tol);
    j["samples"] = forms.size();
    j["closure"] = to_json(h);
    j["single_point_closure_dim"] = lie_closure(contractions(forms.front()), n, cfg.tol).dim();
    j["irreducible"] = is_irreducible(h, cfg.tol);
  } else {
    const auto& theta = forms.front();
    if (theta.is_zero()) throw UsageError("the 3-form is zero");
    const auto span = span_contractions(theta, cfg.tol);
    const auto system = HolonomySystem::generated_by(theta, cfg.tol);
    j["span_dim"] = span.span.dim();
    j["closure"] = to_json(system.h());
    const auto report = verify_stht(system, seed, cfg.tol);
    j["report"] = to_json(report);
    if (!report.passed) code = kCheckFailed;
  }
  json e = json::array();
  for (const auto& x : expectations) e.push_back(to_json(x));
  j["expectations"] = e;
  return {code, dump(j)};
}

inline ConnectionSpec connection_of(const RunConfig& cfg, const GroupModel& g, std::uint64_t seed) {
  return {cfg.lambda, ScalarField::parse(cfg.field, g, seed)};
}

/// Tolerances on transport residuals used for the exit code.
inline constexpr double kTransportResidualTol = 1e-7;
inline constexpr double kTransportOrthogonalityExitTol = 1e-8;

inline Outcome cmd_transport(const RunConfig& cfg) {
  const auto seed = resolve_seed(cfg);
  const auto g = make_group(cfg.group);
  if (cfg.lambda == 0.0) throw UsageError("transport: lambda must be nonzero (D vanishes at lambda = 0)");
  if (!(cfg.tmax > 0.0)) throw UsageError("transport: --tmax must be positive");
  const auto spec = connection_of(cfg, g, seed);
  const Vec x = parse_direction(cfg.direction, g.lie_dim(), seed);
  const auto curve = cfg.bend.empty() ? Curve::geodesic(x) : Curve::product(x, parse_direction(cfg.bend, g.lie_dim(), seed));
  const auto res = transport_ode(g, spec, curve, cfg.tmax, cfg.tol);

  int code = kPass;
  if (res.max_orthogonality_defect > kTransportOrthogonalityExitTol) code = kCheckFailed;
  if (res.closed_form_asserted &&
      (res.max_residual_lemma > kTransportResidualTol || res.max_residual_corollary > kTransportResidualTol)) {
    code = kCheckFailed;
  }
  if (format_of(cfg, "csv") == "csv") return {code, transport_csv(res)};
  json j = to_json(res);
  j["command"] = "transport";
  j["seed"] = seed;
  j["tolerances"] = to_json(cfg.tol);
  return {code, dump(j)};
}

inline Outcome cmd_curvature(const RunConfig& cfg) {
  const auto seed = resolve_seed(cfg);
  const auto g = make_group(cfg.group);
  if (format_of(cfg, "json") != "json") throw UsageError("curvature writes json only");
  if (g.lie_dim() < 2) throw UsageError("curvature: the algebra needs dimension >= 2");
  if (!(cfg.loop_s > 0.0)) throw UsageError("curvature: --loop-s must be positive");
  const auto spec = connection_of(cfg, g, seed);
  const int n = g.lie_dim();
  json j;
  j["command"] = "curvature";
  j["group"] = g.name();
  j["lambda"] = cfg.lambda;
  j["field"] = spec.f.describe();
  j["samples"] = cfg.samples;
  j["max_curvature_norm"] = max_curvature_norm(g, spec, cfg.samples, seed);
  if (spec.f.is_constant() && cfg.lambda != 0.0) {
    j["flatness_equation_residual"] = flatness_equation_residual(g, cfg.lambda, spec.f.value(g.identity()));
  }

  const Vec x = Vec::Unit(n, 0), y = Vec::Unit(n, 1);
  const Mat exact = curvature_f(g, spec, x, y, g.identity());
  const Mat loop = loop_curvature_estimate(g, spec, x, y, cfg.loop_s, g.identity());
  j["loop"] = {{"s", cfg.loop_s},
               {"exact_norm", exact.norm()},
               {"abs_error", (loop - exact).norm()},
               {"rel_error", exact.norm() > 0.0 ? json((loop - exact).norm() / exact.norm()) : json(nullptr)}};

  if (cfg.lambda != 0.0) {
    try {
      const auto pts = sample_points(g, std::max(2, cfg.samples), seed);
      const auto w = independence_witness(g, spec, pts.back().point, cfg.tol);
      j["witness"] = {{"i", w.i},
                      {"j", w.j},
                      {"curvature_checked", w.curvature_checked},
                      {"curvature_rank", w.curvature_rank},
                      {"curvature_independent", w.curvature_independent},
                      {"adapted_formula_residual", w.adapted_formula_residual}};
    } catch (const std::runtime_error& e) {
      j["witness"] = {{"error", e.what()}};
    }
  }
  j["seed"] = seed;
  j["tolerances"] = to_json(cfg.tol);
  return {kPass, dump(j)};
}

inline Outcome cmd_flat_scan(const RunConfig& cfg) {
  const auto g = make_group(cfg.group);
  if (cfg.lambda == 0.0) throw UsageError("flat-scan: lambda must be nonzero (D vanishes at lambda = 0)");
  const auto grid = Grid::parse(cfg.grid);
  const auto scan = flat_scan(g, cfg.lambda, grid);
  if (format_of(cfg, "csv") == "csv") return {kPass, flat_scan_csv(scan)};
  json rows = json::array();
  for (const auto& r : scan.rows) rows.push_back({{"f", r.f}, {"max_curv_norm", r.max_curvature_norm}});
  json j{{"command", "flat-scan"},
         {"group", g.name()},
         {"lambda", cfg.lambda},
         {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"count", grid.count}}},
         {"threshold", kFlatThreshold},
         {"zeros", scan.zeros},
         {"rows", rows}};
  return {kPass, dump(j)};
}

inline Outcome cmd_holonomy(const RunConfig& cfg) {
  const auto seed = resolve_seed(cfg);
  const auto g = make_group(cfg.group);
  if (format_of(cfg, "json") != "json") throw UsageError("holonomy writes json only");
  if (cfg.samples < 1) throw UsageError("holonomy: --samples must be >= 1");
  const auto spec = connection_of(cfg, g, seed);
  json j = to_json(holonomy_report(g, spec, cfg.samples, seed, cfg.tol));
  j["command"] = "holonomy";
  return {kPass, dump(j)};
}

namespace detail {

inline void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "RNG seed (default: SKEWLAB_SEED or 42)");
  sub->add_option("--tol-rank", cfg.tol.rank_rtol, "relative rank cutoff");
  sub->add_option("--tol-skew", cfg.tol.skew_atol, "absolute skewness tolerance");
  sub->add_option("--ode-step", cfg.tol.ode_step, "RK4 step");
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  sub->add_option("--format", cfg.format, "json or csv");
}

inline void add_geometry(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--group", cfg.group, "su<k>, so<k> or torus<k>");
  sub->add_option("--lambda", cfg.lambda, "connection parameter");
  sub->add_option("--f", cfg.field, "const:<c> or trace:<alpha>,<beta>");
}

}  // namespace detail

/// Runs one command line (without the program name). Reports go to `out`
/// or the --out file; diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"skewlab: skew-torsion holonomy toolkit", "skewlab"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "closure, classification and structure checks for a 3-form");
  analyze->add_option("--form", cfg.form, "catalog:<key> or path to a 3-form JSON file")->required();
  detail::add_common(analyze, cfg);

  auto* transport = app.add_subcommand("transport", "transport ODE against the closed forms");
  detail::add_geometry(transport, cfg);
  transport->add_option("--tmax", cfg.tmax, "end of the t grid");
  transport->add_option("--direction", cfg.direction, "coefficients a,b,... or random:<seed>");
  transport->add_option("--bend", cfg.bend, "second direction; the curve becomes exp(tX)exp(tY)");
  detail::add_common(transport, cfg);

  auto* curvature = app.add_subcommand("curvature", "curvature norms, loop estimate and independence witness");
  detail::add_geometry(curvature, cfg);
  curvature->add_option("--samples", cfg.samples, "sample points");
  curvature->add_option("--loop-s", cfg.loop_s, "loop side length");
  detail::add_common(curvature, cfg);

  auto* flat = app.add_subcommand("flat-scan", "curvature of constant-f connections over a grid");
  detail::add_geometry(flat, cfg);
  flat->add_option("--grid", cfg.grid, "lo:hi:count");
  detail::add_common(flat, cfg);

  auto* holonomy = app.add_subcommand("holonomy", "holonomy algebra and torsion-generated algebra");
  detail::add_geometry(holonomy, cfg);
  holonomy->add_option("--samples", cfg.samples, "sample points");
  detail::add_common(holonomy, cfg);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    cfg.tol.validate();
    Outcome result;
    if (analyze->parsed()) result = cmd_analyze(cfg);
    else if (transport->parsed()) result = cmd_transport(cfg);
    else if (curvature->parsed()) result = cmd_curvature(cfg);
    else if (flat->parsed()) result = cmd_flat_scan(cfg);
    else result = cmd_holonomy(cfg);

    if (cfg.out.empty()) {
      out << result.text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw UsageError("cannot write '" + cfg.out + "'");
      f << result.text;
    }
    if (result.code == kCheckFailed) err << "check failed\n";
    return result.code;
  } catch (const Indeterminate& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace skewlab::cli
