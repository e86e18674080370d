#pragma once

// Orchestration behind the command-line tool: configuration parsing, family
// construction, the analysis commands and their JSON reports.
//
// Reports are deterministic functions of the effective configuration: keys
// keep insertion order, random choices derive from the configured seed and
// wall-clock timings appear only when requested.

#include "weylbound/chern.hpp"
#include "weylbound/formulas.hpp"
#include "weylbound/localdim.hpp"
#include "weylbound/matfam.hpp"
#include "weylbound/minors.hpp"
#include "weylbound/spectral.hpp"
#include "weylbound/swchart.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef WEYLBOUND_VERSION
#define WEYLBOUND_VERSION "0.0.0"
#endif

namespace weylbound {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "weylbound";
inline constexpr const char* kToolVersion = WEYLBOUND_VERSION;
inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg
                                    : msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

// ---------------------------------------------------------------------------
// Configuration.

struct Tolerances {
  double residual_gate = 1e-10;    // max |minor| accepted at a crossing point
  double merge_radius = 1e-6;      // relative to the search box
  double gap_tol = 1e-8;           // eigenvalue gap that counts as a crossing
  double chern_gap_tol = 1e-9;     // smallest gap allowed on a Chern sphere
  double integrality = 0.05;       // max distance of a lattice Chern sum from an integer
  double cluster_tol = 1e-8;       // eigenvalues within this of lambda0 form the cluster
  double sw_tol = 1e-10;           // chart reconstruction residual
  double sw_cluster_tol = 1e-8;    // chart cluster detection
  double fd_step = 1e-3;           // finite-difference step for higher Taylor orders
  double rational_tol = 1e-6;      // snapping effective coefficients to rationals
  long rational_max_den = 1000;
};

struct FamilySpec {
  std::string preset;                             // empty: inline entries
  int twice_s = 2;                                // preset "spin"
  std::vector<std::string> alpha;                 // preset "band"; empty: random
  std::vector<std::string> slopes = {"1", "2"};   // preset "diagonal"
  std::string cls = "hermitian";                  // inline entries
  int arity = 3;
  std::vector<std::vector<std::string>> entries;
  std::string name;
};

struct PerturbationSpec {
  std::string preset = "none";  // none | constant | quadratic | random | entries
  std::vector<std::vector<std::string>> entries;
};

struct DispersionSpec {
  std::string mode = "line";  // line | plane
  std::vector<double> from, to;            // line end points
  std::vector<double> center, u, v;        // plane
  double extent = 0.0;
  int samples = 201;
};

struct AnalysisConfig {
  FamilySpec family;
  std::string lambda0 = "0";  // exact value, or "auto"
  PerturbationSpec perturbation;
  std::vector<double> t;      // empty: 0.1 where a perturbation is used
  std::uint64_t seed = 1;
  std::optional<int> cap;
  int grid = 24;
  double box = 1.0;
  std::optional<double> radius;
  std::array<double, 3> center{};
  std::size_t seeds = 0;
  bool complex = true;
  int sw_order = 2;
  Tolerances tol;
  std::vector<std::string> analyses = {"cwp", "chern", "weyl"};
  std::optional<DispersionSpec> dispersion;
  std::string out, csv;
  bool timings = false;
};

namespace detail {

/// 1-based line and column of a byte offset.
inline std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Rational from "3", "-2/3" or a finite decimal "0.25".
inline Rational parse_rational(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ') t += c;
  if (t.empty()) throw std::invalid_argument("empty rational");
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    std::size_t places = t.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("bad decimal '" + s + "'");
    Rational q;
    if (q.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) throw std::invalid_argument("bad decimal '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
    q /= Rational(den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0 || (t.find('/') != std::string::npos && q.get_den() == 0))
    throw std::invalid_argument("bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string json_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

inline void reject_unknown(const nlohmann::json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("'" + (where.empty() ? std::string("config") : where) + "' must be an object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown key '" + json_path(where, it.key()) + "'");
}

template <class T>
T get_as(const nlohmann::json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("key '" + path + "': " + e.what());
  }
}

/// Number or string, kept as the exact rational text.
inline std::string rational_text(const nlohmann::json& j, const std::string& path) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    try {
      parse_rational(s);
    } catch (const std::exception& e) {
      throw ConfigError("key '" + path + "': " + e.what());
    }
    return s;
  }
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) return rationalize(j.get<double>(), 1000000).get_str();
  throw ConfigError("key '" + path + "' must be a number or a rational string");
}

inline std::vector<std::vector<std::string>> entry_rows(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError("key '" + path + "' must be an array of rows");
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ConfigError("key '" + path + "' must be an array of rows");
    std::vector<std::string> row;
    for (const auto& e : r) {
      if (e.is_string()) row.push_back(e.get<std::string>());
      else if (e.is_number_integer()) row.push_back(std::to_string(e.get<long long>()));
      else throw ConfigError("key '" + path + "': entries are polynomial strings");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<double> doubles(const nlohmann::json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>()};
  return get_as<std::vector<double>>(j, path);
}

}  // namespace detail

/// 2s from "1", "3/2", "1.5" or 1.5.
inline int parse_twice_spin(const std::string& s) {
  Rational q = detail::parse_rational(s) * 2;
  if (q.get_den() != 1 || q <= 0) throw std::invalid_argument("spin must be a positive half-integer, got '" + s + "'");
  return static_cast<int>(q.get_num().get_si());
}

inline AnalysisConfig config_from_json(const nlohmann::json& j) {
  using namespace detail;
  AnalysisConfig c;
  reject_unknown(j, "", {"family", "lambda0", "perturbation", "t", "seed", "cap", "grid", "box", "radius", "center",
                         "seeds", "complex", "sw", "tolerances", "analyses", "dispersion", "output", "timings"});
  if (!j.contains("family")) throw ConfigError("missing key 'family'");
  const auto& fj = j.at("family");
  if (fj.is_string()) {
    c.family.preset = fj.get<std::string>();
  } else {
    reject_unknown(fj, "family", {"preset", "spin", "alpha", "slopes", "class", "arity", "entries", "name"});
    if (fj.contains("preset") == fj.contains("entries"))
      throw ConfigError("'family' needs exactly one of 'preset' or 'entries'");
    if (fj.contains("preset")) c.family.preset = get_as<std::string>(fj.at("preset"), "family.preset");
    if (fj.contains("spin")) {
      std::string s = rational_text(fj.at("spin"), "family.spin");
      try {
        c.family.twice_s = parse_twice_spin(s);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("key 'family.spin': ") + e.what());
      }
    }
    if (fj.contains("alpha")) {
      c.family.alpha.clear();
      for (const auto& a : fj.at("alpha")) c.family.alpha.push_back(rational_text(a, "family.alpha"));
      if (c.family.alpha.size() != 3) throw ConfigError("key 'family.alpha' needs three values");
    }
    if (fj.contains("slopes")) {
      c.family.slopes.clear();
      for (const auto& a : fj.at("slopes")) c.family.slopes.push_back(rational_text(a, "family.slopes"));
    }
    if (fj.contains("class")) c.family.cls = get_as<std::string>(fj.at("class"), "family.class");
    if (fj.contains("arity")) c.family.arity = get_as<int>(fj.at("arity"), "family.arity");
    if (fj.contains("entries")) c.family.entries = entry_rows(fj.at("entries"), "family.entries");
    if (fj.contains("name")) c.family.name = get_as<std::string>(fj.at("name"), "family.name");
  }
  if (j.contains("lambda0")) c.lambda0 = j.at("lambda0").is_string() ? j.at("lambda0").get<std::string>()
                                                                      : rational_text(j.at("lambda0"), "lambda0");
  if (j.contains("perturbation")) {
    const auto& pj = j.at("perturbation");
    if (pj.is_string()) {
      c.perturbation.preset = pj.get<std::string>();
    } else {
      reject_unknown(pj, "perturbation", {"preset", "entries"});
      if (pj.contains("preset")) c.perturbation.preset = get_as<std::string>(pj.at("preset"), "perturbation.preset");
      if (pj.contains("entries")) {
        c.perturbation.preset = "entries";
        c.perturbation.entries = entry_rows(pj.at("entries"), "perturbation.entries");
      }
    }
  }
  if (j.contains("t")) c.t = doubles(j.at("t"), "t");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("cap") && !j.at("cap").is_null()) c.cap = get_as<int>(j.at("cap"), "cap");
  if (j.contains("grid")) c.grid = get_as<int>(j.at("grid"), "grid");
  if (j.contains("box")) c.box = get_as<double>(j.at("box"), "box");
  if (j.contains("radius") && !j.at("radius").is_null()) c.radius = get_as<double>(j.at("radius"), "radius");
  if (j.contains("center")) c.center = get_as<std::array<double, 3>>(j.at("center"), "center");
  if (j.contains("seeds")) c.seeds = get_as<std::size_t>(j.at("seeds"), "seeds");
  if (j.contains("complex")) c.complex = get_as<bool>(j.at("complex"), "complex");
  if (j.contains("sw")) {
    reject_unknown(j.at("sw"), "sw", {"order"});
    if (j.at("sw").contains("order")) c.sw_order = get_as<int>(j.at("sw").at("order"), "sw.order");
  }
  if (j.contains("tolerances")) {
    const auto& tj = j.at("tolerances");
    reject_unknown(tj, "tolerances", {"residual_gate", "merge_radius", "gap_tol", "chern_gap_tol", "integrality",
                                      "cluster_tol", "sw_tol", "sw_cluster_tol", "fd_step", "rational_tol",
                                      "rational_max_den"});
    auto set = [&](const char* k, auto& field) {
      if (tj.contains(k)) field = get_as<std::decay_t<decltype(field)>>(tj.at(k), std::string("tolerances.") + k);
    };
    set("residual_gate", c.tol.residual_gate);
    set("merge_radius", c.tol.merge_radius);
    set("gap_tol", c.tol.gap_tol);
    set("chern_gap_tol", c.tol.chern_gap_tol);
    set("integrality", c.tol.integrality);
    set("cluster_tol", c.tol.cluster_tol);
    set("sw_tol", c.tol.sw_tol);
    set("sw_cluster_tol", c.tol.sw_cluster_tol);
    set("fd_step", c.tol.fd_step);
    set("rational_tol", c.tol.rational_tol);
    set("rational_max_den", c.tol.rational_max_den);
  }
  if (j.contains("analyses")) {
    c.analyses = get_as<std::vector<std::string>>(j.at("analyses"), "analyses");
    if (c.analyses.empty()) throw ConfigError("key 'analyses' must not be empty");
    for (const auto& a : c.analyses)
      if (a != "cwp" && a != "chern" && a != "weyl" && a != "sw" && a != "formulas")
        throw ConfigError("key 'analyses': unknown analysis '" + a + "'");
  }
  if (j.contains("dispersion")) {
    const auto& dj = j.at("dispersion");
    reject_unknown(dj, "dispersion", {"mode", "from", "to", "center", "u", "v", "extent", "samples"});
    DispersionSpec d;
    if (dj.contains("mode")) d.mode = get_as<std::string>(dj.at("mode"), "dispersion.mode");
    if (d.mode != "line" && d.mode != "plane") throw ConfigError("key 'dispersion.mode' must be 'line' or 'plane'");
    if (dj.contains("from")) d.from = doubles(dj.at("from"), "dispersion.from");
    if (dj.contains("to")) d.to = doubles(dj.at("to"), "dispersion.to");
    if (dj.contains("center")) d.center = doubles(dj.at("center"), "dispersion.center");
    if (dj.contains("u")) d.u = doubles(dj.at("u"), "dispersion.u");
    if (dj.contains("v")) d.v = doubles(dj.at("v"), "dispersion.v");
    if (dj.contains("extent")) d.extent = get_as<double>(dj.at("extent"), "dispersion.extent");
    if (dj.contains("samples")) d.samples = get_as<int>(dj.at("samples"), "dispersion.samples");
    c.dispersion = d;
  }
  if (j.contains("output")) {
    reject_unknown(j.at("output"), "output", {"json", "csv"});
    if (j.at("output").contains("json")) c.out = get_as<std::string>(j.at("output").at("json"), "output.json");
    if (j.at("output").contains("csv")) c.csv = get_as<std::string>(j.at("output").at("csv"), "output.csv");
  }
  if (j.contains("timings")) c.timings = get_as<bool>(j.at("timings"), "timings");
  return c;
}

/// Parses configuration text; syntax errors carry the line and column.
inline AnalysisConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    auto pos = what.find("syntax error");
    throw ConfigError(pos == std::string::npos ? what : what.substr(pos), line, col);
  }
  return config_from_json(j);
}

inline AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Families from a configuration.

namespace detail {

/// Small random rational: numerator in [-5, 5], denominator in [1, 4].
inline Rational random_rational(std::mt19937_64& rng, bool nonzero = false) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  for (;;) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    if (!nonzero || q != 0) return q;
  }
}

}  // namespace detail

/// Random constant direction of the same size and class as `f`.
inline MatrixFamily random_constant_perturbation(const MatrixFamily& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  int n = f.n;
  std::vector<Poly> e(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> Poly& { return e[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < n; ++i) {
    at(i, i) = Poly(Scalar(detail::random_rational(rng)));
    if (f.cls == SymmetryClass::diagonal) continue;
    for (int j = i + 1; j < n; ++j) {
      Rational re = detail::random_rational(rng);
      Rational im = (f.cls == SymmetryClass::symmetric) ? Rational(0) : detail::random_rational(rng);
      Scalar c(GaussianRational(re, im));
      at(i, j) = Poly(c);
      if (f.cls == SymmetryClass::general)
        at(j, i) = Poly(Scalar(GaussianRational(detail::random_rational(rng), detail::random_rational(rng))));
      else
        at(j, i) = Poly(conj(c));
    }
  }
  return make_family(f.cls, f.arity, n, std::move(e), "random-constant");
}

inline std::vector<Rational> random_band_alpha(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  return {detail::random_rational(rng, true), detail::random_rational(rng, true), detail::random_rational(rng, true)};
}

inline MatrixFamily build_family(const AnalysisConfig& c) {
  const FamilySpec& s = c.family;
  if (s.preset.empty()) {
    if (s.entries.empty()) throw ConfigError("family has neither a preset nor entries");
    return family_from_strings(symmetry_class_from_string(s.cls), s.arity, s.entries, s.name.empty() ? "inline" : s.name);
  }
  const std::string& p = s.preset;
  if (p == "spin1-scaled") return build_spin1_scaled();
  if (p == "spin") return build_spin_family(s.twice_s);
  if (p == "pauli") return presets::pauli();
  if (p == "pauli-quadratic") return presets::pauli_quadratic();
  if (p == "symmetric-example") return presets::symmetric_example();
  if (p == "diagonal") {
    std::vector<Rational> sl;
    for (const auto& q : s.slopes) sl.push_back(detail::parse_rational(q));
    return build_diagonal_linear(sl);
  }
  if (p == "band") {
    std::vector<Rational> a;
    if (s.alpha.empty()) a = random_band_alpha(c.seed);
    else
      for (const auto& q : s.alpha) a.push_back(detail::parse_rational(q));
    return build_band_family(a[0], a[1], a[2]);
  }
  throw ConfigError("unknown family preset '" + p + "'");
}

/// Direction D of the perturbation f + t D, or nothing.
inline std::optional<MatrixFamily> build_perturbation(const AnalysisConfig& c, const MatrixFamily& f,
                                                      const std::string& fallback = "none") {
  std::string p = c.perturbation.preset == "none" ? fallback : c.perturbation.preset;
  if (p == "preset1") p = "constant";
  if (p == "preset2") p = "quadratic";
  if (p == "none") return std::nullopt;
  if (p == "constant" || p == "quadratic") {
    if (f.n != 3 || f.cls != SymmetryClass::hermitian)
      throw ConfigError("perturbation '" + p + "' applies to 3x3 hermitian families only");
    return p == "constant" ? presets::perturbation_constant() : presets::perturbation_quadratic();
  }
  if (p == "random") return random_constant_perturbation(f, c.seed);
  if (p == "entries")
    return family_from_strings(f.cls, f.arity, c.perturbation.entries, "inline-perturbation");
  throw ConfigError("unknown perturbation '" + p + "'");
}

inline std::vector<double> t_values(const AnalysisConfig& c) { return c.t.empty() ? std::vector<double>{0.1} : c.t; }

/// Exact lambda0; "auto" picks the largest eigenvalue cluster of f(0).
inline Scalar resolve_lambda0(const AnalysisConfig& c, const MatrixFamily& f) {
  if (c.lambda0 != "auto" && c.lambda0 != "auto-cluster") {
    try {
      Poly p = parse_poly(c.lambda0);
      if (p.degree() > 0) throw ConfigError("lambda0 must be a constant");
      return p.constant_term();
    } catch (const ParseError& e) {
      throw ConfigError(std::string("lambda0: ") + e.what());
    }
  }
  std::vector<double> zero(static_cast<std::size_t>(f.arity), 0.0);
  CMatrix A = evaluate(f, zero, 0.0);
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + f.n);
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  std::size_t best = 0;
  int best_count = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    int cnt = 0;
    for (const auto& w : ev) cnt += std::abs(w - ev[i]) <= 1e-6 * scale;
    if (cnt > best_count || (cnt == best_count && ev[i].real() < ev[best].real())) {
      best = i;
      best_count = cnt;
    }
  }
  Scalar l(GaussianRational(rationalize(ev[best].real(), 1000000), rationalize(ev[best].imag(), 1000000)));
  if (!check_base_eigenvalue(f, l).is_eigenvalue)
    throw ConfigError("lambda0 'auto': the clustered eigenvalue " + std::to_string(ev[best].real()) +
                      " is not a recognizable exact value; give lambda0 explicitly");
  return l;
}

/// Ascending band indices of f(0) whose eigenvalue is within tol of lambda0.
inline std::vector<int> cluster_bands(const MatrixFamily& f, const Scalar& lambda0, double tol) {
  std::vector<double> zero(static_cast<std::size_t>(f.arity), 0.0);
  CMatrix A = evaluate(f, zero, 0.0);
  Eigen::VectorXd ev = hermitian_eigenvalues(A);
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  std::vector<int> out;
  for (int b = 0; b < f.n; ++b)
    if (std::abs(ev(b) - lambda0.to_complex().real()) <= tol * scale) out.push_back(b);
  return out;
}

// ---------------------------------------------------------------------------
// JSON views of results.

inline Json to_json(const Tolerances& t) {
  return Json{{"residual_gate", t.residual_gate}, {"merge_radius", t.merge_radius},
              {"gap_tol", t.gap_tol},             {"chern_gap_tol", t.chern_gap_tol},
              {"integrality", t.integrality},     {"cluster_tol", t.cluster_tol},
              {"sw_tol", t.sw_tol},               {"sw_cluster_tol", t.sw_cluster_tol},
              {"fd_step", t.fd_step},             {"rational_tol", t.rational_tol},
              {"rational_max_den", t.rational_max_den}};
}

inline Json to_json(const AnalysisConfig& c) {
  Json fam;
  if (c.family.preset.empty()) {
    fam = Json{{"class", c.family.cls}, {"arity", c.family.arity}, {"entries", c.family.entries}};
    if (!c.family.name.empty()) fam["name"] = c.family.name;
  } else {
    fam = Json{{"preset", c.family.preset}};
    if (c.family.preset == "spin") fam["spin"] = Rational(c.family.twice_s, 2).get_str();
    if (c.family.preset == "band") {
      if (c.family.alpha.empty()) {
        Json a = Json::array();
        for (const auto& q : random_band_alpha(c.seed)) a.push_back(q.get_str());
        fam["alpha"] = a;
      } else {
        fam["alpha"] = c.family.alpha;
      }
    }
    if (c.family.preset == "diagonal") fam["slopes"] = c.family.slopes;
  }
  Json j{{"family", fam}, {"lambda0", c.lambda0}};
  Json pert{{"preset", c.perturbation.preset}};
  if (c.perturbation.preset == "entries") pert["entries"] = c.perturbation.entries;
  j["perturbation"] = pert;
  j["t"] = c.t;
  j["seed"] = c.seed;
  j["cap"] = c.cap ? Json(*c.cap) : Json(nullptr);
  j["grid"] = c.grid;
  j["box"] = c.box;
  j["radius"] = c.radius ? Json(*c.radius) : Json(nullptr);
  j["center"] = c.center;
  j["seeds"] = c.seeds;
  j["complex"] = c.complex;
  j["sw"] = Json{{"order", c.sw_order}};
  j["analyses"] = c.analyses;
  if (c.dispersion) {
    const auto& d = *c.dispersion;
    j["dispersion"] = Json{{"mode", d.mode}, {"from", d.from}, {"to", d.to}, {"center", d.center},
                           {"u", d.u},       {"v", d.v},       {"extent", d.extent}, {"samples", d.samples}};
  }
  j["timings"] = c.timings;
  return j;
}

inline Json to_json(const MatrixFamily& f) {
  return Json{{"name", f.name}, {"class", to_string(f.cls)}, {"n", f.n}, {"arity", f.arity},
              {"entries", family_to_strings(f)}};
}

inline Json monomials_json(const std::vector<Monomial>& ms) {
  Json a = Json::array();
  for (const auto& m : ms) a.push_back(m.str());
  return a;
}

inline Json to_json(const MultiplicityResult& r) {
  Json j{{"total", r.total ? Json(*r.total) : Json(nullptr)},
         {"hilbert", r.hilbert},
         {"basis", monomials_json(r.basis)},
         {"verdict", to_string(r.verdict)},
         {"cap", r.cap},
         {"method", r.method}};
  if (!r.truncations.empty()) j["truncations"] = r.truncations;
  if (r.witness) {
    Json dir = Json::array();
    for (const auto& s : r.witness->direction) dir.push_back(s.str());
    j["witness"] = Json{{"direction", dir}, {"gcd", r.witness->gcd.str()}};
  }
  return j;
}

inline Json to_json(const CountResult& r, SymmetryClass cls) {
  Json j = to_json(r.multiplicity);
  j["cluster_size"] = r.cluster_size;
  j["homogeneous"] = r.homogeneous;
  j["generators"] = r.generators;
  if (r.cluster_size >= 2) {
    long long formula = multiplicity_formula(r.cluster_size, cls);
    j["formula"] = formula;
    j["generic"] = r.multiplicity.total && *r.multiplicity.total == formula;
  }
  j["warnings"] = r.warnings;
  return j;
}

inline Json to_json(const ChernResult& r) {
  return Json{{"center", r.center},     {"radius", r.radius},         {"bands", r.bands},
              {"cherns", r.cherns},     {"raw", r.raw},               {"grid", r.grid_used},
              {"max_defect", r.max_defect}, {"min_gap", r.min_gap}};
}

inline Json to_json(const WeylPoint& w) {
  Json loc = Json::array(), im = Json::array();
  for (const auto& c : w.location) {
    loc.push_back(c.real());
    im.push_back(c.imag());
  }
  Json j{{"real", w.is_real}, {"location", loc}};
  if (!w.is_real) j["location_imag"] = im;
  j["lambda"] = w.lambda.real();
  if (!w.is_real) j["lambda_imag"] = w.lambda.imag();
  j["band_pair"] = w.band_pair ? Json(*w.band_pair) : Json(nullptr);
  j["charge"] = w.charge ? Json(*w.charge) : Json(nullptr);
  j["residual"] = w.residual;
  return j;
}

inline Json to_json(const WeylSearch& s) {
  Json pts = Json::array();
  for (const auto& w : s.points) pts.push_back(to_json(w));
  return Json{{"count", s.points.size()}, {"real_count", s.real_count()}, {"seeds", s.seeds_used},
              {"converged_seeds", s.converged}, {"complete", s.complete}, {"notes", s.notes}, {"points", pts}};
}

// ---------------------------------------------------------------------------
// Commands.

struct Report {
  Json json;
  int exit_code = 0;  // 0 ok, 1 error, 2 inconclusive
};

namespace detail {

class Stopwatch {
 public:
  explicit Stopwatch(bool on) : on_(on) {}
  template <class Fn>
  auto time(const std::string& label, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      if (on_) entries_[label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto r = fn();
      finish();
      return r;
    }
  }
  void attach(Json& j) const {
    if (on_) j["timings"] = entries_;
  }

 private:
  bool on_;
  Json entries_ = Json::object();
};

inline Json report_header(const std::string& command, const AnalysisConfig& c) {
  return Json{{"schema_version", kSchemaVersion},
              {"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
              {"command", command},
              {"seed", c.seed},
              {"tolerances", to_json(c.tol)},
              {"config", to_json(c)}};
}

inline ChernOptions chern_options(const AnalysisConfig& c, double t) {
  ChernOptions o;
  o.grid = c.grid;
  o.gap_tol = c.tol.chern_gap_tol;
  o.t = t;
  return o;
}

inline WeylSearchOptions weyl_options(const AnalysisConfig& c, std::optional<std::size_t> expected) {
  WeylSearchOptions o;
  o.box = c.box;
  o.seeds = c.seeds;
  o.expected = expected;
  o.seed = c.seed;
  o.residual_gate = c.tol.residual_gate;
  o.merge_radius = c.tol.merge_radius;
  o.gap_tol = c.tol.gap_tol;
  o.chern = chern_options(c, 0.0);
  return o;
}

/// Chern numbers of all bands, or of `fallback` bands when another band
/// pair closes on the sphere.
inline ChernResult chern_all_or(const MatrixFamily& f, const std::array<double, 3>& center, double r,
                                const std::vector<int>& fallback, const ChernOptions& o) {
  std::vector<int> all;
  for (int b = 0; b < f.n; ++b) all.push_back(b);
  try {
    return chern_on_sphere(f, center, r, all, o);
  } catch (const GapClosure&) {
    if (fallback == all) throw;
    return chern_on_sphere(f, center, r, fallback, o);
  }
}

/// Summary of Chern numbers restricted to the cluster bands.
inline Json chern_summary(const ChernResult& r, int n, const std::vector<int>& cluster, const Tolerances& tol) {
  Json j = to_json(r);
  std::vector<long long> cl;
  for (int b : cluster)
    for (std::size_t q = 0; q < r.bands.size(); ++q)
      if (r.bands[q] == b) cl.push_back(r.cherns[q]);
  long long total = 0;
  for (long long v : r.cherns) total += v;
  j["cluster_bands"] = cluster;
  j["cluster_cherns"] = cl;
  j["converged"] = true;
  j["integral"] = r.max_defect < tol.integrality;
  if (static_cast<int>(r.bands.size()) == n) {
    j["sum"] = total;
    j["sum_rule"] = total == 0;
  }
  if (cl.size() == cluster.size() && !cl.empty()) {
    LowerBound lb = lower_bound_from_cherns(cl);
    j["alg_counts"] = alg_counts_per_pair(cl);
    j["lower_bound"] = lb.value;
    if (lb.warning) j["warning"] = *lb.warning;
  }
  return j;
}

inline double default_radius(const AnalysisConfig& c) { return c.radius.value_or(0.1 * c.box); }

/// Big sphere about the origin enclosing every real point of `s`; checks
/// that the Chern numbers there equal the enclosed charges, pair by pair.
inline Json additivity_check(const MatrixFamily& f, const WeylSearch& s, const std::vector<int>& cluster,
                             const AnalysisConfig& c, double t) {
  double far = 0.0;
  for (const auto& w : s.points)
    if (w.is_real) {
      double d = 0.0;
      for (const auto& x : w.location) d += std::norm(x);
      far = std::max(far, std::sqrt(d));
    }
  double R = std::max(1.5 * far, 0.1 * c.box);
  ChernResult r = chern_all_or(f, {0.0, 0.0, 0.0}, R, cluster, chern_options(c, t));
  std::vector<long long> alg = alg_counts_per_pair(r.cherns);
  std::vector<long long> charges(alg.size(), 0);
  bool known = true;
  for (const auto& w : s.points) {
    if (!w.is_real) continue;
    if (!w.charge || !w.band_pair) {
      known = false;
      continue;
    }
    for (std::size_t q = 0; q + 1 < r.bands.size(); ++q)
      if (r.bands[q] == *w.band_pair) charges[q] += *w.charge;
  }
  long long total = 0;
  for (long long v : r.cherns) total += v;
  return Json{{"radius", R},          {"bands", r.bands},   {"cherns", r.cherns}, {"alg_counts", alg},
              {"charge_sums", charges}, {"sum_rule", total == 0}, {"holds", known && charges == alg}};
}

inline void write_dispersion(const AnalysisConfig& c, const MatrixFamily& f, double t) {
  if (c.csv.empty()) return;
  DispersionSpec d = c.dispersion.value_or(DispersionSpec{});
  std::size_t m = static_cast<std::size_t>(f.arity);
  std::vector<DispersionSample> samples;
  if (d.mode == "plane") {
    if (d.center.empty()) d.center.assign(m, 0.0);
    if (d.u.empty()) { d.u.assign(m, 0.0); d.u[0] = 1.0; }
    if (d.v.empty() && m > 1) { d.v.assign(m, 0.0); d.v[1] = 1.0; }
    if (d.extent <= 0.0) d.extent = c.box;
    if (d.center.size() != m || d.u.size() != m || d.v.size() != m)
      throw ConfigError("dispersion plane vectors must have one entry per parameter");
    samples = dispersion_plane(f, t, d.center, d.u, d.v, d.extent, d.samples);
  } else {
    if (d.from.empty()) { d.from.assign(m, 0.0); d.from[0] = -c.box; }
    if (d.to.empty()) { d.to.assign(m, 0.0); d.to[0] = c.box; }
    if (d.from.size() != m || d.to.size() != m)
      throw ConfigError("dispersion end points must have one entry per parameter");
    samples = dispersion_line(f, t, d.from, d.to, d.samples);
  }
  std::ofstream os(c.csv);
  if (!os) throw std::runtime_error("cannot write '" + c.csv + "'");
  write_dispersion_csv(os, samples);
}

inline bool has(const AnalysisConfig& c, const char* a) {
  return std::find(c.analyses.begin(), c.analyses.end(), a) != c.analyses.end();
}

}  // namespace detail

/// Number of complex crossing points born from the degeneracy at the origin.
inline Report cmd_count_cwp(const AnalysisConfig& c) {
  Report rep;
  detail::Stopwatch sw(c.timings);
  rep.json = detail::report_header("count-cwp", c);
  MatrixFamily f = build_family(c);
  Scalar l0 = resolve_lambda0(c, f);
  rep.json["family"] = to_json(f);
  rep.json["lambda0"] = l0.str();
  CountResult r = sw.time("cwp", [&] { return count_cwp(f, l0, c.cap); });
  rep.json["cwp"] = to_json(r, f.cls);
  if (r.multiplicity.verdict == Verdict::Inconclusive) rep.exit_code = 2;
  sw.attach(rep.json);
  return rep;
}

/// Chern numbers on a sphere about `center` (default origin) at the first t
/// when a perturbation is configured, otherwise at t = 0.
inline Report cmd_chern(const AnalysisConfig& c) {
  Report rep;
  detail::Stopwatch sw(c.timings);
  rep.json = detail::report_header("chern", c);
  MatrixFamily f = build_family(c);
  Scalar l0 = resolve_lambda0(c, f);
  auto dir = build_perturbation(c, f);
  double t = dir ? t_values(c).front() : 0.0;
  MatrixFamily g = dir ? perturb(f, *dir) : f;
  rep.json["family"] = to_json(g);
  rep.json["lambda0"] = l0.str();
  rep.json["t"] = t;
  auto cluster = cluster_bands(f, l0, c.tol.cluster_tol);
  ChernResult r = sw.time("chern", [&] {
    return detail::chern_all_or(g, c.center, detail::default_radius(c), cluster, detail::chern_options(c, t));
  });
  rep.json["chern"] = detail::chern_summary(r, f.n, cluster, c.tol);
  sw.attach(rep.json);
  return rep;
}

namespace detail {

inline Json weyl_block(const AnalysisConfig& c, const MatrixFamily& g, double t, std::optional<long> cwp,
                       const std::vector<int>& cluster, Stopwatch& sw, bool& any_incomplete) {
  Json j{{"t", t}};
  std::optional<std::size_t> expected;
  if (cwp) expected = static_cast<std::size_t>(*cwp);
  std::string tag = "t=" + std::to_string(t);
  WeylSearch real = sw.time("weyl real " + tag, [&] { return find_real_weyl_points(g, t, weyl_options(c, expected)); });
  j["real"] = to_json(real);
  any_incomplete = any_incomplete || !real.complete;
  if (cwp) j["parity"] = parity_consistent(static_cast<long long>(real.real_count()), *cwp);
  if (c.complex) {
    WeylSearch cx = sw.time("weyl complex " + tag, [&] { return find_complex_weyl_points(g, t, weyl_options(c, expected)); });
    j["complex"] = to_json(cx);
    j["complex_parity"] = parity_consistent(static_cast<long long>(real.real_count()), static_cast<long long>(cx.points.size()));
  }
  if (g.cls == SymmetryClass::hermitian && g.arity == 3 && !real.points.empty()) {
    try {
      j["additivity"] = sw.time("additivity " + tag, [&] { return additivity_check(g, real, cluster, c, t); });
    } catch (const std::exception& e) {
      j["additivity"] = Json{{"error", e.what()}};
    }
  }
  return j;
}

}  // namespace detail

/// Real (and optionally complex) crossing points of the perturbed family.
inline Report cmd_find_weyl(const AnalysisConfig& c) {
  Report rep;
  detail::Stopwatch sw(c.timings);
  rep.json = detail::report_header("find-weyl", c);
  MatrixFamily f = build_family(c);
  Scalar l0 = resolve_lambda0(c, f);
  auto dir = build_perturbation(c, f);
  MatrixFamily g = dir ? perturb(f, *dir) : f;
  rep.json["family"] = to_json(g);
  rep.json["lambda0"] = l0.str();
  CountResult cnt = sw.time("cwp", [&] { return count_cwp(f, l0, c.cap); });
  rep.json["cwp"] = to_json(cnt, f.cls);
  std::optional<long> cwp;
  if (cnt.multiplicity.verdict == Verdict::Isolated) cwp = cnt.multiplicity.total;
  auto cluster = cluster_bands(f, l0, c.tol.cluster_tol);
  bool incomplete = false;
  Json runs = Json::array();
  std::vector<double> ts = dir ? t_values(c) : std::vector<double>{0.0};
  for (double t : ts) runs.push_back(detail::weyl_block(c, g, t, cwp, cluster, sw, incomplete));
  rep.json["weyl"] = runs;
  detail::write_dispersion(c, g, ts.front());
  if (cnt.multiplicity.verdict == Verdict::Inconclusive) rep.exit_code = 2;
  sw.attach(rep.json);
  return rep;
}

/// Effective two-band (or k-band) germ at lambda0 and its local algebra.
inline Report cmd_sw(const AnalysisConfig& c) {
  Report rep;
  detail::Stopwatch sw(c.timings);
  rep.json = detail::report_header("sw", c);
  MatrixFamily f = build_family(c);
  Scalar l0 = resolve_lambda0(c, f);
  rep.json["family"] = to_json(f);
  rep.json["lambda0"] = l0.str();
  EffectiveFamilyOptions eo;
  eo.order = c.sw_order;
  eo.step = c.tol.fd_step;
  eo.sw.tol = c.tol.sw_tol;
  eo.sw.cluster_tol = c.tol.sw_cluster_tol;
  EffectiveFamily E = sw.time("effective", [&] { return effective_family(f, l0.to_complex(), eo); });
  auto hq = E.rational_h(c.tol.rational_tol, c.tol.rational_max_den);
  Json h = Json::array(), hn = Json::array();
  for (const auto& p : hq) h.push_back(p.str());
  for (const auto& p : E.h) hn.push_back(p.str());
  Json j{{"k", E.k}, {"order", E.order}, {"h", h}, {"h_numeric", hn}, {"trace", E.trace.str()}};
  if (E.k == 2) {
    MultiplicityResult m = local_multiplicity(hq, f.params(), c.cap.value_or(12));
    j["h_local_algebra"] = to_json(m);
    if (m.verdict == Verdict::Inconclusive) rep.exit_code = 2;
    try {
      TwofoldAlgebra T = twofold_local_algebra(f, l0, c.cap.value_or(12));
      Json rel = Json::array();
      for (const auto& s : T.lambda_relation) rel.push_back(s.str());
      j["twofold"] = Json{{"dim", T.basis.size()}, {"basis", monomials_json(T.basis)}, {"lambda", rel}};
    } catch (const TwofoldError& e) {
      j["twofold"] = Json{{"error", e.what()}};
    }
  }
  // One chart evaluation at a seeded point near the origin, as a health check.
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(-0.05 * c.box, 0.05 * c.box);
  std::vector<double> p(static_cast<std::size_t>(f.arity));
  for (auto& x : p) x = U(rng);
  std::vector<double> zero(p.size(), 0.0);
  CMatrix A0 = evaluate(f, zero), A = evaluate(f, p);
  SWOptions so;
  so.tol = c.tol.sw_tol;
  so.cluster_tol = c.tol.sw_cluster_tol;
  SWDecomposition D = sw_decompose(A0, l0.to_complex(), A, so);
  j["sample"] = Json{{"point", p}, {"residual", D.residual}, {"iterations", D.iterations}, {"unitary_frame", D.unitary_frame}};
  rep.json["sw"] = j;
  sw.attach(rep.json);
  return rep;
}

/// Closed forms and Hilbert sequences for a generic k-fold crossing.
inline Report cmd_formulas(long long k, SymmetryClass cls, const AnalysisConfig& c = {}) {
  if (k < 2) throw std::invalid_argument("formulas: k must be >= 2");
  Report rep;
  rep.json = Json{{"schema_version", kSchemaVersion},
                  {"tool", Json{{"name", kToolName}, {"version", kToolVersion}}},
                  {"command", "formulas"},
                  {"seed", c.seed},
                  {"tolerances", to_json(c.tol)}};
  Json j{{"k", k}, {"class", to_string(cls)}, {"total", multiplicity_formula(k, cls)}};
  auto palindromic = [](const std::vector<long long>& v) { return std::equal(v.begin(), v.end(), v.rbegin()); };
  if (cls == SymmetryClass::hermitian || cls == SymmetryClass::general) {
    HilbertSequence s = gn_hilbert_sequence(k);
    j["hilbert"] = s.dims;
    j["hilbert_total"] = s.total;
    j["palindromic"] = palindromic(s.dims);
    j["spin_lower_bound"] = spin_lower_bound(static_cast<int>(k - 1));
  } else if (cls == SymmetryClass::symmetric) {
    HilbertSequence s = jozefiak_sequence(k);
    j["hilbert"] = s.dims;
    j["hilbert_total"] = s.total;
    j["palindromic"] = palindromic(s.dims);
  }
  rep.json["formulas"] = j;
  return rep;
}

/// Full pipeline: crossing count, cluster Chern numbers, crossing points and
/// the bound alg <= #WP <= cwp. Failures of one stage are recorded and the
/// remaining stages still run.
inline Report cmd_report(const AnalysisConfig& c) {
  Report rep;
  detail::Stopwatch sw(c.timings);
  rep.json = detail::report_header("report", c);
  MatrixFamily f = build_family(c);
  if (f.cls == SymmetryClass::general) throw FamilyError("report: family must be hermitian, real symmetric or diagonal");
  Scalar l0 = resolve_lambda0(c, f);
  auto dir = build_perturbation(c, f, "random");
  MatrixFamily g = dir ? perturb(f, *dir) : f;
  rep.json["family"] = to_json(f);
  rep.json["perturbed_family"] = to_json(g);
  rep.json["lambda0"] = l0.str();
  Json errors = Json::array();
  auto stage = [&](const char* name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.push_back(Json{{"stage", name}, {"error", e.what()}});
    }
  };
  auto cluster = cluster_bands(f, l0, c.tol.cluster_tol);
  std::optional<long> cwp;
  std::optional<long long> alg;
  std::vector<std::optional<std::size_t>> wp;
  bool inconclusive = false, incomplete = false;
  if (detail::has(c, "cwp"))
    stage("cwp", [&] {
      CountResult r = sw.time("cwp", [&] { return count_cwp(f, l0, c.cap); });
      rep.json["cwp"] = to_json(r, f.cls);
      if (r.multiplicity.verdict == Verdict::Isolated) cwp = r.multiplicity.total;
      if (r.multiplicity.verdict == Verdict::Inconclusive) inconclusive = true;
    });
  if (detail::has(c, "chern") && f.cls == SymmetryClass::hermitian && f.arity == 3)
    stage("chern", [&] {
      ChernResult r = sw.time("chern", [&] {
        return detail::chern_all_or(f, c.center, detail::default_radius(c), cluster, detail::chern_options(c, 0.0));
      });
      Json j = detail::chern_summary(r, f.n, cluster, c.tol);
      if (j.contains("lower_bound")) alg = j["lower_bound"].get<long long>();
      rep.json["chern"] = j;
    });
  std::vector<double> ts = t_values(c);
  if (detail::has(c, "weyl"))
    stage("weyl", [&] {
      Json runs = Json::array();
      for (double t : ts) {
        Json b = detail::weyl_block(c, g, t, cwp, cluster, sw, incomplete);
        wp.push_back(b["real"]["real_count"].get<std::size_t>());
        runs.push_back(std::move(b));
      }
      rep.json["weyl"] = runs;
    });
  if (detail::has(c, "sw"))
    stage("sw", [&] {
      Report s = cmd_sw(c);
      rep.json["sw"] = s.json["sw"];
    });
  if (detail::has(c, "formulas") && cluster.size() >= 2)
    stage("formulas", [&] { rep.json["formulas"] = cmd_formulas(static_cast<long long>(cluster.size()), f.cls, c).json["formulas"]; });
  if (cwp && alg && !wp.empty()) {
    Json obs = Json::array();
    for (std::size_t q = 0; q < wp.size(); ++q) {
      long long n = static_cast<long long>(*wp[q]);
      Json o{{"t", ts[q]}, {"wp", n}, {"within", *alg <= n && n <= *cwp}, {"parity", parity_consistent(*alg, n, *cwp)}};
      if (n < *alg) o["note"] = "fewer real points than the lower bound: crossings lie outside the box or were missed";
      obs.push_back(std::move(o));
    }
    rep.json["bounds"] = Json{{"alg", *alg},
                              {"cwp", *cwp},
                              {"line", std::to_string(*alg) + " ≤ ♯WP ≤ " + std::to_string(*cwp)},
                              {"observed", obs}};
  }
  stage("dispersion", [&] { detail::write_dispersion(c, g, ts.front()); });
  rep.json["errors"] = errors;
  if (!errors.empty()) rep.exit_code = 1;
  else if (inconclusive) rep.exit_code = 2;
  sw.attach(rep.json);
  return rep;
}

}  // namespace weylbound
