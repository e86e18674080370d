// Acceptance suite: one PASS/FAIL line per criterion, with timings.
//
// Exit status counts failures, except those listed in kKnownDefects: checks
// whose stated expectation disagrees with exact algebra and is kept literal
// on purpose (see README). Pass --strict to count those as well.

#include "../support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace weylbound;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

const std::set<int> kKnownDefects = {2};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

double dist(const WeylPoint& w, const std::vector<cd>& loc, cd lambda) {
  double d = std::abs(w.lambda - lambda);
  for (std::size_t i = 0; i < loc.size(); ++i) d = std::max(d, std::abs(w.location[i] - loc[i]));
  return d;
}

bool contains_point(const std::vector<WeylPoint>& pts, const std::vector<cd>& loc, std::optional<cd> lambda, double tol) {
  for (const auto& w : pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < loc.size(); ++i) d = std::max(d, std::abs(w.location[i] - loc[i]));
    if (lambda) d = std::max(d, std::abs(w.lambda - *lambda));
    if (d <= tol) return true;
  }
  return false;
}

std::string describe(const WeylPoint& w) {
  std::ostringstream os;
  os << std::setprecision(6) << "(";
  for (std::size_t i = 0; i < w.location.size(); ++i) {
    cd c = w.location[i];
    os << (i ? "," : "") << c.real();
    if (std::abs(c.imag()) > 1e-12) os << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
  }
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome c1_spin1_count() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  CountResult r = count_cwp(build_spin1_scaled(), Scalar());
  double el = seconds_since(t0);
  const auto& m = r.multiplicity;
  o.check(m.verdict == Verdict::Isolated, "verdict Isolated");
  o.check(m.total && *m.total == 6, "total 6");
  std::set<std::string> basis, want = {"1", "x", "y", "z", "l", "x^2"};
  for (const auto& b : m.basis) basis.insert(b.str());
  o.check(basis == want, "basis {1,x,y,z,l,x^2}");
  o.check(el < 5.0, "runtime < 5 s");
  o.note("total " + std::to_string(m.total.value_or(-1)) + ", basis " +
         list(std::vector<std::string>(basis.begin(), basis.end())));
  return o;
}

Outcome c2_spin1_perturbation_constant() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const double t = 0.1, r2 = std::sqrt(2.0);
  MatrixFamily f = perturb(build_spin1_scaled(), presets::perturbation_constant());
  WeylSearchOptions opt;
  opt.expected = 6;
  WeylSearch real = find_real_weyl_points(f, t, opt);
  o.check(real.points.size() == 4, "exactly 4 real points (found " + std::to_string(real.points.size()) + ")");
  struct Want {
    double x, z, l;
  };
  std::vector<Want> want = {{t, r2 * t, -r2 * t}, {t, -r2 * t, r2 * t}, {-t, r2 * t, r2 * t}, {-t, -r2 * t, -r2 * t}};
  for (const auto& w : want)
    o.check(contains_point(real.points, {w.x, 0.0, w.z}, cd(w.l), 1e-8),
            "real point (" + fmt(w.x) + ",0," + fmt(w.z) + ") with lambda " + fmt(w.l));
  WeylSearch cx = find_complex_weyl_points(f, t, opt);
  o.check(cx.points.size() == 6, "6 complex crossing points in total (found " + std::to_string(cx.points.size()) + ")");
  for (const auto& w : want)
    o.check(contains_point(cx.points, {w.x, 0.0, w.z}, cd(w.l), 1e-8), "complex search recovers the real points");
  std::vector<std::string> nonreal;
  for (const auto& w : cx.points)
    if (!w.is_real) nonreal.push_back(describe(w));
  // Stated literally as (0, +-i, 0); the family is homogeneous of degree one
  // in (x, y, z, t), so the points scale with t.
  for (double s : {1.0, -1.0})
    o.check(contains_point(cx.points, {0.0, cd(0.0, s), 0.0}, cd(0.0), 1e-8),
            std::string("complex point (0,") + (s > 0 ? "+" : "-") + "i,0)");
  bool scaled = contains_point(cx.points, {0.0, cd(0.0, t), 0.0}, cd(0.0), 1e-8) &&
                contains_point(cx.points, {0.0, cd(0.0, -t), 0.0}, cd(0.0), 1e-8);
  double el = seconds_since(t0);
  o.check(el < 30.0, "runtime < 30 s");
  o.note("non-real points found " + list(nonreal) + (scaled ? ", equal to (0,+-i*t,0)" : ""));
  return o;
}

Outcome c3_spin1_perturbation_quadratic() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const double t = 0.1;
  MatrixFamily f = perturb(build_spin1_scaled(), presets::perturbation_quadratic());
  WeylSearchOptions opt;
  opt.expected = 6;
  WeylSearch real = find_real_weyl_points(f, t, opt);
  o.check(real.points.size() == 6, "exactly 6 real points (found " + std::to_string(real.points.size()) + ")");
  double y = t * std::sqrt(2.0 - t * t);
  for (double s : {1.0, -1.0}) {
    o.check(contains_point(real.points, {s * t * t, 0.0, 0.0}, cd(-t), 1e-8), "point (" + fmt(s * t * t) + ",0,0), lambda -t");
    o.check(contains_point(real.points, {0.0, s * y, 0.0}, cd(t), 1e-8), "point (0," + fmt(s * y) + ",0), lambda t");
  }
  double el = seconds_since(t0);
  o.check(el < 30.0, "runtime < 30 s");
  o.note(std::to_string(real.points.size()) + " real points");
  return o;
}

Outcome c4_closed_forms() {
  Outcome o;
  for (long long k = 2; k <= 8; ++k) {
    HilbertSequence gn = gn_hilbert_sequence(k);
    o.check(multiplicity_formula(k, SymmetryClass::hermitian) == gn.total, "hermitian total k=" + std::to_string(k));
    o.check(std::equal(gn.dims.begin(), gn.dims.end(), gn.dims.rbegin()), "palindromic k=" + std::to_string(k));
    HilbertSequence jz = jozefiak_sequence(k);
    o.check(multiplicity_formula(k, SymmetryClass::symmetric) == jozefiak_total(k), "symmetric total k=" + std::to_string(k));
    o.check(jz.total == jozefiak_total(k), "symmetric sequence total k=" + std::to_string(k));
    bool pal = std::equal(jz.dims.begin(), jz.dims.end(), jz.dims.rbegin());
    if (k >= 3) o.check(!pal, "symmetric sequence not palindromic k=" + std::to_string(k));
  }
  o.note("k=2..8, e.g. k=4: " + list(gn_hilbert_sequence(4).dims) + " and " + list(jozefiak_sequence(4).dims));
  return o;
}

Outcome c5_oracle_equivalence() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240501);
  const std::vector<SymmetryClass> all = {SymmetryClass::hermitian, SymmetryClass::general, SymmetryClass::symmetric,
                                          SymmetryClass::diagonal};
  std::vector<std::pair<int, SymmetryClass>> cases;
  for (int k : {2, 3})
    for (auto c : all) cases.emplace_back(k, c);
  cases.emplace_back(4, SymmetryClass::diagonal);
  cases.emplace_back(4, SymmetryClass::symmetric);
  int trials = 0, redraws = 0;
  for (auto [k, cls] : cases) {
    for (int trial = 0; trial < 20; ++trial) {
      for (int attempt = 0;; ++attempt) {
        MatrixFamily f = oracle::random_linear_family(cls, k, rng);
        CountResult r = count_cwp(f, Scalar());
        if (r.multiplicity.verdict != Verdict::Isolated && attempt < 10) {
          ++redraws;
          continue;
        }
        ++trials;
        o.check(r.multiplicity.verdict == Verdict::Isolated && r.multiplicity.total &&
                    *r.multiplicity.total == multiplicity_formula(k, cls),
                "k=" + std::to_string(k) + " " + to_string(cls) + " trial " + std::to_string(trial));
        break;
      }
    }
  }
  double el = seconds_since(t0);
  o.check(el < 120.0, "runtime < 2 min");
  o.note(std::to_string(trials) + " trials, " + std::to_string(redraws) + " non-isolated draws replaced, " + fmt(el, 3) + " s");
  return o;
}

Outcome c6_spin_cherns() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  for (int twice_s : {1, 2, 3}) {
    MatrixFamily f = build_spin_family(twice_s);
    std::vector<int> bands;
    for (int b = 0; b < f.n; ++b) bands.push_back(b);
    ChernOptions opt;
    opt.grid = 24;
    ChernResult r = chern_on_sphere(f, {0.0, 0.0, 0.0}, 1.0, bands, opt);
    o.check(r.cherns == spin_cherns(twice_s), "s=" + std::to_string(twice_s) + "/2 cherns " + list(r.cherns));
    o.check(r.grid_used == 48, "confirmed at the doubled grid");
    o.check(r.max_defect < 0.05, "integrality defect");
    o.note("s=" + std::to_string(twice_s) + "/2 " + list(r.cherns));
  }
  o.check(seconds_since(t0) < 60.0, "runtime < 1 min");
  return o;
}

Outcome c7_spin_lower_bounds() {
  Outcome o;
  for (int twice_s = 1; twice_s <= 5; ++twice_s) {
    long long k = twice_s + 1;
    o.check(lower_bound_from_cherns(spin_cherns(twice_s)).value == k * (k * k - 1) / 6, "k=" + std::to_string(k));
  }
  o.check(spin_lower_bound(2) == 4, "spin-1 gives 4");
  o.note("bounds " + list(std::vector<long long>{spin_lower_bound(1), spin_lower_bound(2), spin_lower_bound(3),
                                                 spin_lower_bound(4), spin_lower_bound(5)}));
  return o;
}

/// Pattern type up to overall sign and reversal: 8 for (-3,5,-5,3), 10 for
/// (-3,-1,1,3), 0 otherwise.
int band_pattern(const std::vector<long long>& c) {
  auto match = [&](const std::vector<long long>& p) {
    std::vector<long long> neg, rev(c.rbegin(), c.rend()), negrev;
    for (auto v : c) neg.push_back(-v);
    for (auto v : rev) negrev.push_back(-v);
    return c == p || neg == p || rev == p || negrev == p;
  };
  if (match({-3, 5, -5, 3})) return 8;
  if (match({-3, -1, 1, 3})) return 10;
  return 0;
}

Outcome c8_band_family() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  // Regions cut out by alpha2 = 0 and alpha2^2 = alpha0^2 + alpha1^2.
  auto region = [](const Rational& a0, const Rational& a1, const Rational& a2) {
    Rational rho2 = a0 * a0 + a1 * a1, d = a2 * a2 - rho2;
    if (sgn(a2) == 0 || sgn(rho2) == 0) return -1;
    if (abs(d) < rho2 / 10 || a2 * a2 < rho2 / 100) return -1;  // stay clear of the walls
    return (a2 > 0 ? 0 : 2) + (d > 0 ? 0 : 1);
  };
  std::vector<std::vector<int>> types(4);
  int draws = 0;
  while ((types[0].size() < 3 || types[1].size() < 3 || types[2].size() < 3 || types[3].size() < 3) && draws < 400) {
    ++draws;
    Rational a0 = oracle::random_rational(rng), a1 = oracle::random_rational(rng), a2 = oracle::random_rational(rng);
    int reg = region(a0, a1, a2);
    if (reg < 0 || types[static_cast<std::size_t>(reg)].size() >= 3) continue;
    MatrixFamily f = build_band_family(a0, a1, a2);
    std::string tag = "alpha=(" + a0.get_str() + "," + a1.get_str() + "," + a2.get_str() + ")";
    CountResult r = count_cwp(f, Scalar());
    o.check(r.multiplicity.verdict == Verdict::Isolated && r.multiplicity.total && *r.multiplicity.total == 20,
            tag + " count 20");
    ChernResult ch = chern_on_sphere(f, {0.0, 0.0, 0.0}, 1.0, {0, 1, 2, 3});
    int type = band_pattern(ch.cherns);
    o.check(type != 0, tag + " pattern " + list(ch.cherns));
    o.check(lower_bound_from_cherns(ch.cherns).value == type, tag + " lower bound");
    types[static_cast<std::size_t>(reg)].push_back(type);
  }
  std::vector<std::string> summary;
  std::set<int> seen;
  for (std::size_t reg = 0; reg < 4; ++reg) {
    o.check(types[reg].size() >= 3, "3 samples in region " + std::to_string(reg));
    for (int v : types[reg]) {
      o.check(v == types[reg].front(), "one pattern per region");
      seen.insert(v);
    }
    summary.push_back(types[reg].empty() ? "none" : std::to_string(types[reg].front()));
  }
  o.check(seen.count(8) && seen.count(10), "both patterns occur");
  double el = seconds_since(t0);
  o.check(el < 300.0, "runtime < 5 min");
  o.note("lower bound per region " + list(summary) + ", " + fmt(el, 3) + " s");
  return o;
}

Outcome c9_sw_decomposition() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.1, 1.0);
  double worst_res = 0.0, worst_eig = 0.0, worst_herm = 0.0;
  bool unitary = true;
  for (const auto& diag : std::vector<std::vector<double>>{{0, 0, 1}, {0, 0, 0, 2}}) {
    int n = static_cast<int>(diag.size());
    int k = static_cast<int>(std::count(diag.begin(), diag.end(), 0.0));
    CMatrix A0 = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) A0(i, i) = diag[static_cast<std::size_t>(i)];
    for (int s = 0; s < 50; ++s) {
      CMatrix E(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) E(i, j) = cd(N(rng), N(rng));
      E = (0.5 * (E + E.adjoint())).eval();
      E *= 0.05 * U(rng) / E.norm();
      CMatrix A = A0 + E;
      SWDecomposition D = sw_decompose(A0, 0.0, A);
      double res = (D.reconstruct() - A).cwiseAbs().maxCoeff();
      worst_res = std::max(worst_res, res);
      unitary = unitary && D.unitary_frame;
      worst_herm = std::max(worst_herm, (D.cluster_block() - D.cluster_block().adjoint()).cwiseAbs().maxCoeff());
      auto eff = oracle::dense_eigenvalues(D.cluster_block());
      auto all = oracle::dense_eigenvalues(A);
      for (int q = 0; q < k; ++q)
        worst_eig = std::max(worst_eig, std::abs(eff[static_cast<std::size_t>(q)] - all[static_cast<std::size_t>(q)]));
    }
  }
  o.check(worst_res <= 1e-10, "reconstruction residual <= 1e-10");
  o.check(worst_eig <= 1e-8, "effective spectrum matches the cluster eigenvalues to 1e-8");
  o.check(unitary && worst_herm <= 1e-10, "unitary frame with a hermitian effective block");
  o.note("max residual " + fmt(worst_res, 3) + ", max eigenvalue mismatch " + fmt(worst_eig, 3) +
         ", max non-hermiticity " + fmt(worst_herm, 3));
  return o;
}

Outcome c10_twofold() {
  Outcome o;
  TwofoldAlgebra T = twofold_local_algebra(presets::symmetric_example(), Scalar());
  std::set<std::string> basis, want = {"1", "x", "y", "x^2"};
  for (const auto& m : T.basis) basis.insert(m.str());
  o.check(T.basis.size() == 4, "dim 4");
  o.check(basis == want, "basis {1,x,y,x^2}");
  auto x2 = T.normal_form(parse_poly("x^2"));
  auto y2 = T.normal_form(parse_poly("y^2"));
  auto l = T.normal_form(var(Var::l));
  std::vector<Scalar> m2l;
  for (const auto& c : l) m2l.push_back(c * Scalar(-2));
  o.check(x2 == y2, "[x^2] = [y^2]");
  o.check(x2 == m2l, "[x^2] = -2[l]");
  o.note("basis " + list(std::vector<std::string>(basis.begin(), basis.end())));
  return o;
}

Outcome c11_cusp() {
  Outcome o;
  std::vector<Var> xy = {Var::x, Var::y};
  auto a = local_multiplicity({parse_poly("x^2 - y^3"), parse_poly("x + y")}, xy, 12);
  auto b = local_multiplicity({parse_poly("x^2 - y^3"), parse_poly("x")}, xy, 12);
  o.check(a.total && *a.total == 2, "{x^2-y^3, x+y} -> 2");
  o.check(b.total && *b.total == 3, "{x^2-y^3, x} -> 3");
  o.note("dims " + std::to_string(a.total.value_or(-1)) + ", " + std::to_string(b.total.value_or(-1)));
  return o;
}

Outcome c12_properties() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1212);
  // Cofactor relations on random families.
  int cof = 0;
  for (int s = 0; s < 50; ++s) {
    MatrixFamily f = s % 2 ? oracle::random_poly_family(3, rng)
                           : oracle::random_linear_family(SymmetryClass::hermitian, 3 + (s % 4 == 0), rng);
    CofactorReport r = check_cofactor_identities(f);
    o.check(r.all_zero, "cofactor relations on random family " + std::to_string(s) + " (" + r.first_failure.value_or("") + ")");
    cof += r.all_zero;
  }
  // Parity, sum rule and additivity on reports.
  struct Run {
    std::string preset, perturbation;
    std::vector<double> t;
    double box;
    std::vector<std::string> alpha, slopes;
  };
  std::vector<Run> runs = {{"spin1-scaled", "constant", {0.1}, 1.0, {}, {}},
                           {"spin1-scaled", "quadratic", {0.1, 0.05}, 1.0, {}, {}},
                           {"spin1-scaled", "random", {0.1}, 1.0, {}, {}},
                           {"spin", "random", {0.1}, 2.0, {}, {}},
                           {"band", "random", {0.1}, 3.0, {"1", "2/3", "1/5"}, {}},
                           {"band", "random", {0.1}, 3.0, {"-3/4", "1/4", "-5/2"}, {}},
                           {"diagonal", "random", {0.5}, 10.0, {}, {"1", "2", "3", "4"}}};
  int converged = 0, parity_ok = 0, additivity_ok = 0, additivity_runs = 0;
  for (std::size_t q = 0; q < runs.size(); ++q) {
    const Run& r = runs[q];
    AnalysisConfig c;
    c.family.preset = r.preset;
    c.family.twice_s = 3;
    c.family.alpha = r.alpha;
    if (!r.slopes.empty()) c.family.slopes = r.slopes;
    c.perturbation.preset = r.perturbation;
    c.t = r.t;
    c.box = r.box;
    c.seed = 100 + q;
    Report rep = cmd_report(c);
    std::string tag = r.preset + "/" + r.perturbation;
    o.check(rep.json["errors"].empty(), tag + " report without errors");
    if (rep.json.contains("chern") && rep.json["chern"].contains("sum_rule"))
      o.check(rep.json["chern"]["sum_rule"].get<bool>(), tag + " Chern sum rule");
    long long cwp = rep.json["cwp"]["total"].get<long long>();
    for (const auto& w : rep.json["weyl"]) {
      long long nr = w["real"]["real_count"].get<long long>();
      long long nc = w["complex"]["count"].get<long long>();
      if (nc == cwp && w["real"]["complete"].get<bool>()) {
        ++converged;
        bool ok = parity_consistent(nr, nc) && parity_consistent(nr, cwp);
        parity_ok += ok;
        o.check(ok, tag + " parity " + std::to_string(nr) + " vs " + std::to_string(nc));
      }
      if (w.contains("additivity") && !w["additivity"].contains("error")) {
        ++additivity_runs;
        bool ok = w["additivity"]["sum_rule"].get<bool>() && w["additivity"]["holds"].get<bool>();
        additivity_ok += ok;
        o.check(ok, tag + " additivity at t=" + fmt(w["t"].get<double>()));
      }
    }
  }
  o.check(converged > 0, "at least one converged run");
  // Invariance of the count under exact linear parameter changes.
  std::vector<MatrixFamily> fams = {presets::pauli(),          presets::pauli_quadratic(),
                                    build_spin1_scaled(),      build_spin_family(3),
                                    presets::symmetric_example(), build_diagonal_linear({1, 2, 3, 4}),
                                    build_band_family(1, Rational(2, 3), Rational(1, 5))};
  int changes = 0;
  std::vector<std::string> change_times;
  for (const auto& f : fams) {
    auto tf = std::chrono::steady_clock::now();
    long base = count_cwp(f, Scalar()).multiplicity.total.value_or(-1);
    for (int s = 0; s < 10; ++s) {
      MatrixFamily g = linear_change(f, oracle::random_invertible(f.arity, rng));
      long v = count_cwp(g, Scalar()).multiplicity.total.value_or(-2);
      o.check(v == base, f.name + " linear change " + std::to_string(s));
      ++changes;
    }
    change_times.push_back(f.name + " " + fmt(seconds_since(tf), 3) + " s");
  }
  o.note(std::to_string(cof) + "/50 cofactor checks, parity " + std::to_string(parity_ok) + "/" + std::to_string(converged) +
         " converged runs, additivity " + std::to_string(additivity_ok) + "/" + std::to_string(additivity_runs) + ", " +
         std::to_string(changes) + " linear changes " + list(change_times) + ", " + fmt(seconds_since(t0), 3) + " s");
  return o;
}

Outcome c13_non_cohen_macaulay() {
  Outcome o;
  std::mt19937_64 rng(1313);
  MatrixFamily f = oracle::random_linear_family(SymmetryClass::general, 3, rng);
  // The displayed cubic a31 a21 a33 - a31^2 a23 + a21^2 a32 - a21 a31 a22
  // (1-based indices) eliminates l from a31 M12 + a21 M13 of A - l.
  auto cubic = [](const std::vector<Poly>& a) {
    auto A = [&](int i, int j) -> const Poly& { return a[static_cast<std::size_t>((i - 1) * 3 + (j - 1))]; };
    return A(3, 1) * A(2, 1) * A(3, 3) - A(3, 1) * A(3, 1) * A(2, 3) + A(2, 1) * A(2, 1) * A(3, 2) -
           A(2, 1) * A(3, 1) * A(2, 2);
  };
  MatrixFamily lifted = lift(f, Scalar());
  Poly elim = lifted.at(2, 0) * oracle::minor(lifted, 0, 1) + lifted.at(1, 0) * oracle::minor(lifted, 0, 2);
  o.check(elim == cubic(f.entries), "cubic equals a31 M12 + a21 M13 and is free of l");
  // Conjugates P A P^-1 keep the cubic inside the ideal of the degeneracy locus.
  std::vector<Poly> gens;
  for (int s = 0; s < 12; ++s) {
    auto P = oracle::random_invertible(3, rng);
    std::vector<std::vector<Poly>> Pm(3, std::vector<Poly>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) Pm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Poly(P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    Scalar det = oracle::leibniz_det(Pm).constant_term();
    std::vector<Scalar> Pinv(9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::vector<std::vector<Poly>> sub;
        for (int r = 0; r < 3; ++r) {
          if (r == j) continue;
          std::vector<Poly> row;
          for (int c = 0; c < 3; ++c)
            if (c != i) row.push_back(Pm[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
          sub.push_back(row);
        }
        Scalar cof = oracle::leibniz_det(sub).constant_term() * Scalar((i + j) % 2 ? -1 : 1);
        Pinv[static_cast<std::size_t>(i * 3 + j)] = cof * det.inverse();
      }
    std::vector<Poly> B(9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            B[static_cast<std::size_t>(i * 3 + j)] += f.at(a, b).scaled(P[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] *
                                                                          Pinv[static_cast<std::size_t>(b * 3 + j)]);
    Poly g = cubic(B);
    o.check(g.is_zero_poly() || g.order() >= 3, "pulled-back cubic has order >= 3");
    if (!g.is_zero_poly()) gens.push_back(g);
  }
  std::vector<Var> xyz = {Var::x, Var::y, Var::z};
  MultiplicityResult r = graded_dimension(gens, xyz, 6);
  long low = 0;
  for (std::size_t d = 0; d < r.hilbert.size() && d < 3; ++d) low += r.hilbert[d];
  long dim = r.total.value_or(low);
  long correct = count_cwp(f, Scalar()).multiplicity.total.value_or(-1);
  o.check(correct == 6, "minor-ideal count 6");
  o.check(dim >= 10 && dim > correct, "cubic route dimension >= 10 > 6");
  o.note("cubic route " + std::to_string(dim) + " (" + to_string(r.verdict) + ", hilbert " + list(r.hilbert) +
         ") vs minor route " + std::to_string(correct));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = argc > 1 && std::string(argv[1]) == "--strict";
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"spin-1 complex crossing count", c1_spin1_count},
      {"spin-1 constant perturbation points", c2_spin1_perturbation_constant},
      {"spin-1 quadratic perturbation points", c3_spin1_perturbation_quadratic},
      {"closed forms vs resolutions", c4_closed_forms},
      {"count vs formula on random families", c5_oracle_equivalence},
      {"spin Chern numbers", c6_spin_cherns},
      {"spin lower bounds", c7_spin_lower_bounds},
      {"band family counts and patterns", c8_band_family},
      {"effective block decomposition", c9_sw_decomposition},
      {"two-fold local algebra", c10_twofold},
      {"cusp multiplicities", c11_cusp},
      {"property suites", c12_properties},
      {"cubic route overcounts", c13_non_cohen_macaulay},
  };
  int failed = 0, known = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = static_cast<int>(i + 1);
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    bool is_known = !o.pass && kKnownDefects.count(id);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << id << " " << criteria[i].first << " ("
              << fmt(seconds_since(t0), 3) << " s)" << (is_known ? " [known defect]" : "") << ": " << o.detail << std::endl;
    if (!o.pass) (is_known && !strict ? known : failed)++;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failed + known) << "/" << criteria.size() << " passed";
  if (known) std::cout << ", " << known << " known defect(s) not counted";
  std::cout << std::endl;
  return failed == 0 ? 0 : 1;
}
