#pragma once

// Dimension of the local algebra C[vars]_0 / J of a polynomial ideal J at the
// origin, by exact Macaulay-matrix rank computations.
//
// Homogeneous J: the quotient is graded and each degree is an independent
// block; the Hilbert function is read off degree by degree.
// General J: the truncated matrices in degrees <= D give
//   D_D = dim C[vars] / (J + m^{D+1}),
// and D_D == D_{D-1} certifies m^D in J (Nakayama), so the total is D_D.

#include "weylbound/echelon.hpp"
#include "weylbound/minors.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace weylbound {

enum class Verdict { Isolated, NotIsolated, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Isolated: return "Isolated";
    case Verdict::NotIsolated: return "NotIsolated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

/// A line through the origin inside the zero set: points (s v, s mu) with
/// gcd(mu) = 0. Certifies that the zero set is not isolated.
struct LineWitness {
  std::vector<Scalar> direction;  // parameter direction v
  Poly gcd;                       // univariate in l; every root mu gives a line
};

struct MultiplicityResult {
  std::optional<long> total;
  std::vector<long> hilbert;        // graded: Hilbert function; local: tangent-cone counts
  std::vector<Monomial> basis;      // standard monomials spanning the quotient
  std::vector<long> truncations;    // local method: D_0, D_1, ...
  Verdict verdict = Verdict::Inconclusive;
  int cap = 0;
  std::string method;               // "graded" or "local"
  std::optional<LineWitness> witness;
};

namespace detail {

inline void check_variables(const std::vector<Poly>& gens, const std::vector<Var>& vars) {
  unsigned allowed = 0;
  for (Var v : vars) allowed |= 1u << idx(v);
  for (const auto& g : gens)
    if (g.support() & ~allowed) throw std::invalid_argument("generator uses a variable outside the given variable set");
}

inline SparseEchelon<Scalar>::Row to_row(const Poly& p, const std::map<Monomial, int, GrlexLess>& col) {
  SparseEchelon<Scalar>::Row r;
  r.reserve(p.size());
  for (const auto& [m, c] : p.terms()) {
    auto it = col.find(m);
    if (it != col.end()) r.emplace_back(it->second, c);
  }
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return r;
}

/// Monomials of degree <= D in local column order: lower degree first, then
/// larger graded order first.
inline std::vector<Monomial> local_columns(const std::vector<Var>& vars, int D) {
  std::vector<Monomial> cols;
  for (int d = 0; d <= D; ++d) {
    auto ms = monomials_of_degree(vars, d);
    std::sort(ms.begin(), ms.end(), [](const Monomial& a, const Monomial& b) { return grlex_less(b, a); });
    cols.insert(cols.end(), ms.begin(), ms.end());
  }
  return cols;
}

}  // namespace detail

/// Hilbert function of C[vars]/J for homogeneous J, degree by degree up to
/// `cap`. Isolated once two consecutive degrees vanish.
inline MultiplicityResult graded_dimension(const std::vector<Poly>& gens, const std::vector<Var>& vars, int cap) {
  detail::check_variables(gens, vars);
  for (const auto& g : gens)
    if (!g.is_homogeneous()) throw std::invalid_argument("graded_dimension: generator is not homogeneous");
  MultiplicityResult res;
  res.method = "graded";
  res.cap = cap;
  std::vector<long> h;
  std::vector<Monomial> basis;
  for (int d = 0; d <= cap; ++d) {
    auto mons = monomials_of_degree(vars, d);
    std::sort(mons.begin(), mons.end(), [](const Monomial& a, const Monomial& b) { return grlex_less(b, a); });
    std::map<Monomial, int, GrlexLess> col;
    for (std::size_t k = 0; k < mons.size(); ++k) col.emplace(mons[k], static_cast<int>(k));
    SparseEchelon<Scalar> E(static_cast<int>(mons.size()));
    std::vector<SparseEchelon<Scalar>::Row> rows;
    for (const auto& g : gens) {
      if (g.is_zero_poly() || g.degree() > d) continue;
      for (const auto& m : monomials_of_degree(vars, d - g.degree())) rows.push_back(detail::to_row(g.shifted(m), col));
    }
    // Rows independent mod p go in first; if they already span, the rest
    // cannot change the row space and need no exact reduction.
    ModpSelector sel(static_cast<int>(mons.size()));
    std::vector<char> taken(rows.size(), 0);
    for (std::size_t q = 0; q < rows.size() && sel.rank() < mons.size(); ++q) {
      auto ok = sel.offer(rows[q]);
      if (!ok) break;
      if (*ok) {
        E.insert(rows[q]);
        taken[q] = 1;
      }
    }
    for (std::size_t q = 0; q < rows.size() && E.rank() < mons.size(); ++q)
      if (!taken[q]) E.insert(std::move(rows[q]));
    long hd = static_cast<long>(mons.size() - E.rank());
    h.push_back(hd);
    for (int c : E.non_pivot_columns()) basis.push_back(mons[static_cast<std::size_t>(c)]);
    if (hd == 0) {  // m^d lies in the ideal, so every higher degree vanishes too
      res.verdict = Verdict::Isolated;
      break;
    }
  }
  if (res.verdict == Verdict::Isolated) {
    while (!h.empty() && h.back() == 0) h.pop_back();
    long total = 0;
    for (long v : h) total += v;
    res.total = total;
  }
  res.hilbert = std::move(h);
  res.basis = std::move(basis);
  return res;
}

/// Local algebra with its reduced Macaulay echelon, for normal forms.
struct LocalAlgebra {
  MultiplicityResult result;
  std::vector<Var> vars;
  int level = 0;                                 // D with m^D contained in J
  std::vector<Monomial> columns;
  std::map<Monomial, int, GrlexLess> column_of;
  std::optional<SparseEchelon<Scalar>> echelon;  // fully reduced, set when Isolated

  /// Coordinates of p in the quotient with respect to result.basis.
  std::vector<Scalar> normal_form(const Poly& p) const {
    if (!echelon) throw std::logic_error("normal_form: local algebra is not finite");
    auto row = echelon->reduce(detail::to_row(p.truncated(level), column_of));
    std::vector<Scalar> coords(result.basis.size());
    std::map<int, std::size_t> pos;
    for (std::size_t k = 0; k < result.basis.size(); ++k) pos[column_of.at(result.basis[k])] = k;
    for (const auto& [c, v] : row) coords[pos.at(c)] = v;
    return coords;
  }
};

/// dim C[vars]_0 / J via truncated Macaulay matrices, up to degree `cap`.
inline LocalAlgebra local_algebra(const std::vector<Poly>& gens, const std::vector<Var>& vars, int cap) {
  detail::check_variables(gens, vars);
  LocalAlgebra A;
  A.vars = vars;
  A.result.method = "local";
  A.result.cap = cap;
  for (const auto& g : gens) {
    if (!g.constant_term().is_zero()) {  // unit ideal: the origin is not in the zero set
      A.result.total = 0;
      A.result.verdict = Verdict::Isolated;
      A.result.truncations = {0};
      A.level = 0;
      A.columns = {Monomial::one()};
      A.column_of.emplace(Monomial::one(), 0);
      SparseEchelon<Scalar> E(1);
      E.insert({{0, Scalar(1)}});
      A.echelon = std::move(E);
      return A;
    }
  }
  for (int D = 0; D <= cap; ++D) {
    auto cols = detail::local_columns(vars, D);
    std::map<Monomial, int, GrlexLess> col;
    for (std::size_t k = 0; k < cols.size(); ++k) col.emplace(cols[k], static_cast<int>(k));
    SparseEchelon<Scalar> E(static_cast<int>(cols.size()));
    for (const auto& g : gens) {
      if (g.is_zero_poly() || g.order() > D) continue;
      Poly gt = g.truncated(D);
      for (int e = 0; e + g.order() <= D; ++e)
        for (const auto& m : monomials_of_degree(vars, e)) E.insert(detail::to_row(gt.shifted(m).truncated(D), col));
    }
    long dim = static_cast<long>(cols.size() - E.rank());
    A.result.truncations.push_back(dim);
    if (D >= 1 && dim == A.result.truncations[static_cast<std::size_t>(D - 1)]) {
      E.fully_reduce();
      A.result.verdict = Verdict::Isolated;
      A.result.total = dim;
      A.level = D;
      for (int c : E.non_pivot_columns()) {
        const Monomial& m = cols[static_cast<std::size_t>(c)];
        A.result.basis.push_back(m);
        std::size_t d = static_cast<std::size_t>(m.degree());
        if (A.result.hilbert.size() <= d) A.result.hilbert.resize(d + 1, 0);
        A.result.hilbert[d] += 1;
      }
      A.columns = std::move(cols);
      A.column_of = std::move(col);
      A.echelon = std::move(E);
      return A;
    }
  }
  return A;
}

inline MultiplicityResult local_multiplicity(const std::vector<Poly>& gens, const std::vector<Var>& vars, int cap) {
  return local_algebra(gens, vars, cap).result;
}

// ---------------------------------------------------------------------------
// Non-isolation certificate for homogeneous ideals in (params, l).

namespace detail {

using UPoly = std::vector<Scalar>;  // coefficients by ascending power

inline void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline UPoly upoly_mod(UPoly a, const UPoly& b) {
  trim(a);
  Scalar lead_inv = b.back().inverse();
  while (a.size() >= b.size()) {
    Scalar f = a.back() * lead_inv;
    std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

/// Monic gcd; the empty vector stands for the zero polynomial.
inline UPoly upoly_gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = upoly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Scalar inv = a.back().inverse();
    for (auto& c : a) c *= inv;
  }
  return a;
}

inline UPoly to_upoly(const Poly& p, Var v) {
  UPoly u;
  for (const auto& [m, c] : p.terms()) {
    std::size_t e = static_cast<std::size_t>(m[idx(v)]);
    if (u.size() <= e) u.resize(e + 1);
    u[e] += c;
  }
  trim(u);
  return u;
}

inline Poly from_upoly(const UPoly& u, Var v) {
  Poly p;
  for (std::size_t e = 0; e < u.size(); ++e) p.add_term(Monomial::var(v, static_cast<int>(e)), u[e]);
  return p;
}

/// Up to `count` rational parameter directions: axes, pairwise sums and
/// differences, then small-integer directions from a fixed sequence.
inline std::vector<std::vector<Scalar>> sample_directions(int arity, std::size_t count) {
  std::vector<std::vector<Scalar>> dirs;
  auto push = [&](std::vector<long> v) {
    if (dirs.size() >= count) return;
    std::vector<Scalar> s;
    for (long a : v) s.emplace_back(a);
    dirs.push_back(std::move(s));
  };
  for (int i = 0; i < arity; ++i) {
    std::vector<long> v(static_cast<std::size_t>(arity), 0);
    v[static_cast<std::size_t>(i)] = 1;
    push(v);
  }
  for (int i = 0; i < arity; ++i)
    for (int j = i + 1; j < arity; ++j)
      for (long s : {1L, -1L}) {
        std::vector<long> v(static_cast<std::size_t>(arity), 0);
        v[static_cast<std::size_t>(i)] = 1;
        v[static_cast<std::size_t>(j)] = s;
        push(v);
      }
  unsigned long state = 12345;
  while (dirs.size() < count) {
    std::vector<long> v;
    for (int i = 0; i < arity; ++i) {
      state = state * 6364136223846793005UL + 1442695040888963407UL;
      v.push_back(static_cast<long>((state >> 33) % 7) - 3);
    }
    bool nonzero = false;
    for (long a : v) nonzero = nonzero || a != 0;
    if (nonzero) push(v);
  }
  return dirs;
}

}  // namespace detail

/// Looks for a line through the origin in the zero set of homogeneous
/// generators in (params, l), along sampled rational parameter directions
/// and along the l axis.
inline std::optional<LineWitness> find_line_witness(const std::vector<Poly>& gens, const std::vector<Var>& params,
                                                    std::size_t directions = 20) {
  for (const auto& g : gens)
    if (!g.is_homogeneous()) return std::nullopt;
  int arity = static_cast<int>(params.size());
  {
    auto images = Poly::identity_images();
    for (Var v : params) images[static_cast<std::size_t>(idx(v))] = Poly();
    bool all_zero = true;
    for (const auto& g : gens) all_zero = all_zero && g.substitute(images).is_zero_poly();
    if (all_zero) return LineWitness{std::vector<Scalar>(static_cast<std::size_t>(arity)), Poly()};
  }
  for (const auto& dir : detail::sample_directions(arity, directions)) {
    auto images = Poly::identity_images();
    for (int i = 0; i < arity; ++i) images[static_cast<std::size_t>(idx(params[static_cast<std::size_t>(i)]))] = Poly(dir[static_cast<std::size_t>(i)]);
    detail::UPoly g;
    for (const auto& gen : gens) {
      g = detail::upoly_gcd(g, detail::to_upoly(gen.substitute(images), Var::l));
      if (g.size() == 1) break;
    }
    if (g.size() != 1) return LineWitness{dir, detail::from_upoly(g, Var::l)};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Counting crossing points of a family.

struct CountResult {
  MultiplicityResult multiplicity;
  int cluster_size = 0;           // multiplicity of lambda0 as an eigenvalue of f(0)
  bool homogeneous = false;
  std::size_t generators = 0;
  std::vector<std::string> warnings;
};

/// Default degree cap: 2k - 2 for linear homogeneous lifts, 12 otherwise.
inline int default_cap(const MatrixFamily& f, int k, bool homogeneous) {
  if (homogeneous && f.max_degree() <= 1) return std::max(2 * k - 2, 2);
  return 12;
}

/// Number of complex crossing points born from the degeneracy of f at the
/// origin at eigenvalue lambda0 (t is set to 0).
inline CountResult count_cwp(const MatrixFamily& fam, const Scalar& lambda0, std::optional<int> cap = std::nullopt) {
  CountResult out;
  MatrixFamily f = specialize_t(fam, Scalar());
  EigenvalueCheck ev = check_base_eigenvalue(f, lambda0);
  if (!ev.is_eigenvalue)
    out.warnings.push_back("lambda0 = " + lambda0.str() + " is not an eigenvalue at the origin (distance " +
                           std::to_string(ev.distance) + ")");
  out.cluster_size = ev.is_eigenvalue ? algebraic_multiplicity_at_origin(f, lambda0) : 0;
  MinorSystem ms = minor_ideal(f, lambda0);
  out.generators = ms.generators.size();
  out.homogeneous = std::all_of(ms.generators.begin(), ms.generators.end(), [](const Poly& p) { return p.is_homogeneous(); });
  int c = cap.value_or(default_cap(f, out.cluster_size, out.homogeneous));
  auto vars = ms.variables();
  if (out.homogeneous)
    out.multiplicity = graded_dimension(ms.generators, vars, c);
  else
    out.multiplicity = local_multiplicity(ms.generators, vars, c);
  if (out.multiplicity.verdict == Verdict::Inconclusive && out.homogeneous) {
    if (auto w = find_line_witness(ms.generators, f.params())) {
      out.multiplicity.verdict = Verdict::NotIsolated;
      out.multiplicity.witness = std::move(w);
    }
  }
  if (out.multiplicity.verdict == Verdict::Inconclusive)
    out.warnings.push_back("no certificate within degree cap " + std::to_string(c));
  return out;
}

// ---------------------------------------------------------------------------
// Twofold structure: the quotient by the minor ideal viewed over the
// parameter ring, with l expressed through parameter monomials.

struct TwofoldAlgebra {
  LocalAlgebra algebra;
  std::vector<Monomial> basis;          // parameter-only standard monomials
  std::vector<Scalar> lambda_relation;  // coordinates of l on `basis`

  std::vector<Scalar> normal_form(const Poly& p) const { return algebra.normal_form(p); }
};

class TwofoldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline TwofoldAlgebra twofold_local_algebra(const MatrixFamily& fam, const Scalar& lambda0, int cap = 12) {
  MatrixFamily f = specialize_t(fam, Scalar());
  MinorSystem ms = minor_ideal(f, lambda0);
  bool has_unit_l = false;
  for (const auto& g : ms.generators)
    if (!g.coeff(Monomial::var(Var::l)).is_zero()) has_unit_l = true;
  if (!has_unit_l) throw TwofoldError("no minor has a nonzero linear coefficient in l");
  TwofoldAlgebra T;
  T.algebra = local_algebra(ms.generators, ms.variables(), cap);
  if (T.algebra.result.verdict != Verdict::Isolated)
    throw TwofoldError("local algebra is not finite within degree cap " + std::to_string(cap));
  for (const auto& m : T.algebra.result.basis)
    if (m[idx(Var::l)] > 0) throw TwofoldError("standard basis contains " + m.str() + ", which involves l");
  T.basis = T.algebra.result.basis;
  T.lambda_relation = T.algebra.normal_form(var(Var::l));
  return T;
}

}  // namespace weylbound
