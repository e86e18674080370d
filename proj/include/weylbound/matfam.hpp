#pragma once

// Polynomial matrix families H(p) with exact coefficients, their symmetry
// classes, numeric and exact evaluation, and the built-in families.

#include "weylbound/poly.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylbound {

enum class SymmetryClass { general, hermitian, symmetric, diagonal };

inline std::string to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::general: return "general";
    case SymmetryClass::hermitian: return "hermitian";
    case SymmetryClass::symmetric: return "symmetric";
    case SymmetryClass::diagonal: return "diagonal";
  }
  return "general";
}

inline SymmetryClass symmetry_class_from_string(const std::string& s) {
  if (s == "general") return SymmetryClass::general;
  if (s == "hermitian") return SymmetryClass::hermitian;
  if (s == "symmetric") return SymmetryClass::symmetric;
  if (s == "diagonal") return SymmetryClass::diagonal;
  throw std::invalid_argument("unknown symmetry class '" + s + "'");
}

/// Codimension of the degeneracy locus for the class: 4 hermitian, 2 real
/// symmetric, 1 diagonal. General complex matrices use the hermitian value
/// only for bookkeeping; they have no real degeneracy theory here.
inline int class_codimension(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::symmetric: return 2;
    case SymmetryClass::diagonal: return 1;
    default: return 3;
  }
}

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class FamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MatrixFamily {
  int n = 0;
  int arity = 0;
  SymmetryClass cls = SymmetryClass::general;
  std::vector<Poly> entries;  // row-major n*n
  std::string name;

  const Poly& at(int i, int j) const { return entries[static_cast<std::size_t>(i * n + j)]; }
  Poly& at(int i, int j) { return entries[static_cast<std::size_t>(i * n + j)]; }

  /// Parameter variables in order (x), (x, y) or (x, y, z).
  std::vector<Var> params() const {
    std::vector<Var> v;
    for (int i = 0; i < arity; ++i) v.push_back(static_cast<Var>(i));
    return v;
  }
  bool uses_t() const {
    for (const auto& e : entries)
      if (e.uses(Var::t)) return true;
    return false;
  }
  /// True when some coefficient carries a square root.
  bool algebraic() const {
    for (const auto& e : entries)
      for (const auto& [m, c] : e.terms())
        if (!c.is_gaussian_rational()) return true;
    return false;
  }
  int max_degree() const {
    int d = 0;
    for (const auto& e : entries) d = std::max(d, e.degree());
    return d;
  }
};

/// Throws FamilyError if `f` violates its declared class or variable usage.
inline void validate(const MatrixFamily& f) {
  if (f.n < 1) throw FamilyError("family size must be positive");
  if (f.arity < 1 || f.arity > 3) throw FamilyError("arity must be 1, 2 or 3");
  if (f.entries.size() != static_cast<std::size_t>(f.n * f.n))
    throw FamilyError("expected " + std::to_string(f.n * f.n) + " entries, got " + std::to_string(f.entries.size()));
  unsigned allowed = (1u << idx(Var::t));
  for (int i = 0; i < f.arity; ++i) allowed |= 1u << i;
  for (int i = 0; i < f.n; ++i) {
    for (int j = 0; j < f.n; ++j) {
      const Poly& e = f.at(i, j);
      std::string where = "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (e.support() & ~allowed) throw FamilyError(where + " uses a variable outside the parameters and t");
      switch (f.cls) {
        case SymmetryClass::general: break;
        case SymmetryClass::hermitian:
          if (f.at(j, i) != e.conj()) throw FamilyError(where + " breaks hermitian symmetry");
          break;
        case SymmetryClass::symmetric:
          if (f.at(j, i) != e) throw FamilyError(where + " breaks symmetry");
          if (e.conj() != e) throw FamilyError(where + " has a non-real coefficient");
          break;
        case SymmetryClass::diagonal:
          if (i != j && !e.is_zero_poly()) throw FamilyError(where + " is off-diagonal and nonzero");
          if (e.conj() != e) throw FamilyError(where + " has a non-real coefficient");
          break;
      }
    }
  }
}

inline MatrixFamily make_family(SymmetryClass cls, int arity, int n, std::vector<Poly> entries, std::string name = {}) {
  MatrixFamily f;
  f.n = n;
  f.arity = arity;
  f.cls = cls;
  f.entries = std::move(entries);
  f.name = std::move(name);
  validate(f);
  return f;
}

/// Parse a family from entry strings (row-major rows).
inline MatrixFamily family_from_strings(SymmetryClass cls, int arity, const std::vector<std::vector<std::string>>& rows,
                                        std::string name = {}) {
  int n = static_cast<int>(rows.size());
  std::vector<Poly> entries;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw FamilyError("row " + std::to_string(i) + " has " + std::to_string(rows[static_cast<std::size_t>(i)].size()) +
                        " entries, expected " + std::to_string(n));
    for (int j = 0; j < n; ++j) {
      try {
        entries.push_back(parse_poly(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
      } catch (const ParseError& e) {
        throw FamilyError("entry (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what());
      }
    }
  }
  return make_family(cls, arity, n, std::move(entries), std::move(name));
}

inline std::vector<std::vector<std::string>> family_to_strings(const MatrixFamily& f) {
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(f.n));
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) rows[static_cast<std::size_t>(i)].push_back(f.at(i, j).str());
  return rows;
}

/// Numeric value at parameter point p (length arity) and perturbation t.
inline CMatrix evaluate(const MatrixFamily& f, const std::vector<std::complex<double>>& p, std::complex<double> t = 0.0) {
  if (static_cast<int>(p.size()) != f.arity) throw std::invalid_argument("evaluate: point has wrong dimension");
  std::array<std::complex<double>, kNumVars> pt{};
  for (int i = 0; i < f.arity; ++i) pt[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
  pt[static_cast<std::size_t>(idx(Var::t))] = t;
  CMatrix m(f.n, f.n);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) m(i, j) = f.at(i, j).eval(pt);
  return m;
}

inline CMatrix evaluate(const MatrixFamily& f, const std::vector<double>& p, double t = 0.0) {
  std::vector<std::complex<double>> q(p.begin(), p.end());
  return evaluate(f, q, t);
}

/// Exact value (row-major) at a point with exact coordinates.
inline std::vector<Scalar> evaluate_exact(const MatrixFamily& f, const std::vector<Scalar>& p, const Scalar& t = Scalar()) {
  if (static_cast<int>(p.size()) != f.arity) throw std::invalid_argument("evaluate_exact: point has wrong dimension");
  auto images = Poly::identity_images();
  for (int i = 0; i < f.arity; ++i) images[static_cast<std::size_t>(i)] = Poly(p[static_cast<std::size_t>(i)]);
  images[static_cast<std::size_t>(idx(Var::t))] = Poly(t);
  std::vector<Scalar> out;
  out.reserve(f.entries.size());
  for (const auto& e : f.entries) out.push_back(e.substitute(images).constant_term());
  return out;
}

/// Family with t replaced by the exact value `t`.
inline MatrixFamily specialize_t(const MatrixFamily& f, const Scalar& t) {
  MatrixFamily g = f;
  for (auto& e : g.entries) e = e.substitute(Var::t, Poly(t));
  return g;
}

/// f + t * dir, one family in (params, t). `dir` must respect the class of f.
inline MatrixFamily perturb(const MatrixFamily& f, const MatrixFamily& dir) {
  if (dir.n != f.n) throw FamilyError("perturbation direction has a different size");
  MatrixFamily g = f;
  g.arity = std::max(f.arity, dir.arity);
  Poly t = var(Var::t);
  for (std::size_t k = 0; k < g.entries.size(); ++k) g.entries[k] += t * dir.entries[k];
  if (!f.name.empty()) g.name = f.name + "+t*" + (dir.name.empty() ? "dir" : dir.name);
  validate(g);
  return g;
}

/// Substitute p_i -> sum_j G[i][j] p_j (G is arity x arity).
inline MatrixFamily linear_change(const MatrixFamily& f, const std::vector<std::vector<Scalar>>& G) {
  auto images = Poly::identity_images();
  for (int i = 0; i < f.arity; ++i) {
    Poly img;
    for (int j = 0; j < f.arity; ++j)
      img += var(static_cast<Var>(j)).scaled(G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    images[static_cast<std::size_t>(i)] = img;
  }
  MatrixFamily g = f;
  for (auto& e : g.entries) e = e.substitute(images);
  validate(g);
  return g;
}

// ---------------------------------------------------------------------------
// Built-in families.

namespace presets {

/// x sigma_x + y sigma_y + z sigma_z.
inline MatrixFamily pauli() {
  return family_from_strings(SymmetryClass::hermitian, 3, {{"z", "x - i*y"}, {"x + i*y", "-z"}}, "pauli");
}

/// Spin-s matrices contracted with (x, y, z); twice_s = 2s >= 1. Rows are
/// indexed by S_z eigenvalue s, s-1, ..., -s.
inline MatrixFamily spin(int twice_s) {
  if (twice_s < 1) throw FamilyError("spin requires s >= 1/2");
  int k = twice_s + 1;
  std::vector<Poly> e(static_cast<std::size_t>(k * k));
  Poly x = var(Var::x), y = var(Var::y), z = var(Var::z);
  Poly iy = y.scaled(Scalar::i_unit());
  for (int r = 0; r < k; ++r) {
    int twice_a = twice_s - 2 * r;
    e[static_cast<std::size_t>(r * k + r)] = z.scaled(Scalar::rational(twice_a, 2));
    if (r + 1 < k) {
      int twice_b = twice_a - 2;  // column state with S_z = a - 1
      // <a|S_+|b> = sqrt(s(s+1) - b(b+1)) = sqrt(N)/2.
      long N = static_cast<long>(twice_s) * (twice_s + 2) - static_cast<long>(twice_b) * (twice_b + 2);
      Scalar c = Scalar::sqrt_of(static_cast<std::uint64_t>(N)) * Scalar::rational(1, 4);
      e[static_cast<std::size_t>(r * k + r + 1)] = (x - iy).scaled(c);
      e[static_cast<std::size_t>((r + 1) * k + r)] = (x + iy).scaled(c);
    }
  }
  return make_family(SymmetryClass::hermitian, 3, k, std::move(e), "spin-" + std::to_string(twice_s) + "/2");
}

/// Rescaled spin-1 family with unit off-diagonal couplings.
inline MatrixFamily spin1_scaled() {
  return family_from_strings(SymmetryClass::hermitian, 3,
                             {{"z", "x - i*y", "0"}, {"x + i*y", "0", "x - i*y"}, {"0", "x + i*y", "-z"}},
                             "spin1-scaled");
}

/// Constant hermitian perturbation direction [[0,1,0],[1,0,-1],[0,-1,0]].
inline MatrixFamily perturbation_constant() {
  return family_from_strings(SymmetryClass::hermitian, 3, {{"0", "1", "0"}, {"1", "0", "-1"}, {"0", "-1", "0"}},
                             "perturbation-constant");
}

/// Perturbation direction [[0,0,1],[0,-1+t^2-2z,0],[1,0,0]].
inline MatrixFamily perturbation_quadratic() {
  return family_from_strings(SymmetryClass::hermitian, 3, {{"0", "0", "1"}, {"0", "-1 + t^2 - 2*z", "0"}, {"1", "0", "0"}},
                             "perturbation-quadratic");
}

/// 2x2 family with a quadratic contact in x: [[z, x^2 - i y], [x^2 + i y, -z]].
inline MatrixFamily pauli_quadratic() {
  return family_from_strings(SymmetryClass::hermitian, 3, {{"z", "x^2 - i*y"}, {"x^2 + i*y", "-z"}}, "pauli-quadratic");
}

/// Real symmetric example [[2, x, y], [x, 0, 0], [y, 0, 0]] with a double
/// eigenvalue 0 at the origin.
inline MatrixFamily symmetric_example() {
  return family_from_strings(SymmetryClass::symmetric, 2, {{"2", "x", "y"}, {"x", "0", "0"}, {"y", "0", "0"}},
                             "symmetric-example");
}

/// diag(a_1 x, ..., a_k x).
inline MatrixFamily diagonal_linear(const std::vector<Rational>& slopes) {
  int k = static_cast<int>(slopes.size());
  std::vector<Poly> e(static_cast<std::size_t>(k * k));
  for (int i = 0; i < k; ++i)
    e[static_cast<std::size_t>(i * k + i)] = var(Var::x).scaled(Scalar(slopes[static_cast<std::size_t>(i)]));
  return make_family(SymmetryClass::diagonal, 1, k, std::move(e), "diagonal");
}

/// x A + y B for real symmetric A, B.
inline MatrixFamily symmetric_linear(const std::vector<std::vector<Rational>>& A,
                                     const std::vector<std::vector<Rational>>& B) {
  int k = static_cast<int>(A.size());
  std::vector<Poly> e(static_cast<std::size_t>(k * k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      e[static_cast<std::size_t>(i * k + j)] =
          var(Var::x).scaled(Scalar(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])) +
          var(Var::y).scaled(Scalar(B[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
  return make_family(SymmetryClass::symmetric, 2, k, std::move(e), "symmetric-linear");
}

namespace detail {

using SMat = std::vector<Scalar>;  // row-major 2x2 or 4x4

inline SMat pauli_matrix(int which) {
  Scalar I = Scalar::i_unit();
  switch (which) {
    case 0: return {1, 0, 0, 1};
    case 1: return {0, 1, 1, 0};
    case 2: return {0, -I, I, 0};
    default: return {1, 0, 0, -1};
  }
}

/// sigma_a (outer) tensor tau_b (inner).
inline SMat kron(const SMat& a, const SMat& b) {
  SMat out(16);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out[static_cast<std::size_t>((2 * i + k) * 4 + 2 * j + l)] =
              a[static_cast<std::size_t>(i * 2 + j)] * b[static_cast<std::size_t>(k * 2 + l)];
  return out;
}

}  // namespace detail

/// Four-band k.p family of a spin-3/2 fourfold crossing, parametrized by
/// (alpha0, alpha1, alpha2). Pauli sigma acts on the outer factor.
inline MatrixFamily band(const Scalar& a0, const Scalar& a1, const Scalar& a2) {
  using detail::kron;
  using detail::pauli_matrix;
  auto s = [](int w) { return pauli_matrix(w); };
  Scalar r3 = Scalar::sqrt_of(3);
  std::vector<Poly> e(16);
  auto add = [&](const detail::SMat& m, const Scalar& c, Var v) {
    for (std::size_t q = 0; q < 16; ++q)
      if (!m[q].is_zero()) e[q] += var(v).scaled(m[q] * c);
  };
  // alpha0 block
  add(kron(s(1), s(3)), a0 * 2, Var::x);
  add(kron(s(1), s(0)), -a0 * r3, Var::y);
  add(kron(s(2), s(0)), -a0, Var::y);
  add(kron(s(1), s(1)), a0, Var::z);
  add(kron(s(2), s(1)), a0 * r3, Var::z);
  // alpha1 block
  add(kron(s(2), s(3)), -a1 * 2, Var::x);
  add(kron(s(1), s(0)), -a1, Var::y);
  add(kron(s(2), s(0)), a1 * r3, Var::y);
  add(kron(s(1), s(1)), a1 * r3, Var::z);
  add(kron(s(2), s(1)), -a1, Var::z);
  // alpha2 block
  add(kron(s(3), s(1)), a2 * 2, Var::x);
  add(kron(s(0), s(2)), a2 * 2, Var::y);
  add(kron(s(3), s(3)), a2 * 2, Var::z);
  return make_family(SymmetryClass::hermitian, 3, 4, std::move(e),
                     "band(" + a0.str() + "," + a1.str() + "," + a2.str() + ")");
}

}  // namespace presets

/// Spin-s family x S_x + y S_y + z S_z for s = twice_s / 2.
inline MatrixFamily build_spin_family(int twice_s) { return presets::spin(twice_s); }

inline MatrixFamily build_spin1_scaled() { return presets::spin1_scaled(); }

inline MatrixFamily build_band_family(const Rational& a0, const Rational& a1, const Rational& a2) {
  return presets::band(Scalar(a0), Scalar(a1), Scalar(a2));
}

/// Repeated slopes make the crossing at the origin non-isolated, so they are rejected.
inline MatrixFamily build_diagonal_linear(const std::vector<Rational>& slopes) {
  for (std::size_t i = 0; i < slopes.size(); ++i)
    for (std::size_t j = i + 1; j < slopes.size(); ++j)
      if (slopes[i] == slopes[j])
        throw FamilyError("repeated slope " + slopes[i].get_str() + ": the degeneracy at the origin is not isolated");
  return presets::diagonal_linear(slopes);
}

inline MatrixFamily build_symmetric_linear(const std::vector<std::vector<Rational>>& A,
                                           const std::vector<std::vector<Rational>>& B) {
  std::size_t k = A.size();
  if (B.size() != k) throw FamilyError("A and B must have the same size");
  for (std::size_t i = 0; i < k; ++i) {
    if (A[i].size() != k || B[i].size() != k) throw FamilyError("A and B must be square");
    for (std::size_t j = 0; j < i; ++j)
      if (A[i][j] != A[j][i] || B[i][j] != B[j][i]) throw FamilyError("A and B must be symmetric");
  }
  return presets::symmetric_linear(A, B);
}

}  // namespace weylbound
