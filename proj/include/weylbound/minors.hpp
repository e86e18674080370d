#pragma once

// Minor ideal of a lifted family f - (l + lambda0) I: the (n-1)x(n-1) minors,
// deduplicated by symmetry class, their realification for hermitian input,
// and the cofactor identities that tie them together.

#include "weylbound/matfam.hpp"

#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace weylbound {

/// f - (l + lambda0) I. Keeps n, arity and class of f.
inline MatrixFamily lift(const MatrixFamily& f, const Scalar& lambda0) {
  MatrixFamily g = f;
  Poly shift = var(Var::l) + Poly(lambda0);
  for (int i = 0; i < f.n; ++i) g.at(i, i) -= shift;
  if (!f.name.empty()) g.name = f.name + " lifted";
  return g;
}

struct EigenvalueCheck {
  bool is_eigenvalue = false;  // det(f(0) - lambda0 I) == 0 exactly
  double distance = 0.0;       // distance to the nearest numeric eigenvalue of f(0)
};

/// Checks that lambda0 is an eigenvalue of f at the origin (t = 0).
inline EigenvalueCheck check_base_eigenvalue(const MatrixFamily& f, const Scalar& lambda0);

namespace detail {

/// Determinant of the submatrix on rows `rows[start..]` and columns in `colmask`,
/// by Laplace expansion along the first row, memoized on the column mask.
template <class Entry>
Poly laplace_det(const Entry& entry, const std::vector<int>& rows, std::size_t start, unsigned colmask, int n,
                 std::unordered_map<unsigned, Poly>& memo) {
  if (start == rows.size()) return Poly(Scalar(1));
  auto it = memo.find(colmask);
  if (it != memo.end()) return it->second;
  Poly acc;
  int sign_pos = 0;
  for (int c = 0; c < n; ++c) {
    if (!(colmask & (1u << c))) continue;
    const Poly& a = entry(rows[start], c);
    if (!a.is_zero_poly()) {
      Poly sub = laplace_det(entry, rows, start + 1, colmask & ~(1u << c), n, memo);
      if (!sub.is_zero_poly()) {
        Poly term = a * sub;
        if (sign_pos % 2 == 0)
          acc += term;
        else
          acc -= term;
      }
    }
    ++sign_pos;
  }
  memo.emplace(colmask, acc);
  return acc;
}

}  // namespace detail

/// Full (n-1)x(n-1) minor table M[i][j] = det of f with row i and column j
/// deleted (unsigned). Entry [i][j] is only computed if want(i, j).
template <class Want>
std::vector<std::vector<Poly>> minor_table(const MatrixFamily& f, Want want) {
  int n = f.n;
  std::vector<std::vector<Poly>> M(static_cast<std::size_t>(n), std::vector<Poly>(static_cast<std::size_t>(n)));
  if (n == 1) {
    M[0][0] = Poly(Scalar(1));
    return M;
  }
  auto entry = [&](int i, int j) -> const Poly& { return f.at(i, j); };
  unsigned full = (n == 32) ? ~0u : ((1u << n) - 1u);
  for (int i = 0; i < n; ++i) {
    std::vector<int> rows;
    for (int r = 0; r < n; ++r)
      if (r != i) rows.push_back(r);
    std::unordered_map<unsigned, Poly> memo;
    for (int j = 0; j < n; ++j)
      if (want(i, j))
        M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            detail::laplace_det(entry, rows, 0, full & ~(1u << j), n, memo);
  }
  return M;
}

inline std::vector<std::vector<Poly>> minor_table(const MatrixFamily& f) {
  return minor_table(f, [](int, int) { return true; });
}

/// Determinant by Laplace expansion.
inline Poly determinant(const MatrixFamily& f) {
  std::vector<int> rows;
  for (int r = 0; r < f.n; ++r) rows.push_back(r);
  std::unordered_map<unsigned, Poly> memo;
  auto entry = [&](int i, int j) -> const Poly& { return f.at(i, j); };
  return detail::laplace_det(entry, rows, 0, (1u << f.n) - 1u, f.n, memo);
}

struct MinorSystem {
  MatrixFamily base;                          // unlifted family
  Scalar lambda0;
  std::vector<Poly> generators;               // minors of the lifted family
  std::vector<std::pair<int, int>> labels;    // (row, col) deleted, 0-based
  std::optional<std::vector<Poly>> realified; // real-coefficient generators, hermitian input only

  /// Variables of the local ring: the parameters followed by l.
  std::vector<Var> variables() const {
    auto v = base.params();
    v.push_back(Var::l);
    return v;
  }
};

/// Generators of the minor ideal of f - (l + lambda0) I. General and
/// hermitian: all n^2 minors. Symmetric: i <= j. Diagonal: M_ii only.
inline MinorSystem minor_ideal(const MatrixFamily& f, const Scalar& lambda0) {
  MinorSystem ms;
  ms.base = f;
  ms.lambda0 = lambda0;
  MatrixFamily g = lift(f, lambda0);
  auto want = [&](int i, int j) {
    switch (f.cls) {
      case SymmetryClass::symmetric: return i <= j;
      case SymmetryClass::diagonal: return i == j;
      default: return true;
    }
  };
  auto M = minor_table(g, want);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j)
      if (want(i, j)) {
        ms.generators.push_back(M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        ms.labels.emplace_back(i, j);
      }
  return ms;
}

/// Real-coefficient generators spanning the same ideal: for i < j the pair
/// m_ij + m_ji and i (m_ij - m_ji), diagonal minors unchanged. Requires a
/// hermitian, real-symmetric or diagonal family and a real lambda0.
inline MinorSystem realify(MinorSystem ms) {
  if (ms.base.cls == SymmetryClass::general) throw FamilyError("realify: family is not hermitian");
  if (!ms.lambda0.is_real()) throw FamilyError("realify: lambda0 is not real");
  int n = ms.base.n;
  if (ms.base.cls != SymmetryClass::hermitian) {
    ms.realified = ms.generators;
    return ms;
  }
  std::vector<std::vector<const Poly*>> at(static_cast<std::size_t>(n), std::vector<const Poly*>(static_cast<std::size_t>(n)));
  for (std::size_t k = 0; k < ms.labels.size(); ++k)
    at[static_cast<std::size_t>(ms.labels[k].first)][static_cast<std::size_t>(ms.labels[k].second)] = &ms.generators[k];
  std::vector<Poly> out;
  Scalar I = Scalar::i_unit();
  for (int i = 0; i < n; ++i) {
    const Poly& d = *at[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    if (d.conj() != d) throw FamilyError("realify: diagonal minor has a non-real coefficient");
    out.push_back(d);
    for (int j = i + 1; j < n; ++j) {
      const Poly& a = *at[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const Poly& b = *at[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      out.push_back(a + b);
      out.push_back((a - b).scaled(I));
    }
  }
  ms.realified = std::move(out);
  return ms;
}

struct CofactorReport {
  std::size_t checked = 0;
  bool all_zero = true;
  std::optional<std::string> first_failure;
};

/// Checks the 2(n^2 - 1) linear cofactor relations among the minors of f:
/// off-diagonal row and column expansions (zero for i != j) and the
/// differences of consecutive diagonal expansions (all equal det f).
inline CofactorReport check_cofactor_identities(const MatrixFamily& f) {
  int n = f.n;
  auto M = minor_table(f);
  auto sgn = [](int a) { return a % 2 == 0 ? 1 : -1; };
  auto m = [&](int i, int j) -> const Poly& { return M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  auto row_exp = [&](int i, int j) {  // sum_l (-1)^{j+l} f_il M_jl
    Poly s;
    for (int l = 0; l < n; ++l) s += (f.at(i, l) * m(j, l)).scaled(Scalar(sgn(j + l)));
    return s;
  };
  auto col_exp = [&](int i, int j) {  // sum_l (-1)^{j+l} f_li M_lj
    Poly s;
    for (int l = 0; l < n; ++l) s += (f.at(l, i) * m(l, j)).scaled(Scalar(sgn(j + l)));
    return s;
  };
  CofactorReport rep;
  auto record = [&](const Poly& p, const std::string& what) {
    ++rep.checked;
    if (!p.is_zero_poly() && rep.all_zero) {
      rep.all_zero = false;
      rep.first_failure = what;
    }
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        record(row_exp(i, j), "row relation " + tag);
        record(col_exp(i, j), "column relation " + tag);
      }
  for (int i = 0; i + 1 < n; ++i) {
    std::string tag = "(" + std::to_string(i) + "," + std::to_string(i + 1) + ")";
    record(row_exp(i, i) - row_exp(i + 1, i + 1), "row determinant relation " + tag);
    record(col_exp(i, i) - col_exp(i + 1, i + 1), "column determinant relation " + tag);
  }
  return rep;
}

inline EigenvalueCheck check_base_eigenvalue(const MatrixFamily& f, const Scalar& lambda0) {
  EigenvalueCheck out;
  MatrixFamily g = specialize_t(f, Scalar());
  std::vector<Scalar> zero(static_cast<std::size_t>(f.arity));
  auto vals = evaluate_exact(g, zero);
  MatrixFamily c;
  c.n = f.n;
  c.arity = f.arity;
  c.cls = SymmetryClass::general;
  for (auto& v : vals) c.entries.emplace_back(v);
  out.is_eigenvalue = determinant(lift(c, lambda0)).substitute(Var::l, Poly()).is_zero_poly();
  CMatrix A(f.n, f.n);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) A(i, j) = vals[static_cast<std::size_t>(i * f.n + j)].to_complex();
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < f.n; ++k) best = std::min(best, std::abs(es.eigenvalues()(k) - lambda0.to_complex()));
  out.distance = best;
  return out;
}

/// Multiplicity of lambda0 as a root of the characteristic polynomial of f(0).
inline int algebraic_multiplicity_at_origin(const MatrixFamily& f, const Scalar& lambda0) {
  MatrixFamily g = specialize_t(f, Scalar());
  std::vector<Scalar> zero(static_cast<std::size_t>(f.arity));
  auto vals = evaluate_exact(g, zero);
  MatrixFamily c;
  c.n = f.n;
  c.arity = f.arity;
  c.cls = SymmetryClass::general;
  for (auto& v : vals) c.entries.emplace_back(v);
  Poly chi = determinant(lift(c, lambda0));  // univariate in l, root at l = 0
  return chi.order();
}

}  // namespace weylbound
