#pragma once

// Independent reference computations used to freeze expected values in the
// tests. Nothing here calls the algorithm under test.

#include "weylbound/weylbound.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using namespace weylbound;

/// Determinant of a square matrix of polynomials by the Leibniz formula.
inline Poly leibniz_det(const std::vector<std::vector<Poly>>& A) {
  std::size_t n = A.size();
  if (n == 0) return Poly(Scalar(1));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Poly det;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    Poly term(Scalar(inversions % 2 ? -1 : 1));
    for (std::size_t i = 0; i < n; ++i) term = term * A[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// Unsigned minor M_ij (row i and column j deleted) of the family entries.
inline Poly minor(const MatrixFamily& f, int i, int j) {
  std::vector<std::vector<Poly>> sub;
  for (int r = 0; r < f.n; ++r) {
    if (r == i) continue;
    std::vector<Poly> row;
    for (int c = 0; c < f.n; ++c)
      if (c != j) row.push_back(f.at(r, c));
    sub.push_back(std::move(row));
  }
  return leibniz_det(sub);
}

/// Number of monomials in `vars` of degree <= maxdeg not divisible by any of
/// `gens`: the quotient dimension of a monomial ideal, when finite.
inline long monomial_quotient_dim(const std::vector<Monomial>& gens, const std::vector<Var>& vars, int maxdeg) {
  long count = 0;
  for (int d = 0; d <= maxdeg; ++d)
    for (const auto& m : monomials_of_degree(vars, d)) {
      bool divisible = false;
      for (const auto& g : gens) {
        bool div = true;
        for (int v = 0; v < kNumVars; ++v) div = div && g[v] <= m[v];
        divisible = divisible || div;
      }
      count += !divisible;
    }
  return count;
}

/// Coefficients of numerator(s) / (1 - s)^r up to degree `top`, by repeated
/// prefix summation (each division by 1 - s is a running sum).
inline std::vector<long long> series_over_power(std::vector<long long> numerator, int r, int top) {
  numerator.resize(static_cast<std::size_t>(top + 1), 0);
  for (int q = 0; q < r; ++q)
    for (int d = 1; d <= top; ++d) numerator[static_cast<std::size_t>(d)] += numerator[static_cast<std::size_t>(d - 1)];
  return numerator;
}

/// Hilbert function of the generic hermitian quotient from the numerator of
/// its Hilbert series over a four-variable ring.
inline std::vector<long long> gn_series(long long k, int top) {
  std::vector<long long> num(static_cast<std::size_t>(2 * k + 1), 0);
  num[0] += 1;
  num[static_cast<std::size_t>(k - 1)] -= k * k;
  num[static_cast<std::size_t>(k)] += 2 * k * k - 2;
  num[static_cast<std::size_t>(k + 1)] -= k * k;
  num[static_cast<std::size_t>(2 * k)] += 1;
  return series_over_power(num, 4, top);
}

/// Same for the generic real symmetric quotient over a three-variable ring.
inline std::vector<long long> jozefiak_series(long long k, int top) {
  std::vector<long long> num(static_cast<std::size_t>(k + 2), 0);
  num[0] += 1;
  num[static_cast<std::size_t>(k - 1)] -= k * (k + 1) / 2;
  num[static_cast<std::size_t>(k)] += k * k - 1;
  num[static_cast<std::size_t>(k + 1)] -= k * (k - 1) / 2;
  return series_over_power(num, 3, top);
}

/// sum_j |c_1 + ... + c_j| over j < size, by explicit nested loops.
inline long long partial_sum_bound(const std::vector<long long>& c) {
  long long total = 0;
  for (std::size_t j = 0; j + 1 < c.size(); ++j) {
    long long s = 0;
    for (std::size_t i = 0; i <= j; ++i) s += c[i];
    total += s < 0 ? -s : s;
  }
  return total;
}

/// Eigenvalues from the general complex eigensolver, sorted by real part.
inline std::vector<std::complex<double>> dense_eigenvalues(const CMatrix& A) {
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  std::vector<std::complex<double>> v(es.eigenvalues().data(), es.eigenvalues().data() + A.rows());
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() < b.real(); });
  return v;
}

// ---------------------------------------------------------------------------
// Random inputs.

inline Rational random_rational(std::mt19937_64& rng, int num = 5, int den = 4) {
  std::uniform_int_distribution<int> N(-num, num), D(1, den);
  Rational q(N(rng), D(rng));
  q.canonicalize();
  return q;
}

inline Scalar random_entry(std::mt19937_64& rng, bool complex) {
  return Scalar(GaussianRational(random_rational(rng), complex ? random_rational(rng) : Rational(0)));
}

/// Random matrix of class `cls` with exact small rational entries.
inline std::vector<Scalar> random_matrix(SymmetryClass cls, int n, std::mt19937_64& rng) {
  std::vector<Scalar> m(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> Scalar& { return m[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (cls == SymmetryClass::general) at(i, j) = random_entry(rng, true);
      else if (i == j) at(i, j) = random_entry(rng, false);
      else if (cls == SymmetryClass::diagonal || j < i) continue;
      else at(i, j) = random_entry(rng, cls == SymmetryClass::hermitian);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (cls != SymmetryClass::general && cls != SymmetryClass::diagonal) at(i, j) = conj(at(j, i));
  return m;
}

/// Linear family sum_p x_p A_p with random A_p of class `cls` and the
/// class's natural arity (3, 2, 1; general uses 3).
inline MatrixFamily random_linear_family(SymmetryClass cls, int n, std::mt19937_64& rng) {
  int arity = class_codimension(cls);
  std::vector<Poly> e(static_cast<std::size_t>(n * n));
  for (int p = 0; p < arity; ++p) {
    auto A = random_matrix(cls, n, rng);
    for (std::size_t q = 0; q < e.size(); ++q) e[q] += var(static_cast<Var>(p)).scaled(A[q]);
  }
  return make_family(cls, arity, n, std::move(e), "random-linear");
}

/// Random general family with entries of degree <= 2 in (x, y, z).
inline MatrixFamily random_poly_family(int n, std::mt19937_64& rng) {
  std::vector<Var> vars = {Var::x, Var::y, Var::z};
  std::vector<Poly> e;
  std::uniform_int_distribution<int> keep(0, 2);
  for (int q = 0; q < n * n; ++q) {
    Poly p;
    for (int d = 0; d <= 2; ++d)
      for (const auto& m : monomials_of_degree(vars, d))
        if (keep(rng) == 0) p += Poly::term(random_entry(rng, true), m);
    e.push_back(std::move(p));
  }
  return make_family(SymmetryClass::general, 3, n, std::move(e), "random-poly");
}

/// Random invertible rational arity x arity matrix.
inline std::vector<std::vector<Scalar>> random_invertible(int m, std::mt19937_64& rng) {
  for (;;) {
    std::vector<std::vector<Scalar>> G(static_cast<std::size_t>(m), std::vector<Scalar>(static_cast<std::size_t>(m)));
    std::vector<std::vector<Poly>> P(static_cast<std::size_t>(m), std::vector<Poly>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Scalar(random_rational(rng));
        P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Poly(G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      }
    if (!leibniz_det(P).is_zero_poly()) return G;
  }
}

}  // namespace oracle
