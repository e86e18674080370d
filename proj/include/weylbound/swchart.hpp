#pragma once

// Block diagonalization near a semisimple eigenvalue cluster:
//   A = G0 e^S (A0' + C + Aeff) e^{-S} G0^{-1},
// with A0' = diag(lambda0 I_k, A0~), S block off-diagonal, C supported on the
// complementary block and Aeff on the cluster block. S solves
// offdiag(e^{-S} B e^S) = 0 for B = G0^{-1} A G0 by Newton's method; the
// Jacobian is the Frechet derivative of exp from the block exponential
//   exp([[X, E], [0, X]]) = [[e^X, L(X, E)], [0, e^X]].
// effective_family() expands Aeff in the family parameters.

#include "weylbound/formulas.hpp"
#include "weylbound/matfam.hpp"
#include "weylbound/numeric.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylbound {

class SWError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SWOptions {
  double tol = 1e-10;          // reconstruction tolerance, relative to max(1, |A|)
  double cluster_tol = 1e-8;   // eigenvalue and rank thresholds, relative to max(1, |A0|)
  int max_iterations = 50;
};

struct SWDecomposition {
  int n = 0;
  int k = 0;  // cluster size
  cd lambda0 = 0.0;
  CMatrix G0, G0inv;
  CMatrix A0prime;  // diag(lambda0 I_k, A0~)
  CMatrix S;        // block off-diagonal
  CMatrix C;        // lower-right block only
  CMatrix Aeff;     // upper-left block only
  double residual = 0.0;
  int iterations = 0;
  bool unitary_frame = false;

  CMatrix reconstruct() const {
    return G0 * S.exp() * (A0prime + C + Aeff) * (-S).exp() * G0inv;
  }
  CMatrix cluster_block() const { return Aeff.topLeftCorner(k, k); }
};

namespace detail {

inline double max_abs(const CMatrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

/// Orthonormal basis of range(P) from Gram-Schmidt on P e_0, P e_1, ...
inline CMatrix canonical_basis(const CMatrix& P, int want) {
  int n = static_cast<int>(P.rows());
  CMatrix B(n, want);
  int got = 0;
  for (int i = 0; i < n && got < want; ++i) {
    CVector v = P.col(i);
    for (int j = 0; j < got; ++j) v -= B.col(j) * B.col(j).dot(v);
    for (int j = 0; j < got; ++j) v -= B.col(j) * B.col(j).dot(v);
    double nv = v.norm();
    if (nv > 1e-6) B.col(got++) = v / nv;
  }
  if (got != want) throw SWError("could not build a basis of the eigenspace");
  return B;
}

/// Frechet derivative of exp at X in direction E.
inline CMatrix expm_frechet(const CMatrix& X, const CMatrix& E) {
  auto n = X.rows();
  CMatrix big = CMatrix::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = X;
  big.bottomRightCorner(n, n) = X;
  big.topRightCorner(n, n) = E;
  CMatrix e = big.exp();
  return e.topRightCorner(n, n);
}

}  // namespace detail

inline SWDecomposition sw_decompose(const CMatrix& A0, cd lambda0, const CMatrix& A, const SWOptions& opt = {}) {
  using detail::max_abs;
  int n = static_cast<int>(A0.rows());
  if (A0.cols() != n || A.rows() != n || A.cols() != n) throw SWError("matrix sizes disagree");
  double scale0 = std::max(1.0, max_abs(A0));
  double thr = opt.cluster_tol * scale0;
  Eigen::ComplexEigenSolver<CMatrix> es(A0, false);
  int k_alg = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(es.eigenvalues()(i) - lambda0) <= thr) ++k_alg;
  if (k_alg == 0) throw SWError("lambda0 is not an eigenvalue of A0");
  CMatrix Bz = A0 - lambda0 * CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(Bz, Eigen::ComputeFullU | Eigen::ComputeFullV);
  int nullity = 0;
  for (int i = 0; i < n; ++i)
    if (svd.singularValues()(i) <= thr) ++nullity;
  if (nullity != k_alg)
    throw SWError("eigenvalue cluster is not semisimple (algebraic multiplicity " + std::to_string(k_alg) +
                  ", geometric " + std::to_string(nullity) + ")");
  int k = k_alg;
  SWDecomposition D;
  D.n = n;
  D.k = k;
  D.lambda0 = lambda0;
  bool herm = max_abs(A0 - A0.adjoint()) <= 1e-12 * scale0;
  if (k == n) {
    D.G0 = CMatrix::Identity(n, n);
    D.unitary_frame = true;
  } else if (herm) {
    Eigen::SelfAdjointEigenSolver<CMatrix> hs(0.5 * (A0 + A0.adjoint()));
    CMatrix Vc(n, k);
    int c = 0;
    for (int i = 0; i < n; ++i)
      if (std::abs(hs.eigenvalues()(i) - lambda0.real()) <= thr && c < k) Vc.col(c++) = hs.eigenvectors().col(i);
    CMatrix P = Vc * Vc.adjoint();
    CMatrix Q = CMatrix::Identity(n, n) - P;
    D.G0.resize(n, n);
    D.G0.leftCols(k) = detail::canonical_basis(P, k);
    D.G0.rightCols(n - k) = detail::canonical_basis(Q, n - k);
    D.unitary_frame = true;
  } else {
    const CMatrix& V = svd.matrixV();
    const CMatrix& U = svd.matrixU();
    D.G0.resize(n, n);
    D.G0.leftCols(k) = V.rightCols(k);      // kernel of A0 - lambda0
    D.G0.rightCols(n - k) = U.leftCols(n - k);  // range of A0 - lambda0
  }
  if (D.unitary_frame) {
    D.G0inv = D.G0.adjoint();
  } else {
    Eigen::FullPivLU<CMatrix> lu(D.G0);
    if (!lu.isInvertible()) throw SWError("kernel and range of A0 - lambda0 intersect");
    D.G0inv = lu.inverse();
  }
  CMatrix A0p = D.G0inv * A0 * D.G0;
  D.A0prime = CMatrix::Zero(n, n);
  D.A0prime.topLeftCorner(k, k) = lambda0 * CMatrix::Identity(k, k);
  D.A0prime.bottomRightCorner(n - k, n - k) = A0p.bottomRightCorner(n - k, n - k);

  CMatrix B = D.G0inv * A * D.G0;
  D.S = CMatrix::Zero(n, n);
  int m = n - k;
  int N = 2 * k * m;
  auto unpack = [&](const CVector& s) {
    CMatrix S = CMatrix::Zero(n, n);
    int q = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < m; ++j) S(i, k + j) = s(q++);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) S(k + i, j) = s(q++);
    return S;
  };
  auto pack = [&](const CMatrix& M) {
    CVector v(N);
    int q = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < m; ++j) v(q++) = M(i, k + j);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) v(q++) = M(k + i, j);
    return v;
  };
  double scaleA = std::max(1.0, max_abs(A));
  if (N > 0) {
    CVector s = CVector::Zero(N);
    auto residual = [&](const CVector& sv) {
      CMatrix S = unpack(sv);
      return pack((-S).exp() * B * S.exp());
    };
    CVector F = residual(s);
    int it = 0;
    for (; it < opt.max_iterations && max_abs(F) > 1e-15 * scaleA; ++it) {
      CMatrix S = unpack(s);
      CMatrix eS = S.exp(), emS = (-S).exp();
      CMatrix J(N, N);
      for (int q = 0; q < N; ++q) {
        CVector e = CVector::Zero(N);
        e(q) = 1.0;
        CMatrix E = unpack(e);
        CMatrix dM = -detail::expm_frechet(-S, E) * B * eS + emS * B * detail::expm_frechet(S, E);
        J.col(q) = pack(dM);
      }
      CVector d = J.fullPivLu().solve(-F);
      if (!d.allFinite()) throw SWError("singular Newton step");
      double fn = F.norm();
      double alpha = 1.0;
      CVector F2;
      for (int h = 0; h < 30; ++h, alpha *= 0.5) {
        F2 = residual(s + alpha * d);
        if (F2.norm() < fn) break;
      }
      if (!(F2.norm() < fn)) break;
      s += alpha * d;
      F = F2;
      if (max_abs(unpack(s)) > 1e3) throw SWError("generator diverged; perturbation too large for the chart");
    }
    D.iterations = it;
    D.S = unpack(s);
  }
  CMatrix M = (-D.S).exp() * B * D.S.exp();
  D.Aeff = CMatrix::Zero(n, n);
  D.Aeff.topLeftCorner(k, k) = M.topLeftCorner(k, k) - lambda0 * CMatrix::Identity(k, k);
  D.C = CMatrix::Zero(n, n);
  D.C.bottomRightCorner(m, m) = M.bottomRightCorner(m, m) - D.A0prime.bottomRightCorner(m, m);
  D.residual = max_abs(D.reconstruct() - A);
  if (D.residual > opt.tol * scaleA)
    throw SWError("reconstruction residual " + std::to_string(D.residual) + " exceeds tolerance");
  return D;
}

// ---------------------------------------------------------------------------
// Effective family: Taylor expansion of the cluster block of Aeff in the
// parameters of a family.

/// Generalized Gell-Mann basis with tr(T_a T_b) = 2 delta_ab; for k = 2 it is
/// (sigma_x, sigma_y, sigma_z).
inline std::vector<CMatrix> gell_mann_basis(int k) {
  std::vector<CMatrix> out;
  const cd I(0.0, 1.0);
  for (int j = 0; j < k; ++j)
    for (int l = j + 1; l < k; ++l) {
      CMatrix s = CMatrix::Zero(k, k), a = CMatrix::Zero(k, k);
      s(j, l) = s(l, j) = 1.0;
      a(j, l) = -I;
      a(l, j) = I;
      out.push_back(s);
      out.push_back(a);
    }
  for (int d = 1; d < k; ++d) {
    CMatrix g = CMatrix::Zero(k, k);
    double c = std::sqrt(2.0 / (d * (d + 1.0)));
    for (int i = 0; i < d; ++i) g(i, i) = c;
    g(d, d) = -c * d;
    out.push_back(g);
  }
  return out;
}

struct EffectiveFamilyOptions {
  int order = 2;
  double step = 1e-3;  // finite-difference step before Richardson extrapolation
  double t = 0.0;
  SWOptions sw;
};

struct EffectiveFamily {
  int k = 0;
  int order = 0;
  int arity = 0;
  CMatrix G0;
  std::vector<NumPoly> entries;  // k x k row-major
  NumPoly trace;                 // tr(Aeff)
  std::vector<NumPoly> h;        // components on gell_mann_basis(k)

  /// h with coefficients snapped to nearby rationals.
  std::vector<Poly> rational_h(double tol = 1e-6, long max_den = 1000) const {
    std::vector<Poly> out;
    for (const auto& p : h) out.push_back(rationalize(p, tol, max_den));
    return out;
  }
};

namespace detail {

inline long long factorial(int a) {
  long long f = 1;
  for (int i = 2; i <= a; ++i) f *= i;
  return f;
}

/// Nested central difference for the mixed partial d^alpha g(0), step h.
template <class Fn>
CMatrix central_derivative(const Fn& g, const std::vector<int>& alpha, double h) {
  int m = static_cast<int>(alpha.size());
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  CMatrix acc;
  bool first = true;
  for (;;) {
    double w = 1.0;
    std::vector<double> p(static_cast<std::size_t>(m));
    for (int v = 0; v < m; ++v) {
      int a = alpha[static_cast<std::size_t>(v)], j = idx[static_cast<std::size_t>(v)];
      w *= ((j % 2) ? -1.0 : 1.0) * static_cast<double>(binom(a, j)) / std::pow(h, a);
      p[static_cast<std::size_t>(v)] = (0.5 * a - j) * h;
    }
    CMatrix val = g(p);
    if (first) {
      acc = w * val;
      first = false;
    } else {
      acc += w * val;
    }
    int v = 0;
    while (v < m) {
      if (++idx[static_cast<std::size_t>(v)] <= alpha[static_cast<std::size_t>(v)]) break;
      idx[static_cast<std::size_t>(v)] = 0;
      ++v;
    }
    if (v == m) break;
  }
  return acc;
}

}  // namespace detail

/// Taylor expansion to `order` of the cluster block of Aeff(p) for the
/// decomposition of f(p) around f(0) at lambda0. First-order coefficients are
/// exact projections of the parameter derivatives; higher orders use nested
/// central differences with one Richardson step.
inline EffectiveFamily effective_family(const MatrixFamily& f, cd lambda0, const EffectiveFamilyOptions& opt = {}) {
  if (opt.order < 1) throw std::invalid_argument("effective_family: order must be >= 1");
  int m = f.arity;
  std::vector<double> zero(static_cast<std::size_t>(m), 0.0);
  CMatrix A0 = evaluate(f, zero, opt.t);
  SWDecomposition base = sw_decompose(A0, lambda0, A0, opt.sw);
  int k = base.k;
  EffectiveFamily E;
  E.k = k;
  E.order = opt.order;
  E.arity = m;
  E.G0 = base.G0;
  auto block = [&](const std::vector<double>& p) -> CMatrix {
    return sw_decompose(A0, lambda0, evaluate(f, p, opt.t), opt.sw).cluster_block();
  };
  std::map<Monomial, CMatrix, GrlexLess> coeffs;
  std::array<cd, kNumVars> origin{};
  origin[static_cast<std::size_t>(idx(Var::t))] = opt.t;
  for (int v = 0; v < m; ++v) {
    CMatrix Hv(f.n, f.n);
    for (int i = 0; i < f.n; ++i)
      for (int j = 0; j < f.n; ++j) Hv(i, j) = f.at(i, j).derivative(static_cast<Var>(v)).eval(origin);
    coeffs[Monomial::var(static_cast<Var>(v))] = (base.G0inv * Hv * base.G0).topLeftCorner(k, k);
  }
  for (int d = 2; d <= opt.order; ++d) {
    for (const auto& mono : monomials_of_degree(f.params(), d)) {
      std::vector<int> alpha(static_cast<std::size_t>(m));
      long long fact = 1;
      for (int v = 0; v < m; ++v) {
        alpha[static_cast<std::size_t>(v)] = mono[v];
        fact *= detail::factorial(mono[v]);
      }
      CMatrix Dh = detail::central_derivative(block, alpha, opt.step);
      CMatrix Dh2 = detail::central_derivative(block, alpha, 0.5 * opt.step);
      coeffs[mono] = (4.0 * Dh2 - Dh) / 3.0 / static_cast<double>(fact);
    }
  }
  E.entries.assign(static_cast<std::size_t>(k * k), NumPoly());
  for (const auto& [mono, C] : coeffs)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) E.entries[static_cast<std::size_t>(i * k + j)].add_term(mono, C(i, j));
  auto basis = gell_mann_basis(k);
  E.h.assign(basis.size(), NumPoly());
  for (const auto& [mono, C] : coeffs) {
    E.trace.add_term(mono, C.trace());
    for (std::size_t a = 0; a < basis.size(); ++a) E.h[a].add_term(mono, 0.5 * (basis[a] * C).trace());
  }
  return E;
}

}  // namespace weylbound
