#pragma once

// Floating-point helpers shared by the numeric modules: hermitian
// eigendecompositions and compiled polynomials with gradients.

#include "weylbound/matfam.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace weylbound {

using cd = std::complex<double>;

struct HermitianEig {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // columns match values
};

inline HermitianEig hermitian_eig(const CMatrix& H) {
  CMatrix Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Hs);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& H) {
  CMatrix Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Hs, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Polynomial flattened for repeated numeric evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const NumPoly& p) {
    for (const auto& [m, c] : p.terms()) {
      terms_.push_back({c, m});
      for (int i = 0; i < kNumVars; ++i) max_exp_ = std::max(max_exp_, m[i]);
    }
  }
  explicit CompiledPoly(const Poly& p) : CompiledPoly(to_numeric(p)) {}

  cd value(const std::array<cd, kNumVars>& pt) const {
    cd s = 0.0;
    for (const auto& t : terms_) {
      cd v = t.c;
      for (int i = 0; i < kNumVars; ++i)
        for (int k = 0; k < t.m[i]; ++k) v *= pt[static_cast<std::size_t>(i)];
      s += v;
    }
    return s;
  }

  /// Value and partial derivatives with respect to `vars`.
  cd value_grad(const std::array<cd, kNumVars>& pt, const std::vector<Var>& vars, cd* grad) const {
    cd s = 0.0;
    for (std::size_t j = 0; j < vars.size(); ++j) grad[j] = 0.0;
    for (const auto& t : terms_) {
      cd v = t.c;
      for (int i = 0; i < kNumVars; ++i)
        for (int k = 0; k < t.m[i]; ++k) v *= pt[static_cast<std::size_t>(i)];
      s += v;
      for (std::size_t j = 0; j < vars.size(); ++j) {
        int vi = idx(vars[j]);
        int e = t.m[vi];
        if (e == 0) continue;
        cd d = t.c * static_cast<double>(e);
        for (int i = 0; i < kNumVars; ++i) {
          int ei = (i == vi) ? e - 1 : t.m[i];
          for (int k = 0; k < ei; ++k) d *= pt[static_cast<std::size_t>(i)];
        }
        grad[j] += d;
      }
    }
    return s;
  }

 private:
  struct Term {
    cd c;
    Monomial m;
  };
  std::vector<Term> terms_;
  int max_exp_ = 0;
};

/// Point (x, y, z, l, t) from parameter coordinates, l and t.
inline std::array<cd, kNumVars> make_point(const std::vector<cd>& params, cd l, cd t) {
  std::array<cd, kNumVars> pt{};
  for (std::size_t i = 0; i < params.size() && i < 3; ++i) pt[i] = params[i];
  pt[static_cast<std::size_t>(idx(Var::l))] = l;
  pt[static_cast<std::size_t>(idx(Var::t))] = t;
  return pt;
}

/// Radical inverse of `index` in the given base (van der Corput).
inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

inline constexpr std::array<unsigned, 8> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace weylbound
