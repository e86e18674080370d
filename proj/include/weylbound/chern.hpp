#pragma once

// First Chern numbers of isolated bands of a three-parameter hermitian family
// over a sphere, from gauge-invariant link variables on a (theta, phi) grid.
//
// Grid points sit at theta_i = (i + 1/2) pi / N, phi_j = 2 pi j / (2N). Every
// plaquette (i, j) -> (i+1, j) -> (i+1, j+1) -> (i, j+1) is counterclockwise
// about the outward normal; the two polar caps are the rings i = 0 (phi
// increasing) and i = N - 1 (phi decreasing). The lattice Berry flux of a
// plaquette is arg of the product of its link variables <u_a|u_b>, and the
// sum over the closed surface divided by 2 pi is an integer.

#include "weylbound/numeric.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylbound {

class GapClosure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChernConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChernOptions {
  int grid = 24;            // theta divisions; phi uses twice as many
  double gap_tol = 1e-9;    // relative to max(1, |H|)
  double t = 0.0;
  int max_doublings = 2;    // grid, 2 grid, 4 grid
};

struct ChernResult {
  std::array<double, 3> center{};
  double radius = 0.0;
  std::vector<int> bands;
  std::vector<long long> cherns;
  std::vector<double> raw;  // flux / 2 pi before rounding, at the accepted grid
  int grid_used = 0;
  double max_defect = 0.0;  // max |raw - round(raw)|
  double min_gap = 0.0;     // smallest gap around the requested bands on the grid
};

namespace detail {

inline std::vector<double> lattice_chern(const MatrixFamily& f, const std::array<double, 3>& c, double r,
                                         const std::vector<int>& bands, int N, const ChernOptions& opt,
                                         double& min_gap) {
  const double pi = std::numbers::pi;
  int M = 2 * N;
  int n = f.n;
  std::vector<CMatrix> vecs(static_cast<std::size_t>(N * M));
  min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < N; ++i) {
    double th = (i + 0.5) * pi / N;
    for (int j = 0; j < M; ++j) {
      double ph = 2.0 * pi * j / M;
      std::vector<double> p = {c[0] + r * std::sin(th) * std::cos(ph), c[1] + r * std::sin(th) * std::sin(ph),
                               c[2] + r * std::cos(th)};
      CMatrix H = evaluate(f, p, opt.t);
      HermitianEig e = hermitian_eig(H);
      double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
      for (int b : bands) {
        if (b > 0) min_gap = std::min(min_gap, e.values(b) - e.values(b - 1));
        if (b + 1 < n) min_gap = std::min(min_gap, e.values(b + 1) - e.values(b));
      }
      if (min_gap <= opt.gap_tol * scale)
        throw GapClosure("band gap closes on the sphere at theta=" + std::to_string(th) + " phi=" + std::to_string(ph));
      vecs[static_cast<std::size_t>(i * M + j)] = std::move(e.vectors);
    }
  }
  auto u = [&](int i, int j, int b) { return vecs[static_cast<std::size_t>(i * M + ((j % M) + M) % M)].col(b); };
  std::vector<double> out;
  for (int b : bands) {
    double flux = 0.0;
    for (int i = 0; i + 1 < N; ++i)
      for (int j = 0; j < M; ++j) {
        cd U = u(i, j, b).dot(u(i + 1, j, b)) * u(i + 1, j, b).dot(u(i + 1, j + 1, b)) *
               u(i + 1, j + 1, b).dot(u(i, j + 1, b)) * u(i, j + 1, b).dot(u(i, j, b));
        flux += std::arg(U);
      }
    cd north = 1.0, south = 1.0;
    for (int j = 0; j < M; ++j) {
      north *= u(0, j, b).dot(u(0, j + 1, b));
      north /= std::abs(north);
      south *= u(N - 1, j + 1, b).dot(u(N - 1, j, b));
      south /= std::abs(south);
    }
    flux += std::arg(north) + std::arg(south);
    out.push_back(flux / (2.0 * pi));
  }
  return out;
}

}  // namespace detail

/// Chern numbers of `bands` (0-based, ascending energy) over the sphere of
/// radius r about `center`. Requires a hermitian family of arity 3.
inline ChernResult chern_on_sphere(const MatrixFamily& f, const std::array<double, 3>& center, double radius,
                                   const std::vector<int>& bands, const ChernOptions& opt = {}) {
  if (f.cls == SymmetryClass::general) throw FamilyError("chern_on_sphere: family is not hermitian");
  if (f.arity != 3) throw FamilyError("chern_on_sphere: family needs three parameters");
  if (!(radius > 0.0)) throw std::invalid_argument("chern_on_sphere: radius must be positive");
  for (int b : bands)
    if (b < 0 || b >= f.n) throw std::invalid_argument("chern_on_sphere: band index out of range");
  ChernResult res;
  res.center = center;
  res.radius = radius;
  res.bands = bands;
  auto rounded = [](const std::vector<double>& v) {
    std::vector<long long> o;
    for (double x : v) o.push_back(std::llround(x));
    return o;
  };
  int N = opt.grid;
  double gap = 0.0;
  auto prev = detail::lattice_chern(f, center, radius, bands, N, opt, gap);
  for (int k = 0; k < opt.max_doublings; ++k) {
    double gap2 = 0.0;
    auto next = detail::lattice_chern(f, center, radius, bands, 2 * N, opt, gap2);
    if (rounded(prev) == rounded(next)) {
      res.cherns = rounded(next);
      res.raw = next;
      res.grid_used = 2 * N;
      res.min_gap = std::min(gap, gap2);
      for (std::size_t q = 0; q < next.size(); ++q)
        res.max_defect = std::max(res.max_defect, std::abs(next[q] - static_cast<double>(res.cherns[q])));
      return res;
    }
    prev = std::move(next);
    gap = gap2;
    N *= 2;
  }
  throw ChernConvergenceError("Chern numbers did not stabilize up to grid " + std::to_string(N));
}

/// True when every band has zero Chern number on the sphere, as expected for
/// a sphere that encloses no degeneracy.
inline bool charge_zero_check(const MatrixFamily& f, const std::array<double, 3>& center, double radius,
                              const ChernOptions& opt = {}) {
  std::vector<int> all;
  for (int b = 0; b < f.n; ++b) all.push_back(b);
  auto r = chern_on_sphere(f, center, radius, all, opt);
  for (long long c : r.cherns)
    if (c != 0) return false;
  return true;
}

}  // namespace weylbound
