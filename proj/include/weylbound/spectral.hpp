#pragma once

// Numerical crossing points of a family at a fixed perturbation strength t,
// their topological charges, and band dispersion slices.
//
// Real points: multistart Gauss-Newton on the realified minor system in the
// unknowns (params, l), seeded from a Halton sequence in the box with l at the
// midpoint of the closest eigenvalue pair.
// Complex points: Newton with holomorphic shifted deflation on arity + 1
// random exact linear combinations of the minors, each root gated on all
// minors.

#include "weylbound/chern.hpp"
#include "weylbound/minors.hpp"
#include "weylbound/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylbound {

struct WeylPoint {
  std::vector<cd> location;
  cd lambda = 0.0;
  bool is_real = true;
  std::optional<int> band_pair;  // lower band j of the crossing pair (j, j+1)
  std::optional<int> charge;     // Chern number of band j+1 on a small sphere
  double residual = 0.0;         // max |minor| at the point
};

struct WeylSearchOptions {
  double box = 1.0;
  std::size_t seeds = 0;                  // 0: 200 * expected, or 1000 without expectation
  std::optional<std::size_t> expected;    // count_cwp result, if known
  std::uint64_t seed = 1;
  double residual_gate = 1e-10;
  double merge_radius = 1e-6;             // relative to box
  double gap_tol = 1e-8;
  bool charges = true;
  ChernOptions chern;
};

struct WeylSearch {
  std::vector<WeylPoint> points;
  std::size_t seeds_used = 0;
  std::size_t converged = 0;  // seeds whose iteration converged to a gated point
  bool complete = true;       // false when the count disagrees with the expectation
  std::vector<std::string> notes;

  std::size_t real_count() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const WeylPoint& p) { return p.is_real; }));
  }
};

namespace detail {

struct MinorEval {
  std::vector<CompiledPoly> polys;
  std::vector<Var> vars;
  double t = 0.0;

  std::array<cd, kNumVars> point(const Eigen::VectorXcd& u) const {
    std::array<cd, kNumVars> pt{};
    for (std::size_t k = 0; k < vars.size(); ++k) pt[static_cast<std::size_t>(idx(vars[k]))] = u(static_cast<Eigen::Index>(k));
    pt[static_cast<std::size_t>(idx(Var::t))] = t;
    return pt;
  }
  Eigen::VectorXcd values(const Eigen::VectorXcd& u) const {
    auto pt = point(u);
    Eigen::VectorXcd F(static_cast<Eigen::Index>(polys.size()));
    for (std::size_t k = 0; k < polys.size(); ++k) F(static_cast<Eigen::Index>(k)) = polys[k].value(pt);
    return F;
  }
  void values_jacobian(const Eigen::VectorXcd& u, Eigen::VectorXcd& F, Eigen::MatrixXcd& J) const {
    auto pt = point(u);
    auto m = static_cast<Eigen::Index>(vars.size());
    F.resize(static_cast<Eigen::Index>(polys.size()));
    J.resize(static_cast<Eigen::Index>(polys.size()), m);
    std::vector<cd> g(vars.size());
    for (std::size_t k = 0; k < polys.size(); ++k) {
      F(static_cast<Eigen::Index>(k)) = polys[k].value_grad(pt, vars, g.data());
      for (Eigen::Index j = 0; j < m; ++j) J(static_cast<Eigen::Index>(k), j) = g[static_cast<std::size_t>(j)];
    }
  }
  double max_abs(const Eigen::VectorXcd& u) const { return values(u).cwiseAbs().maxCoeff(); }
};

inline MinorEval compile_minors(const std::vector<Poly>& gens, const std::vector<Var>& vars, double t) {
  MinorEval e;
  for (const auto& g : gens) e.polys.emplace_back(g);
  e.vars = vars;
  e.t = t;
  return e;
}

inline std::vector<cd> params_of(const Eigen::VectorXcd& u, int arity) {
  std::vector<cd> p;
  for (int i = 0; i < arity; ++i) p.push_back(u(i));
  return p;
}

/// Adjacent pair (j, j+1) with the smallest gap and that gap.
inline std::pair<int, double> closest_pair(const Eigen::VectorXd& ev) {
  int best = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j + 1 < ev.size(); ++j)
    if (ev(j + 1) - ev(j) < gap) {
      gap = ev(j + 1) - ev(j);
      best = static_cast<int>(j);
    }
  return {best, gap};
}

inline bool same_point(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline Eigen::VectorXcd to_vec(const WeylPoint& w) {
  Eigen::VectorXcd u(static_cast<Eigen::Index>(w.location.size() + 1));
  for (std::size_t i = 0; i < w.location.size(); ++i) u(static_cast<Eigen::Index>(i)) = w.location[i];
  u(static_cast<Eigen::Index>(w.location.size())) = w.lambda;
  return u;
}

inline void sort_points(std::vector<WeylPoint>& pts) {
  auto key = [](const WeylPoint& w) {
    std::vector<double> k;
    k.push_back(w.is_real ? 0.0 : 1.0);
    k.push_back(w.band_pair.value_or(-1));
    for (const auto& c : w.location) {
      k.push_back(std::round(c.real() * 1e9) / 1e9);
      k.push_back(std::round(c.imag() * 1e9) / 1e9);
    }
    k.push_back(std::round(w.lambda.real() * 1e9) / 1e9);
    k.push_back(std::round(w.lambda.imag() * 1e9) / 1e9);
    return k;
  };
  std::sort(pts.begin(), pts.end(), [&](const WeylPoint& a, const WeylPoint& b) { return key(a) < key(b); });
}

}  // namespace detail

/// lambda_{j+1} - lambda_j at a real point, eigenvalues ascending.
inline double eigengap(const MatrixFamily& f, const std::vector<double>& point, int j, double t = 0.0) {
  if (f.cls == SymmetryClass::general) throw FamilyError("eigengap: family must be hermitian");
  if (j < 0 || j + 1 >= f.n) throw std::out_of_range("eigengap: band index out of range");
  Eigen::VectorXd ev = hermitian_eigenvalues(evaluate(f, point, t));
  return std::max(0.0, ev(j + 1) - ev(j));
}

/// Chern number of band `pair + 1` on a small sphere about a real crossing
/// point. The radius starts at `radius` and halves until the pair is gapped
/// on the sphere.
inline std::optional<int> weyl_charge(const MatrixFamily& f, const WeylPoint& w, double t, double radius,
                                      ChernOptions opt = {}) {
  if (f.cls != SymmetryClass::hermitian || f.arity != 3 || !w.is_real || !w.band_pair) return std::nullopt;
  opt.t = t;
  std::array<double, 3> c = {w.location[0].real(), w.location[1].real(), w.location[2].real()};
  for (int attempt = 0; attempt < 30 && radius > 1e-12; ++attempt, radius *= 0.5) {
    try {
      auto r = chern_on_sphere(f, c, radius, {*w.band_pair + 1}, opt);
      return static_cast<int>(r.cherns[0]);
    } catch (const GapClosure&) {
    }
  }
  throw GapClosure("no gapped sphere found around crossing point");
}

/// Real crossing points inside [-box, box]^arity of a hermitian, real
/// symmetric or diagonal family at perturbation strength t.
inline WeylSearch find_weyl_points(const MatrixFamily& fam, double t, const WeylSearchOptions& opt = {}) {
  if (fam.cls == SymmetryClass::general) throw FamilyError("find_weyl_points: family must be hermitian");
  WeylSearch out;
  MinorSystem ms = realify(minor_ideal(fam, Scalar()));
  auto vars = ms.variables();
  auto R = detail::compile_minors(*ms.realified, vars, t);
  auto G = detail::compile_minors(ms.generators, vars, t);
  int m = fam.arity;
  std::size_t nseeds = opt.seeds ? opt.seeds : (opt.expected ? 200 * std::max<std::size_t>(*opt.expected, 1) : 1000);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(m));
  for (auto& s : shift) s = U(rng);
  double merge = opt.merge_radius * opt.box;
  std::vector<WeylPoint> pts;
  for (std::size_t k = 0; k < nseeds; ++k) {
    std::vector<double> p(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      double h = radical_inverse(k + 1, kHaltonBases[static_cast<std::size_t>(i)]) + shift[static_cast<std::size_t>(i)];
      p[static_cast<std::size_t>(i)] = opt.box * (2.0 * (h - std::floor(h)) - 1.0);
    }
    Eigen::VectorXd ev = hermitian_eigenvalues(evaluate(fam, p, t));
    auto [j0, g0] = detail::closest_pair(ev);
    Eigen::VectorXd u(m + 1);
    for (int i = 0; i < m; ++i) u(i) = p[static_cast<std::size_t>(i)];
    u(m) = 0.5 * (ev(j0) + ev(j0 + 1));
    auto realF = [&](const Eigen::VectorXd& v, Eigen::VectorXd& F, Eigen::MatrixXd* J) {
      Eigen::VectorXcd vc = v.cast<cd>();
      if (J) {
        Eigen::VectorXcd Fc;
        Eigen::MatrixXcd Jc;
        R.values_jacobian(vc, Fc, Jc);
        F = Fc.real();
        *J = Jc.real();
      } else {
        F = R.values(vc).real();
      }
    };
    Eigen::VectorXd F;
    Eigen::MatrixXd J;
    bool diverged = false;
    for (int it = 0; it < 80; ++it) {
      realF(u, F, &J);
      double norm = F.norm();
      if (norm < 1e-300) break;
      Eigen::VectorXd d = J.colPivHouseholderQr().solve(-F);
      double alpha = 1.0;
      bool accepted = false;
      Eigen::VectorXd F2;
      while (alpha > 1e-6) {
        realF(u + alpha * d, F2, nullptr);
        if (F2.norm() < norm) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
      u += alpha * d;
      if (u.cwiseAbs().maxCoeff() > 100.0 * opt.box + 100.0) {
        diverged = true;
        break;
      }
      if ((alpha * d).norm() <= 1e-15 * (1.0 + u.norm())) break;
    }
    if (diverged) continue;
    Eigen::VectorXcd uc = u.cast<cd>();
    double resid = G.max_abs(uc);
    if (!(resid <= opt.residual_gate)) continue;
    bool inside = true;
    for (int i = 0; i < m; ++i) inside = inside && std::abs(u(i)) <= opt.box;
    if (!inside) continue;
    ++out.converged;
    bool dup = false;
    for (const auto& w : pts) dup = dup || detail::same_point(detail::to_vec(w), uc, merge);
    if (dup) continue;
    WeylPoint w;
    for (int i = 0; i < m; ++i) w.location.emplace_back(u(i), 0.0);
    w.lambda = u(m);
    w.residual = resid;
    std::vector<double> pr(u.data(), u.data() + m);
    Eigen::VectorXd ev2 = hermitian_eigenvalues(evaluate(fam, pr, t));
    auto [j, gap] = detail::closest_pair(ev2);
    if (gap > opt.gap_tol * std::max(1.0, ev2.cwiseAbs().maxCoeff())) {
      out.notes.push_back("gated minor zero without eigenvalue degeneracy discarded");
      continue;
    }
    w.band_pair = j;
    pts.push_back(std::move(w));
  }
  out.seeds_used = nseeds;
  if (opt.charges && fam.cls == SymmetryClass::hermitian && m == 3) {
    for (auto& w : pts) {
      double r = 0.1 * opt.box;
      for (const auto& o : pts) {
        if (&o == &w) continue;
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d += std::norm(o.location[static_cast<std::size_t>(i)] - w.location[static_cast<std::size_t>(i)]);
        r = std::min(r, 0.45 * std::sqrt(d));
      }
      w.charge = weyl_charge(fam, w, t, r, opt.chern);
    }
  }
  detail::sort_points(pts);
  out.points = std::move(pts);
  if (opt.expected && out.points.size() > *opt.expected) {
    out.complete = false;
    out.notes.push_back("found " + std::to_string(out.points.size()) + " real points, above the upper bound " +
                        std::to_string(*opt.expected));
  }
  return out;
}

inline WeylSearch find_real_weyl_points(const MatrixFamily& fam, double t, const WeylSearchOptions& opt = {}) {
  return find_weyl_points(fam, t, opt);
}

/// Complex crossing points (params in C^arity, l in C) with all coordinates
/// inside the complex box |Re|, |Im| <= box. Real points found this way carry
/// their band pair and, for three-parameter hermitian families, their charge.
inline WeylSearch find_complex_weyl_points(const MatrixFamily& fam, double t, const WeylSearchOptions& opt = {}) {
  WeylSearch out;
  MinorSystem ms = minor_ideal(fam, Scalar());
  auto vars = ms.variables();
  int m = fam.arity;
  auto G = detail::compile_minors(ms.generators, vars, t);
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::vector<Poly> combos;
  for (int q = 0; q <= m; ++q) {
    Poly c;
    for (const auto& g : ms.generators) {
      int a = coef(rng), b = coef(rng);
      if (a == 0 && b == 0) a = 1;
      c += g.scaled(Scalar(GaussianRational(Rational(a), Rational(b))));
    }
    combos.push_back(std::move(c));
  }
  auto S = detail::compile_minors(combos, vars, t);
  std::uniform_real_distribution<double> U(-opt.box, opt.box);
  std::normal_distribution<double> Nrm(0.0, 1.0);
  std::size_t nseeds = opt.seeds ? opt.seeds : (opt.expected ? 200 * std::max<std::size_t>(*opt.expected, 1) : 1000);
  double merge = opt.merge_radius * opt.box;
  struct Deflator {
    Eigen::VectorXcd root, a;
  };
  std::vector<Deflator> defl;
  std::vector<WeylPoint> pts;
  bool hermitian_like = fam.cls != SymmetryClass::general;

  // Gauss-Newton on all minors; the square system only locates the root.
  auto newton_polish = [&](Eigen::VectorXcd u) {
    for (int it = 0; it < 40; ++it) {
      Eigen::VectorXcd F;
      Eigen::MatrixXcd J;
      G.values_jacobian(u, F, J);
      Eigen::VectorXcd d = J.colPivHouseholderQr().solve(-F);
      if (!d.allFinite()) break;
      u += d;
      if (d.norm() <= 1e-16 * (1.0 + u.norm())) break;
    }
    return u;
  };
  auto record = [&](const Eigen::VectorXcd& u) {
    double resid = G.max_abs(u);
    if (!(resid <= opt.residual_gate)) return;
    for (int i = 0; i < m; ++i)
      if (std::abs(u(i).real()) > opt.box || std::abs(u(i).imag()) > opt.box) return;
    for (const auto& w : pts)
      if (detail::same_point(detail::to_vec(w), u, merge)) return;
    WeylPoint w;
    for (int i = 0; i < m; ++i) w.location.push_back(u(i));
    w.lambda = u(m);
    w.residual = resid;
    double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
    w.is_real = hermitian_like && u.imag().cwiseAbs().maxCoeff() <= 1e-8 * scale;
    if (w.is_real) {
      for (auto& c : w.location) c = c.real();
      w.lambda = w.lambda.real();
      std::vector<double> pr;
      for (int i = 0; i < m; ++i) pr.push_back(u(i).real());
      auto [j, gap] = detail::closest_pair(hermitian_eigenvalues(evaluate(fam, pr, t)));
      w.band_pair = j;
    }
    pts.push_back(std::move(w));
  };

  std::size_t k = 0;
  for (; k < nseeds; ++k) {
    if (opt.expected && pts.size() >= *opt.expected) break;
    Eigen::VectorXcd u0(m + 1);
    for (int i = 0; i <= m; ++i) u0(i) = cd(U(rng), U(rng));
    auto is_known = [&](const Eigen::VectorXcd& v) {
      for (const auto& d : defl)
        if (detail::same_point(d.root, v, 1e-8 * (1.0 + v.norm()))) return true;
      return false;
    };
    // Deflated pass first; an undeflated pass from the same seed catches
    // roots the deflation operator steers away from.
    std::optional<Eigen::VectorXcd> found;
    for (bool deflate : {true, false}) {
      if (!deflate && defl.empty()) break;
      Eigen::VectorXcd u = u0;
      bool ok = false;
      for (int it = 0; it < 100; ++it) {
        Eigen::VectorXcd F;
        Eigen::MatrixXcd J;
        S.values_jacobian(u, F, J);
        Eigen::MatrixXcd Jd = J;
        if (deflate) {
          // Shifted deflation m(u) = prod (1/(a.(u - r)) + 1); g = grad log m.
          Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m + 1);
          for (const auto& d : defl) {
            cd den = d.a.transpose() * (u - d.root);
            g -= d.a / (den * (1.0 + den));
          }
          Jd += F * g.transpose();
        }
        Eigen::VectorXcd step = Jd.partialPivLu().solve(-F);
        if (!step.allFinite()) break;
        u += step;
        if (u.cwiseAbs().maxCoeff() > 1e3 * (opt.box + 1.0)) break;
        if (step.norm() <= 1e-12 * (1.0 + u.norm())) {
          ok = true;
          break;
        }
      }
      if (!ok) continue;
      u = newton_polish(u);
      if (!(S.values(u).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + u.norm()))) continue;
      if (is_known(u)) continue;
      found = u;
      break;
    }
    if (!found) continue;
    const Eigen::VectorXcd& u = *found;
    Eigen::VectorXcd a(m + 1);
    for (int i = 0; i <= m; ++i) a(i) = cd(Nrm(rng), Nrm(rng));
    defl.push_back({u, a});
    std::size_t before = pts.size();
    record(u);
    if (pts.size() > before) ++out.converged;
  }
  out.seeds_used = k;
  if (hermitian_like) {
    std::size_t n0 = pts.size();
    for (std::size_t q = 0; q < n0; ++q) {
      if (pts[q].is_real) continue;
      Eigen::VectorXcd c = detail::to_vec(pts[q]).conjugate();
      record(newton_polish(c));
    }
  }
  if (opt.charges && fam.cls == SymmetryClass::hermitian && m == 3) {
    for (auto& w : pts) {
      if (!w.is_real) continue;
      double r = 0.1 * opt.box;
      for (const auto& o : pts) {
        if (&o == &w) continue;
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d += std::norm(o.location[static_cast<std::size_t>(i)] - w.location[static_cast<std::size_t>(i)]);
        r = std::min(r, 0.45 * std::sqrt(d));
      }
      w.charge = weyl_charge(fam, w, t, r, opt.chern);
    }
  }
  detail::sort_points(pts);
  out.points = std::move(pts);
  if (opt.expected && out.points.size() != *opt.expected) {
    out.complete = false;
    out.notes.push_back("search incomplete: found " + std::to_string(out.points.size()) + " of " +
                        std::to_string(*opt.expected) + " complex crossing points");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dispersion slices.

struct DispersionSample {
  double s = 0.0;             // line parameter, or first plane coordinate
  double s2 = 0.0;            // second plane coordinate
  std::vector<double> point;  // parameter point
  Eigen::VectorXd energies;   // ascending
};

/// Eigenvalues along the segment from `a` to `b` with `samples` points.
inline std::vector<DispersionSample> dispersion_line(const MatrixFamily& f, double t, const std::vector<double>& a,
                                                     const std::vector<double>& b, int samples) {
  if (samples < 2) throw std::invalid_argument("dispersion_line: need at least two samples");
  std::vector<DispersionSample> out;
  for (int q = 0; q < samples; ++q) {
    double s = static_cast<double>(q) / (samples - 1);
    DispersionSample d;
    d.s = s;
    for (std::size_t i = 0; i < a.size(); ++i) d.point.push_back(a[i] + s * (b[i] - a[i]));
    d.energies = hermitian_eigenvalues(evaluate(f, d.point, t));
    out.push_back(std::move(d));
  }
  return out;
}

/// Eigenvalues on the plane center + s u + s2 v, s, s2 in [-extent, extent].
inline std::vector<DispersionSample> dispersion_plane(const MatrixFamily& f, double t, const std::vector<double>& center,
                                                      const std::vector<double>& u, const std::vector<double>& v,
                                                      double extent, int samples) {
  if (samples < 2) throw std::invalid_argument("dispersion_plane: need at least two samples");
  std::vector<DispersionSample> out;
  for (int q = 0; q < samples; ++q)
    for (int r = 0; r < samples; ++r) {
      DispersionSample d;
      d.s = -extent + 2.0 * extent * q / (samples - 1);
      d.s2 = -extent + 2.0 * extent * r / (samples - 1);
      for (std::size_t i = 0; i < center.size(); ++i) d.point.push_back(center[i] + d.s * u[i] + d.s2 * v[i]);
      d.energies = hermitian_eigenvalues(evaluate(f, d.point, t));
      out.push_back(std::move(d));
    }
  return out;
}

inline void write_dispersion_csv(std::ostream& os, const std::vector<DispersionSample>& samples) {
  if (samples.empty()) return;
  static const char* names[] = {"x", "y", "z"};
  os << "s,s2";
  for (std::size_t i = 0; i < samples[0].point.size(); ++i) os << "," << names[i];
  for (Eigen::Index b = 0; b < samples[0].energies.size(); ++b) os << ",e" << b;
  os << "\n";
  auto old = os.precision(12);
  for (const auto& d : samples) {
    os << d.s << "," << d.s2;
    for (double p : d.point) os << "," << p;
    for (Eigen::Index b = 0; b < d.energies.size(); ++b) os << "," << d.energies(b);
    os << "\n";
  }
  os.precision(old);
}

}  // namespace weylbound
