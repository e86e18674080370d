#pragma once

// Exact coefficient fields.
//
// GaussianRational is Q(i). Scalar extends it by square roots of positive
// integers: an element is a finite sum  sum_r c_r * sqrt(r)  over squarefree
// radicands r with Gaussian-rational coefficients c_r. This is a field
// (a multiquadratic extension of Q(i)), closed under everything the minor
// and rank computations need, and it covers the spin ladder coefficients and
// the sqrt(3) entries of the band-structure family.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace weylbound {

using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

class GaussianRational {
 public:
  Rational re;
  Rational im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long v) : re(v), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(int v) : re(v), im(0) {}   // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i_unit() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  GaussianRational conj() const { return {re, -im}; }
  /// |q|^2 = re^2 + im^2.
  Rational norm2() const { return re * re + im * im; }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    Rational n = o.norm2();
    Rational r = (re * o.re + im * o.im) / n;
    Rational i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  /// Text form accepted by the polynomial parser: "3/2", "-i", "2*i", "(1/2-3*i)".
  std::string str() const {
    if (sgn(im) == 0) return re.get_str();
    std::string ims;
    if (im == 1)
      ims = "i";
    else if (im == -1)
      ims = "-i";
    else
      ims = im.get_str() + "*i";
    if (sgn(re) == 0) return ims;
    std::string out = "(" + re.get_str();
    if (ims[0] != '-') out += "+";
    return out + ims + ")";
  }
};

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& q) { return os << q.str(); }

namespace detail {

inline std::uint32_t squarefree_part(std::uint64_t n, std::uint64_t& square_root_of_rest) {
  square_root_of_rest = 1;
  std::uint64_t r = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      square_root_of_rest *= p;
    }
    if (n % p == 0) {
      n /= p;
      r *= p;
    }
  }
  r *= n;
  return static_cast<std::uint32_t>(r);
}

inline std::uint32_t largest_prime_factor(std::uint32_t n) {
  std::uint32_t best = 1;
  for (std::uint32_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  }
  return n > 1 ? std::max(best, n) : best;
}

}  // namespace detail

/// Element of Q(i)(sqrt 2, sqrt 3, sqrt 5, ...). Terms are sorted by radicand,
/// radicands are squarefree, and no stored coefficient is zero.
class Scalar {
 public:
  using Term = std::pair<std::uint32_t, GaussianRational>;

  Scalar() = default;
  Scalar(int v) { if (v != 0) terms_.emplace_back(1u, GaussianRational(v)); }    // NOLINT
  Scalar(long v) { if (v != 0) terms_.emplace_back(1u, GaussianRational(v)); }   // NOLINT
  Scalar(const Rational& q) { if (sgn(q) != 0) terms_.emplace_back(1u, GaussianRational(q)); }  // NOLINT
  Scalar(const GaussianRational& q) { if (!q.is_zero()) terms_.emplace_back(1u, q); }         // NOLINT

  static Scalar i_unit() { return Scalar(GaussianRational::i_unit()); }
  static Scalar rational(long num, long den = 1) { return Scalar(Rational(num, den)); }

  /// sqrt(n) for a nonnegative integer n, with square factors pulled out.
  static Scalar sqrt_of(std::uint64_t n) {
    if (n == 0) return {};
    std::uint64_t s = 1;
    std::uint32_t r = detail::squarefree_part(n, s);
    Scalar out;
    out.terms_.emplace_back(r, GaussianRational(Rational(static_cast<long>(s))));
    return out;
  }

  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_real() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.second.is_real(); });
  }
  /// True when no radical is present (the value lies in Q(i)).
  bool is_gaussian_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1); }
  bool is_rational() const { return is_gaussian_rational() && is_real(); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].first == 1 && terms_[0].second.is_one(); }

  GaussianRational gaussian_part() const {
    if (!terms_.empty() && terms_[0].first == 1) return terms_[0].second;
    return {};
  }
  /// Requires is_gaussian_rational().
  GaussianRational as_gaussian_rational() const {
    if (!is_gaussian_rational()) throw std::domain_error("Scalar carries a radical");
    return gaussian_part();
  }

  Scalar conj() const {
    Scalar out = *this;
    for (auto& t : out.terms_) t.second = t.second.conj();
    return out;
  }

  Scalar operator-() const {
    Scalar out = *this;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
  }

  Scalar& operator+=(const Scalar& o) { return merge(o, false); }
  Scalar& operator-=(const Scalar& o) { return merge(o, true); }

  Scalar& operator*=(const Scalar& o) {
    if (is_zero() || o.is_zero()) {
      terms_.clear();
      return *this;
    }
    if (is_gaussian_rational() && o.is_gaussian_rational()) {
      terms_[0].second *= o.terms_[0].second;
      if (terms_[0].second.is_zero()) terms_.clear();
      return *this;
    }
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& [ra, ca] : terms_) {
      for (const auto& [rb, cb] : o.terms_) {
        std::uint32_t g = std::gcd(ra, rb);
        GaussianRational c = ca * cb;
        if (g != 1) c *= GaussianRational(static_cast<long>(g));
        prod.emplace_back((ra / g) * (rb / g), std::move(c));
      }
    }
    terms_ = normalize(std::move(prod));
    return *this;
  }

  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("Scalar: division by zero");
    if (is_gaussian_rational()) return Scalar(GaussianRational(1) / terms_[0].second);
    std::uint32_t p = 1;
    for (const auto& t : terms_) p = std::max(p, detail::largest_prime_factor(t.first));
    // x = u + v*sqrt(p) with u, v free of sqrt(p);  1/x = (u - v sqrt p) / (u^2 - p v^2).
    Scalar u, v;
    for (const auto& [r, c] : terms_) {
      if (r % p == 0)
        v.terms_.emplace_back(r / p, c);
      else
        u.terms_.emplace_back(r, c);
    }
    u.terms_ = normalize(std::move(u.terms_));
    v.terms_ = normalize(std::move(v.terms_));
    Scalar conj_p = u - v * sqrt_of(p);
    Scalar denom = u * u - v * v * Scalar(static_cast<long>(p));
    return conj_p * denom.inverse();
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::complex<double> to_complex() const {
    std::complex<double> v = 0.0;
    for (const auto& [r, c] : terms_) v += c.to_complex() * std::sqrt(static_cast<double>(r));
    return v;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<std::string> parts;
    for (const auto& [r, c] : terms_) {
      if (r == 1) {
        parts.push_back(c.str());
      } else if (c.is_one()) {
        parts.push_back("sqrt(" + std::to_string(r) + ")");
      } else {
        parts.push_back(c.str() + "*sqrt(" + std::to_string(r) + ")");
      }
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(" + parts[0];
    for (std::size_t k = 1; k < parts.size(); ++k) {
      if (parts[k][0] != '-') out += "+";
      out += parts[k];
    }
    return out + ")";
  }

 private:
  static std::vector<Term> normalize(std::vector<Term> v) {
    std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    for (auto& t : v) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second += t.second;
      else
        out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.second.is_zero(); }),
              out.end());
    return out;
  }

  Scalar& merge(const Scalar& o, bool subtract) {
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t a = 0, b = 0;
    while (a < terms_.size() || b < o.terms_.size()) {
      if (b == o.terms_.size() || (a < terms_.size() && terms_[a].first < o.terms_[b].first)) {
        out.push_back(std::move(terms_[a++]));
      } else if (a == terms_.size() || o.terms_[b].first < terms_[a].first) {
        out.emplace_back(o.terms_[b].first, subtract ? -o.terms_[b].second : o.terms_[b].second);
        ++b;
      } else {
        GaussianRational c = std::move(terms_[a].second);
        if (subtract)
          c -= o.terms_[b].second;
        else
          c += o.terms_[b].second;
        if (!c.is_zero()) out.emplace_back(terms_[a].first, std::move(c));
        ++a;
        ++b;
      }
    }
    terms_ = std::move(out);
    return *this;
  }

  std::vector<Term> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

inline bool is_zero(const Scalar& s) { return s.is_zero(); }
inline bool is_zero(const std::complex<double>& c) { return c == std::complex<double>(0.0, 0.0); }
inline Scalar conj(const Scalar& s) { return s.conj(); }
inline std::complex<double> to_complex(const Scalar& s) { return s.to_complex(); }
inline std::complex<double> to_complex(const std::complex<double>& c) { return c; }

/// Best rational approximation with bounded denominator (continued fractions).
inline Rational rationalize(double v, long max_den = 1000000) {
  if (!std::isfinite(v)) throw std::domain_error("rationalize: non-finite value");
  long sign = v < 0 ? -1 : 1;
  double x = std::abs(v);
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(frac);
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double rem = frac - a;
    if (rem < 1e-15 || std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) < 1e-15 * std::max(1.0, x)) break;
    frac = 1.0 / rem;
  }
  if (k1 == 0) return Rational(0);
  return Rational(sign * h1, k1);
}

}  // namespace weylbound
