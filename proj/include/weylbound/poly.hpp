#pragma once

// Sparse multivariate polynomials in the fixed ring K[x, y, z, l, t].
//
// Exponent vectors are indexed (x, y, z, l, t); l stands for the spectral
// variable lambda. Terms are kept in a std::map under graded order with
// variable significance t > l > z > y > x, so x is the least significant
// variable and iteration runs from low to high degree.

#include "weylbound/scalar.hpp"

#include <array>
#include <cctype>
#include <complex>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylbound {

enum class Var : int { x = 0, y = 1, z = 2, l = 3, t = 4 };
inline constexpr int kNumVars = 5;
inline constexpr std::array<char, kNumVars> kVarNames = {'x', 'y', 'z', 'l', 't'};

inline int idx(Var v) { return static_cast<int>(v); }

struct Monomial {
  std::array<int, kNumVars> e{};

  int degree() const {
    int d = 0;
    for (int v : e) d += v;
    return d;
  }
  int operator[](int i) const { return e[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return e[static_cast<std::size_t>(i)]; }

  static Monomial one() { return {}; }
  static Monomial var(Var v, int power = 1) {
    Monomial m;
    m[idx(v)] = power;
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int i = 0; i < kNumVars; ++i) m[i] = a[i] + b[i];
    return m;
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < kNumVars; ++i)
      if (e[static_cast<std::size_t>(i)] > o[i]) return false;
    return true;
  }
  /// Bitmask of variables with positive exponent.
  unsigned support() const {
    unsigned s = 0;
    for (int i = 0; i < kNumVars; ++i)
      if (e[static_cast<std::size_t>(i)] > 0) s |= 1u << i;
    return s;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e != b.e; }

  std::string str() const {
    std::string out;
    for (int i = kNumVars - 1; i >= 0; --i) {
      if (e[static_cast<std::size_t>(i)] == 0) continue;
      if (!out.empty()) out += "*";
      out += kVarNames[static_cast<std::size_t>(i)];
      if (e[static_cast<std::size_t>(i)] > 1) out += "^" + std::to_string(e[static_cast<std::size_t>(i)]);
    }
    return out.empty() ? "1" : out;
  }
};

/// Graded order, ties broken lexicographically from t down to x.
inline bool grlex_less(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  for (int i = kNumVars - 1; i >= 0; --i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(a, b); }
};

/// All monomials of total degree d in the variables listed in `vars`.
inline std::vector<Monomial> monomials_of_degree(const std::vector<Var>& vars, int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  if (vars.empty()) {
    if (d == 0) out.push_back(Monomial::one());
    return out;
  }
  Monomial cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == vars.size()) {
      cur[idx(vars[pos])] = left;
      out.push_back(cur);
      cur[idx(vars[pos])] = 0;
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[idx(vars[pos])] = a;
      rec(pos + 1, left - a);
    }
    cur[idx(vars[pos])] = 0;
  };
  rec(0, d);
  return out;
}

inline Scalar conj_coeff(const Scalar& s) { return s.conj(); }
inline std::complex<double> conj_coeff(const std::complex<double>& c) { return std::conj(c); }

template <class K>
class BasicPoly {
 public:
  using Coeff = K;
  using TermMap = std::map<Monomial, K, GrlexLess>;

  BasicPoly() = default;
  BasicPoly(const K& c) { if (!is_zero(c)) terms_.emplace(Monomial::one(), c); }  // NOLINT
  BasicPoly(int c) : BasicPoly(K(c)) {}                                           // NOLINT

  static BasicPoly variable(Var v) { return term(K(1), Monomial::var(v)); }
  static BasicPoly term(const K& c, const Monomial& m) {
    BasicPoly p;
    if (!is_zero(c)) p.terms_.emplace(m, c);
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero_poly() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  K coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? K() : it->second;
  }
  K constant_term() const { return coeff(Monomial::one()); }

  /// Highest total degree; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
  /// Lowest total degree of a term; -1 for the zero polynomial.
  int order() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }
  int degree_in(Var v) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[idx(v)]);
    return d;
  }
  bool is_homogeneous() const { return terms_.empty() || degree() == order(); }
  unsigned support() const {
    unsigned s = 0;
    for (const auto& [m, c] : terms_) s |= m.support();
    return s;
  }
  bool uses(Var v) const { return (support() >> idx(v)) & 1u; }

  BasicPoly operator-() const {
    BasicPoly out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
  }
  BasicPoly& operator+=(const BasicPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  BasicPoly& operator*=(const BasicPoly& o) { return *this = *this * o; }

  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    BasicPoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }
  friend bool operator==(const BasicPoly& a, const BasicPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const BasicPoly& a, const BasicPoly& b) { return !(a == b); }

  BasicPoly scaled(const K& s) const {
    BasicPoly out;
    for (const auto& [m, c] : terms_) out.add_term(m, c * s);
    return out;
  }
  BasicPoly shifted(const Monomial& mono) const {
    BasicPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m * mono, c);
    return out;
  }
  BasicPoly pow(int k) const {
    if (k < 0) throw std::invalid_argument("BasicPoly::pow: negative exponent");
    BasicPoly r(K(1)), b = *this;
    while (k > 0) {
      if (k & 1) r = r * b;
      b = b * b;
      k >>= 1;
    }
    return r;
  }
  /// Terms of total degree <= d.
  BasicPoly truncated(int d) const {
    BasicPoly out;
    for (const auto& [m, c] : terms_)
      if (m.degree() <= d) out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
  }
  /// Homogeneous component of degree d.
  BasicPoly homogeneous_part(int d) const {
    BasicPoly out;
    for (const auto& [m, c] : terms_)
      if (m.degree() == d) out.terms_.emplace_hint(out.terms_.end(), m, c);
    return out;
  }
  BasicPoly conj() const {
    BasicPoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, weylbound::conj_coeff(c));
    return out;
  }
  BasicPoly derivative(Var v) const {
    BasicPoly out;
    int i = idx(v);
    for (const auto& [m, c] : terms_) {
      if (m[i] == 0) continue;
      Monomial d = m;
      d[i] -= 1;
      out.add_term(d, c * K(m[i]));
    }
    return out;
  }

  /// Replace every variable v by images[v] simultaneously.
  BasicPoly substitute(const std::array<BasicPoly, kNumVars>& images) const {
    std::array<std::vector<BasicPoly>, kNumVars> powers;
    BasicPoly out;
    for (const auto& [m, c] : terms_) {
      BasicPoly t(c);
      for (int i = 0; i < kNumVars; ++i) {
        int e = m[i];
        if (e == 0) continue;
        auto& pw = powers[static_cast<std::size_t>(i)];
        if (pw.empty()) pw.push_back(BasicPoly(K(1)));
        while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[static_cast<std::size_t>(i)]);
        t = t * pw[static_cast<std::size_t>(e)];
      }
      out += t;
    }
    return out;
  }
  /// Replace a single variable.
  BasicPoly substitute(Var v, const BasicPoly& image) const {
    auto images = identity_images();
    images[static_cast<std::size_t>(idx(v))] = image;
    return substitute(images);
  }
  static std::array<BasicPoly, kNumVars> identity_images() {
    std::array<BasicPoly, kNumVars> images;
    for (int i = 0; i < kNumVars; ++i) images[static_cast<std::size_t>(i)] = variable(static_cast<Var>(i));
    return images;
  }

  /// Numerical evaluation at a complex point (x, y, z, l, t).
  std::complex<double> eval(const std::array<std::complex<double>, kNumVars>& pt) const {
    std::complex<double> s = 0.0;
    for (const auto& [m, c] : terms_) {
      std::complex<double> v = to_complex(c);
      for (int i = 0; i < kNumVars; ++i)
        for (int k = 0; k < m[i]; ++k) v *= pt[static_cast<std::size_t>(i)];
      s += v;
    }
    return s;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      std::string cs = coeff_str(c);
      bool neg = !cs.empty() && cs[0] == '-';
      std::string mag = neg ? cs.substr(1) : cs;
      std::string body;
      if (m == Monomial::one())
        body = mag;
      else if (mag == "1")
        body = m.str();
      else
        body = mag + "*" + m.str();
      if (first)
        out += (neg ? "-" : "") + body;
      else
        out += (neg ? " - " : " + ") + body;
      first = false;
    }
    return out;
  }

  void add_term(const Monomial& m, const K& c) {
    if (is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Drop terms with |c| <= tol (numeric coefficient types only).
  void prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(to_complex(it->second)) <= tol)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

 private:
  static std::string coeff_str(const K& c) {
    if constexpr (std::is_same_v<K, Scalar>) {
      return c.str();
    } else {
      std::complex<double> z = to_complex(c);
      std::ostringstream os;
      os.precision(17);
      if (z.imag() == 0.0) {
        os << z.real();
      } else {
        os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "*i)";
      }
      return os.str();
    }
  }

  TermMap terms_;
};

using Poly = BasicPoly<Scalar>;
using NumPoly = BasicPoly<std::complex<double>>;

template <class K>
std::ostream& operator<<(std::ostream& os, const BasicPoly<K>& p) {
  return os << p.str();
}

inline NumPoly to_numeric(const Poly& p) {
  NumPoly out;
  for (const auto& [m, c] : p.terms()) out.add_term(m, c.to_complex());
  return out;
}

/// Exact polynomial with every coefficient replaced by its closest rational
/// (real and imaginary part separately); coefficients below tol are dropped.
inline Poly rationalize(const NumPoly& p, double tol = 1e-7, long max_den = 10000) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Rational re = std::abs(c.real()) <= tol ? Rational(0) : rationalize(c.real(), max_den);
    Rational im = std::abs(c.imag()) <= tol ? Rational(0) : rationalize(c.imag(), max_den);
    out.add_term(m, Scalar(GaussianRational(re, im)));
  }
  return out;
}

inline Poly var(Var v) { return Poly::variable(v); }

// ---------------------------------------------------------------------------
// Text grammar for entries: sums/differences/products/powers of integers,
// rationals a/b, the variables x y z l t, the imaginary unit i, sqrt(n) and
// parentheses. Division is allowed only by nonzero constants.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t column)
      : std::runtime_error(msg + " at column " + std::to_string(column + 1)), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  Poly parse() {
    Poly p = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly p = term();
    for (;;) {
      if (accept('+'))
        p += term();
      else if (accept('-'))
        p -= term();
      else
        return p;
    }
  }

  Poly term() {
    Poly p = unary();
    for (;;) {
      if (accept('*')) {
        p = p * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Poly d = unary();
        if (d.degree() > 0) throw ParseError("division by a non-constant", at);
        Scalar c = d.constant_term();
        if (c.is_zero()) throw ParseError("division by zero", at);
        p = p.scaled(c.inverse());
      } else {
        return p;
      }
    }
  }

  Poly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Poly power() {
    Poly base = primary();
    if (accept('^')) {
      skip_ws();
      std::size_t at = pos_;
      long e = integer();
      if (e < 0 || e > 64) throw ParseError("exponent out of range", at);
      return base.pow(static_cast<int>(e));
    }
    return base;
  }

  long integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected an integer", start);
    if (pos_ - start > 15) throw ParseError("integer too long", start);
    return std::stol(s_.substr(start, pos_ - start));
  }

  Poly primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Poly(Scalar(Rational(s_.substr(start, pos_ - start))));
    }
    if (s_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      if (!accept('(')) throw ParseError("expected '(' after sqrt", pos_);
      long n = integer();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return Poly(Scalar::sqrt_of(static_cast<std::uint64_t>(n)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
        throw ParseError("unknown identifier", pos_ - 1);
      switch (c) {
        case 'x': return var(Var::x);
        case 'y': return var(Var::y);
        case 'z': return var(Var::z);
        case 'l': return var(Var::l);
        case 't': return var(Var::t);
        case 'i': return Poly(Scalar::i_unit());
        default: throw ParseError("unknown symbol '" + std::string(1, c) + "'", pos_ - 1);
      }
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly parse_poly(const std::string& text) { return detail::PolyParser(text).parse(); }

}  // namespace weylbound
