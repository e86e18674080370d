#pragma once

// Exact sparse row echelon form over a field K. Columns are integers and a
// smaller index means a more significant column: the pivot of a row is its
// smallest column with a nonzero entry.

#include "weylbound/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <map>
#include <utility>
#include <vector>

namespace weylbound {

template <class K>
class SparseEchelon {
 public:
  using Row = std::vector<std::pair<int, K>>;  // sorted by column, no zeros

  explicit SparseEchelon(int ncols) : ncols_(ncols), pivot_row_(static_cast<std::size_t>(ncols), -1) {}

  int ncols() const { return ncols_; }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(int col) const { return pivot_row_[static_cast<std::size_t>(col)] >= 0; }

  /// Reduce `r` against the stored rows so that it has no entry in a pivot
  /// column. Returns the reduced row.
  Row reduce(Row r) const {
    std::size_t pos = 0;
    while (pos < r.size()) {
      int col = r[pos].first;
      int pr = pivot_row_[static_cast<std::size_t>(col)];
      if (pr < 0) {
        ++pos;
        continue;
      }
      K factor = r[pos].second;
      r = axpy(r, rows_[static_cast<std::size_t>(pr)], factor);
    }
    return r;
  }

  /// Adds a row. Returns true if the rank grew.
  bool insert(Row r) {
    r = reduce(std::move(r));
    if (r.empty()) return false;
    K inv = K(1) / r.front().second;
    for (auto& [c, v] : r) v *= inv;
    int col = r.front().first;
    pivot_row_[static_cast<std::size_t>(col)] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  /// Back-substitute so that no stored row has an entry in another row's pivot column.
  void fully_reduce() {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    // Process rows from the least significant pivot upward.
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
    for (std::size_t k : order) {
      Row& r = rows_[k];
      Row head{r.front()};
      Row tail(r.begin() + 1, r.end());
      tail = reduce(std::move(tail));
      head.insert(head.end(), tail.begin(), tail.end());
      r = std::move(head);
    }
  }

  std::vector<int> non_pivot_columns() const {
    std::vector<int> out;
    for (int c = 0; c < ncols_; ++c)
      if (!is_pivot(c)) out.push_back(c);
    return out;
  }

 private:
  /// r - factor * p, where p has leading coefficient 1 at r's entry column.
  static Row axpy(const Row& r, const Row& p, const K& factor) {
    Row out;
    out.reserve(r.size() + p.size());
    std::size_t a = 0, b = 0;
    while (a < r.size() || b < p.size()) {
      if (b == p.size() || (a < r.size() && r[a].first < p[b].first)) {
        out.push_back(r[a++]);
      } else if (a == r.size() || p[b].first < r[a].first) {
        K v = p[b].second * factor;
        out.emplace_back(p[b].first, -v);
        ++b;
      } else {
        K v = r[a].second - p[b].second * factor;
        if (!is_zero(v)) out.emplace_back(r[a].first, std::move(v));
        ++a;
        ++b;
      }
    }
    return out;
  }

  int ncols_;
  std::vector<int> pivot_row_;
  std::vector<Row> rows_;
};

/// Rows that are linearly independent modulo a prime p = 1 (mod 4), with i
/// sent to a square root of -1 mod p. Independence mod p implies independence
/// over Q(i), so the selection is a certified lower bound on the exact rank.
/// Returns nullopt when some entry has no image (a radical, or p divides a
/// denominator). Rows are taken greedily in the given order.
class ModpSelector {
 public:
  static constexpr std::uint64_t kPrime = 1000000009ULL;

  explicit ModpSelector(int ncols) : pivot_row_(static_cast<std::size_t>(ncols), -1) {}

  std::size_t rank() const { return rows_.size(); }

  /// True if the row was independent of those kept so far; nullopt if it has no image.
  std::optional<bool> offer(const SparseEchelon<Scalar>::Row& r) {
    std::vector<std::pair<int, std::uint64_t>> v;
    v.reserve(r.size());
    for (const auto& [c, s] : r) {
      auto m = image(s);
      if (!m) return std::nullopt;
      if (*m) v.emplace_back(c, *m);
    }
    for (std::size_t pos = 0; pos < v.size();) {
      int pr = pivot_row_[static_cast<std::size_t>(v[pos].first)];
      if (pr < 0) {
        ++pos;
        continue;
      }
      v = axpy(v, rows_[static_cast<std::size_t>(pr)], v[pos].second);
    }
    if (v.empty()) return false;
    std::uint64_t inv = power(v.front().second, kPrime - 2);
    for (auto& e : v) e.second = e.second * inv % kPrime;
    pivot_row_[static_cast<std::size_t>(v.front().first)] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
  }

 private:
  using MRow = std::vector<std::pair<int, std::uint64_t>>;

  static std::uint64_t power(std::uint64_t b, std::uint64_t e) {
    std::uint64_t out = 1;
    for (b %= kPrime; e; e >>= 1, b = b * b % kPrime)
      if (e & 1) out = out * b % kPrime;
    return out;
  }

  static std::uint64_t sqrt_minus_one() {
    static const std::uint64_t root = [] {
      for (std::uint64_t g = 2;; ++g)
        if (power(g, (kPrime - 1) / 2) == kPrime - 1) return power(g, (kPrime - 1) / 4);
    }();
    return root;
  }

  static std::optional<std::uint64_t> image(const Rational& q) {
    std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
    if (den == 0) return std::nullopt;
    std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
    return num * power(den, kPrime - 2) % kPrime;
  }

  static std::optional<std::uint64_t> image(const Scalar& s) {
    if (!s.is_gaussian_rational()) return std::nullopt;
    GaussianRational g = s.as_gaussian_rational();
    auto re = image(g.re), im = image(g.im);
    if (!re || !im) return std::nullopt;
    return (*re + *im * sqrt_minus_one()) % kPrime;
  }

  static MRow axpy(const MRow& r, const MRow& p, std::uint64_t factor) {
    MRow out;
    out.reserve(r.size() + p.size());
    std::size_t a = 0, b = 0;
    while (a < r.size() || b < p.size()) {
      if (b == p.size() || (a < r.size() && r[a].first < p[b].first)) {
        out.push_back(r[a++]);
      } else if (a == r.size() || p[b].first < r[a].first) {
        out.emplace_back(p[b].first, (kPrime - p[b].second * factor % kPrime) % kPrime);
        ++b;
      } else {
        std::uint64_t v = (r[a].second + kPrime - p[b].second * factor % kPrime) % kPrime;
        if (v) out.emplace_back(r[a].first, v);
        ++a;
        ++b;
      }
    }
    return out;
  }

  std::vector<int> pivot_row_;
  std::vector<MRow> rows_;
};

}  // namespace weylbound
