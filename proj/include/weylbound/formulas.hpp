#pragma once

// Closed-form counts for generic k-fold crossings and the Chern-number
// lower bound on the number of real crossing points.

#include "weylbound/matfam.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylbound {

/// C(m, r) with C(m, r) = 0 whenever m < r (including negative m).
inline long long binom(long long m, long long r) {
  if (r < 0 || m < r) return 0;
  long long out = 1;
  for (long long j = 1; j <= r; ++j) out = out * (m - r + j) / j;
  return out;
}

inline void require_k(long long k) {
  if (k < 1) throw std::invalid_argument("cluster size k must be >= 1");
}

/// k^2 (k^2 - 1) / 12: generic hermitian or general complex k-fold crossing.
inline long long cwp_hermitian(long long k) {
  require_k(k);
  return k * k * (k * k - 1) / 12;
}

/// k (k^2 - 1) / 6: generic real symmetric k-fold crossing.
inline long long cwp_symmetric(long long k) {
  require_k(k);
  return k * (k * k - 1) / 6;
}

/// k (k - 1) / 2: generic diagonal k-fold crossing.
inline long long cwp_diagonal(long long k) {
  require_k(k);
  return k * (k - 1) / 2;
}

/// Number of complex crossing points born from a generic k-fold crossing of the class.
inline long long multiplicity_formula(long long k, SymmetryClass cls) {
  switch (cls) {
    case SymmetryClass::symmetric: return cwp_symmetric(k);
    case SymmetryClass::diagonal: return cwp_diagonal(k);
    default: return cwp_hermitian(k);
  }
}

/// Degree-d Hilbert value of the generic hermitian quotient (alternating
/// binomial form of its minimal free resolution).
inline long long gn_hilbert_value(long long k, long long d) {
  require_k(k);
  if (d < 0) return 0;
  return binom(d + 3, 3) - k * k * binom(d - k + 4, 3) + (2 * k * k - 2) * binom(d - k + 3, 3) -
         k * k * binom(d - k + 2, 3) + binom(d - 2 * k + 3, 3);
}

struct HilbertSequence {
  std::vector<long long> dims;
  long long total = 0;
};

/// Hilbert sequence in degrees 0 .. 2k - 4 (degree 0 only for k <= 2).
inline HilbertSequence gn_hilbert_sequence(long long k) {
  require_k(k);
  HilbertSequence s;
  if (k == 1) return s;
  long long top = std::max(2 * k - 4, 0LL);
  for (long long d = 0; d <= top; ++d) {
    s.dims.push_back(gn_hilbert_value(k, d));
    s.total += s.dims.back();
  }
  return s;
}

/// Degree-d Hilbert value of the generic real symmetric quotient, from the
/// ranks 1, k(k+1)/2, k^2 - 1, k(k-1)/2 of its resolution over a
/// three-variable ring.
inline long long jozefiak_hilbert_value(long long k, long long d) {
  require_k(k);
  if (d < 0) return 0;
  return binom(d + 2, 2) - (k * (k + 1) / 2) * binom(d - k + 3, 2) + (k * k - 1) * binom(d - k + 2, 2) -
         (k * (k - 1) / 2) * binom(d - k + 1, 2);
}

/// Sequence in degrees 0 .. k - 2.
inline HilbertSequence jozefiak_sequence(long long k) {
  require_k(k);
  HilbertSequence s;
  for (long long d = 0; d + 2 <= k; ++d) {
    s.dims.push_back(jozefiak_hilbert_value(k, d));
    s.total += s.dims.back();
  }
  return s;
}

/// C(k + 1, 3).
inline long long jozefiak_total(long long k) {
  require_k(k);
  return binom(k + 1, 3);
}

struct LowerBound {
  long long value = 0;
  std::optional<std::string> warning;  // set when the Chern numbers do not sum to zero
};

/// Sum over consecutive band pairs of |partial sum of Chern numbers|.
inline LowerBound lower_bound_from_cherns(const std::vector<long long>& cherns) {
  LowerBound lb;
  long long partial = 0;
  for (std::size_t j = 0; j < cherns.size(); ++j) {
    partial += cherns[j];
    if (j + 1 < cherns.size()) lb.value += std::llabs(partial);
  }
  if (partial != 0) lb.warning = "Chern numbers sum to " + std::to_string(partial) + ", expected 0";
  return lb;
}

/// Algebraic crossing count of each consecutive band pair: minus the partial sums.
inline std::vector<long long> alg_counts_per_pair(const std::vector<long long>& cherns) {
  std::vector<long long> out;
  long long partial = 0;
  for (std::size_t j = 0; j + 1 < cherns.size(); ++j) {
    partial += cherns[j];
    out.push_back(-partial);
  }
  return out;
}

/// Spin-s cluster bands carry Chern numbers -2s, -2s + 2, ..., 2s.
inline std::vector<long long> spin_cherns(int twice_s) {
  std::vector<long long> c;
  for (int a = -twice_s; a <= twice_s; a += 2) c.push_back(a);
  return c;
}

/// Lower bound for a spin-s crossing; equals k (k^2 - 1) / 6 with k = 2s + 1.
inline long long spin_lower_bound(int twice_s) { return lower_bound_from_cherns(spin_cherns(twice_s)).value; }

/// Non-real crossing points come in conjugate pairs.
inline bool parity_consistent(long long n_real, long long n_complex) { return (n_real - n_complex) % 2 == 0; }

/// Real crossings and complex-conjugate pairs make #alg, #WP and #cWP all congruent mod 2.
inline bool parity_consistent(long long alg, long long wp, long long cwp) {
  auto m2 = [](long long v) { return ((v % 2) + 2) % 2; };
  return m2(alg) == m2(wp) && m2(wp) == m2(cwp);
}

}  // namespace weylbound
