// Closed-form counts, Hilbert sequences and Chern bounds.

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace weylbound;

TEST_CASE("hermitian sequences match the resolution series", "[formulas]") {
  for (long long k = 2; k <= 10; ++k) {
    HilbertSequence h = gn_hilbert_sequence(k);
    auto series = oracle::gn_series(k, static_cast<int>(2 * k + 2));
    REQUIRE(h.dims.size() == static_cast<std::size_t>(2 * k - 3));
    for (std::size_t d = 0; d < series.size(); ++d) CHECK(series[d] == (d < h.dims.size() ? h.dims[d] : 0));
    CHECK(h.total == k * k * (k * k - 1) / 12);
    CHECK(multiplicity_formula(k, SymmetryClass::hermitian) == h.total);
    CHECK(multiplicity_formula(k, SymmetryClass::general) == h.total);
  }
}

TEST_CASE("symmetric sequences match the resolution series", "[formulas]") {
  for (long long k = 2; k <= 10; ++k) {
    HilbertSequence h = jozefiak_sequence(k);
    auto series = oracle::jozefiak_series(k, static_cast<int>(2 * k + 2));
    for (std::size_t d = 0; d < series.size(); ++d) CHECK(series[d] == (d < h.dims.size() ? h.dims[d] : 0));
    CHECK(h.total == jozefiak_total(k));
    CHECK(multiplicity_formula(k, SymmetryClass::symmetric) == k * (k * k - 1) / 6);
  }
}

TEST_CASE("frozen sequence values", "[formulas]") {
  CHECK(gn_hilbert_sequence(3).dims == std::vector<long long>{1, 4, 1});
  CHECK(gn_hilbert_sequence(4).dims == std::vector<long long>{1, 4, 10, 4, 1});
  CHECK(jozefiak_sequence(3).dims == std::vector<long long>{1, 3});
  CHECK(jozefiak_sequence(4).dims == std::vector<long long>{1, 3, 6});
  CHECK(multiplicity_formula(4, SymmetryClass::diagonal) == 6);
  CHECK(multiplicity_formula(2, SymmetryClass::diagonal) == 1);
  CHECK_THROWS(multiplicity_formula(0, SymmetryClass::hermitian));
}

TEST_CASE("lower bounds equal the partial-sum oracle", "[formulas]") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> c(-6, 6);
  for (int s = 0; s < 30; ++s) {
    std::vector<long long> ch(static_cast<std::size_t>(2 + s % 5));
    long long sum = 0;
    for (std::size_t q = 0; q + 1 < ch.size(); ++q) sum += ch[q] = c(rng);
    ch.back() = -sum;
    CHECK(lower_bound_from_cherns(ch).value == oracle::partial_sum_bound(ch));
    CHECK_FALSE(lower_bound_from_cherns(ch).warning);
  }
  CHECK(lower_bound_from_cherns({1, 1}).warning);
  CHECK(lower_bound_from_cherns({-3, 5, -5, 3}).value == 8);
  CHECK(lower_bound_from_cherns({-3, -1, 1, 3}).value == 10);
}

TEST_CASE("spin bounds", "[formulas]") {
  CHECK(spin_cherns(2) == std::vector<long long>{-2, 0, 2});
  CHECK(spin_lower_bound(4) == 20);  // s = 2
  CHECK(spin_lower_bound(5) == 35);  // s = 5/2, k = 6
  for (int twice_s = 1; twice_s <= 9; ++twice_s) {
    long long k = twice_s + 1;
    CHECK(spin_lower_bound(twice_s) == k * (k * k - 1) / 6);
    CHECK(spin_lower_bound(twice_s) <= multiplicity_formula(k, SymmetryClass::hermitian));
  }
}

TEST_CASE("per-pair counts are signed partial sums", "[formulas]") {
  CHECK(alg_counts_per_pair({-2, 0, 2}) == std::vector<long long>{2, 2});
  CHECK(alg_counts_per_pair({-3, 5, -5, 3}) == std::vector<long long>{3, -2, 3});
}

TEST_CASE("parity rules", "[formulas]") {
  CHECK(parity_consistent(4, 6));
  CHECK_FALSE(parity_consistent(3, 6));
  CHECK(parity_consistent(4, 4, 6));
  CHECK_FALSE(parity_consistent(4, 3, 6));
  CHECK_FALSE(parity_consistent(3, 3, 6));
}
