// Minor tables, the minor ideal and its cofactor relations.

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace weylbound;

TEST_CASE("lift subtracts l plus lambda0 on the diagonal", "[minors]") {
  MatrixFamily g = lift(presets::symmetric_example(), Scalar(2));
  CHECK(g.at(0, 0) == parse_poly("-l"));
  CHECK(g.at(1, 1) == parse_poly("-l - 2"));
  CHECK(g.at(0, 1) == parse_poly("x"));
}

TEST_CASE("memoized minors agree with the Leibniz oracle", "[minors]") {
  std::mt19937_64 rng(17);
  for (int s = 0; s < 6; ++s) {
    MatrixFamily f = s % 2 ? oracle::random_poly_family(3, rng)
                           : oracle::random_linear_family(SymmetryClass::hermitian, 4, rng);
    MatrixFamily g = lift(f, Scalar());
    auto M = minor_table(g);
    for (int i = 0; i < f.n; ++i)
      for (int j = 0; j < f.n; ++j) CHECK(M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == oracle::minor(g, i, j));
    std::vector<std::vector<Poly>> rows(static_cast<std::size_t>(f.n));
    for (int i = 0; i < f.n; ++i)
      for (int j = 0; j < f.n; ++j) rows[static_cast<std::size_t>(i)].push_back(g.at(i, j));
    CHECK(determinant(g) == oracle::leibniz_det(rows));
  }
}

TEST_CASE("minor ideal of spin-1 scaled", "[minors]") {
  MinorSystem ms = minor_ideal(build_spin1_scaled(), Scalar());
  CHECK(ms.generators.size() == 9);
  // M_13 of the lifted matrix: the lower-left 2x2 block.
  MatrixFamily g = lift(build_spin1_scaled(), Scalar());
  CHECK(ms.generators[2] == oracle::minor(g, 0, 2));
  CHECK(ms.generators[2] == parse_poly("x^2 + 2*i*x*y - y^2"));
  CHECK(ms.variables() == std::vector<Var>{Var::x, Var::y, Var::z, Var::l});
}

TEST_CASE("symmetric and diagonal classes keep fewer minors", "[minors]") {
  CHECK(minor_ideal(presets::symmetric_example(), Scalar()).generators.size() == 6);
  CHECK(minor_ideal(build_diagonal_linear({1, 2, 3}), Scalar()).generators.size() == 3);
}

TEST_CASE("cofactor relations vanish on random families", "[minors]") {
  std::mt19937_64 rng(23);
  for (int s = 0; s < 12; ++s) {
    MatrixFamily f = s % 3 == 0 ? oracle::random_poly_family(3, rng)
                   : s % 3 == 1 ? oracle::random_linear_family(SymmetryClass::general, 3, rng)
                                : oracle::random_linear_family(SymmetryClass::hermitian, 4, rng);
    CofactorReport r = check_cofactor_identities(f);
    CHECK(r.all_zero);
    CHECK(r.checked == static_cast<std::size_t>(2 * (f.n * f.n - 1)));
  }
}

TEST_CASE("realified generators of the Pauli family", "[minors]") {
  MinorSystem ms = realify(minor_ideal(presets::pauli(), Scalar()));
  REQUIRE(ms.realified);
  for (const auto& g : *ms.realified) CHECK(g.conj() == g);
  // Deleting (0,0) leaves -z - l; M_01 + M_10 = 2x; i (M_01 - M_10) = -2y.
  std::vector<Poly> want = {parse_poly("-z - l"), parse_poly("2*x"), parse_poly("-2*y"), parse_poly("z - l")};
  CHECK(*ms.realified == want);
  CHECK_THROWS_AS(realify(minor_ideal(presets::pauli(), Scalar::i_unit())), FamilyError);
}

TEST_CASE("base eigenvalue check is exact", "[minors]") {
  CHECK(check_base_eigenvalue(presets::symmetric_example(), Scalar()).is_eigenvalue);
  CHECK(check_base_eigenvalue(presets::symmetric_example(), Scalar(2)).is_eigenvalue);
  auto off = check_base_eigenvalue(presets::symmetric_example(), Scalar(1));
  CHECK_FALSE(off.is_eigenvalue);
  CHECK(off.distance == Catch::Approx(1.0));
}
