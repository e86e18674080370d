// Block decomposition around a degenerate eigenvalue and effective families.

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace weylbound;
using Catch::Approx;

namespace {
CMatrix random_hermitian(int n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  CMatrix E(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) E(i, j) = cd(N(rng), N(rng));
  E = (0.5 * (E + E.adjoint())).eval();
  return E * (scale / E.norm());
}
}  // namespace

TEST_CASE("decomposition reconstructs A with a block-off-diagonal generator", "[swchart]") {
  std::mt19937_64 rng(61);
  CMatrix A0 = CMatrix::Zero(4, 4);
  A0(2, 2) = 1.0;
  A0(3, 3) = -1.5;
  for (int s = 0; s < 10; ++s) {
    CMatrix A = A0 + random_hermitian(4, 0.04, rng);
    SWDecomposition D = sw_decompose(A0, 0.0, A);
    CHECK(D.k == 2);
    CHECK(D.residual <= 1e-10);
    CHECK((D.reconstruct() - A).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(D.S.topLeftCorner(2, 2).norm() < 1e-12);
    CHECK(D.S.bottomRightCorner(2, 2).norm() < 1e-12);
    CHECK(D.unitary_frame);
    CMatrix B = D.cluster_block();
    CHECK((B - B.adjoint()).norm() < 1e-10);
    auto eff = oracle::dense_eigenvalues(B), all = oracle::dense_eigenvalues(A);
    // The cluster eigenvalues of A are the middle two here.
    CHECK(std::abs(eff[0] - all[1]) < 1e-9);
    CHECK(std::abs(eff[1] - all[2]) < 1e-9);
  }
}

TEST_CASE("non-hermitian input uses a general frame", "[swchart]") {
  std::mt19937_64 rng(67);
  std::normal_distribution<double> N(0.0, 0.01);
  CMatrix A0 = CMatrix::Zero(3, 3);
  A0(2, 2) = 2.0;
  CMatrix A = A0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) += cd(N(rng), N(rng));
  SWDecomposition D = sw_decompose(A0, 0.0, A);
  CHECK((D.reconstruct() - A).cwiseAbs().maxCoeff() <= 1e-10);
  auto eff = oracle::dense_eigenvalues(D.cluster_block());
  auto all = oracle::dense_eigenvalues(A);
  for (const auto& e : eff) {
    double best = 1e9;
    for (const auto& a : all) best = std::min(best, std::abs(e - a));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("the Pauli family is its own effective family", "[swchart]") {
  EffectiveFamily E = effective_family(presets::pauli(), 0.0);
  auto h = E.rational_h();
  REQUIRE(h.size() == 3);
  CHECK(h[0] == parse_poly("x"));
  CHECK(h[1] == parse_poly("y"));
  CHECK(h[2] == parse_poly("z"));
}

TEST_CASE("second-order effective family of the symmetric example", "[swchart]") {
  EffectiveFamily E = effective_family(presets::symmetric_example(), 0.0);
  REQUIRE(E.k == 2);
  // Second-order perturbation theory: A_eff = -(1/2) v v^T with v = (x, y),
  // so h = (-xy/2, 0, (y^2 - x^2)/4) and tr A_eff = -(x^2 + y^2)/2.
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  for (int s = 0; s < 5; ++s) {
    double x = U(rng), y = U(rng);
    std::array<cd, kNumVars> pt{};
    pt[0] = x;
    pt[1] = y;
    CHECK(E.h[0].eval(pt).real() == Approx(-x * y / 2).margin(1e-6));
    CHECK(std::abs(E.h[1].eval(pt)) < 1e-6);
    CHECK(E.h[2].eval(pt).real() == Approx((y * y - x * x) / 4).margin(1e-6));
    CHECK(E.trace.eval(pt).real() == Approx(-(x * x + y * y) / 2).margin(1e-6));
  }
  auto h = E.rational_h();
  CHECK(h[0] == parse_poly("-1/2*x*y"));
  CHECK(h[1].is_zero_poly());
  CHECK(h[2] == parse_poly("1/4*y^2 - 1/4*x^2"));
}

TEST_CASE("effective family eigenvalues track the cluster", "[swchart]") {
  MatrixFamily f = presets::symmetric_example();
  EffectiveFamily E = effective_family(f, 0.0, {.order = 2});
  const double x = 0.01, y = -0.02;
  std::array<cd, kNumVars> pt{};
  pt[0] = x;
  pt[1] = y;
  CMatrix B(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) B(i, j) = E.entries[static_cast<std::size_t>(i * 2 + j)].eval(pt);
  auto eff = oracle::dense_eigenvalues(B);
  auto all = oracle::dense_eigenvalues(evaluate(f, std::vector<double>{x, y}));
  // Truncation error is fourth order in the parameters.
  CHECK(std::abs(eff[0] - all[0]) < 1e-6);
  CHECK(std::abs(eff[1] - all[1]) < 1e-6);
}
