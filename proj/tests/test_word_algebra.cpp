#include <doctest.h>

#include "bnf/word_algebra.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace bnf;

namespace {

WordPoly W(int n, MultiIndex mu, MultiIndex nu, int m = 0, int j = 0, int k = 0, Complex c = 1.0) {
  return word::monomial(n, series::key(n, std::move(mu), std::move(nu), m, j, k), c);
}

ExactWordPoly EW(int n, MultiIndex mu, MultiIndex nu, int m = 0, int j = 0, int k = 0) {
  return word::monomial<GaussianRational>(n, series::key(n, std::move(mu), std::move(nu), m, j, k));
}

}  // namespace

TEST_CASE("a a+ = a+ a + hbar") {
  const auto prod = normal_order_product(EW(1, {0}, {1}), EW(1, {1}, {0}));
  CHECK(prod == EW(1, {1}, {1}) + EW(1, {0}, {0}, 0, 0, 1));
}

TEST_CASE("D_t e^{imt} = e^{imt} D_t + m hbar e^{imt}") {
  for (int m : {-3, 2}) {
    const auto prod = normal_order_product(EW(1, {0}, {0}, 0, 1), EW(1, {0}, {0}, m));
    ExactWordPoly want = EW(1, {0}, {0}, m, 1);
    want += GaussianRational(m) * EW(1, {0}, {0}, m, 0, 1);
    CHECK(prod == want);
  }
}

TEST_CASE("a (a+)^2 = (a+)^2 a + 2 hbar a+") {
  const auto prod = normal_order_product(EW(1, {0}, {1}), EW(1, {2}, {0}));
  CHECK(prod == EW(1, {2}, {1}) + GaussianRational(2) * EW(1, {1}, {0}, 0, 0, 1));
}

TEST_CASE("canonical commutation relations") {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto ai = word::a<GaussianRational>(2, i);
      const auto aj = word::a<GaussianRational>(2, j);
      const auto adj = word::adag<GaussianRational>(2, j);
      const auto c = commutator(ai, adj);
      CHECK(c == (i == j ? word::hbar<GaussianRational>(2) : ExactWordPoly(2)));
      CHECK(commutator(ai, aj).empty());
    }
}

TEST_CASE("commutator over i hbar") {
  std::mt19937_64 rng(41);
  const auto A = testing::random_exact_word(rng, 1, 1, 5, 4);
  CHECK(commutator_over_ihbar(A, A).empty());
  // [a+ a, a+] = hbar a+, divided by i hbar.
  const auto c = commutator_over_ihbar(EW(1, {1}, {1}), EW(1, {1}, {0}));
  CHECK(c == GaussianRational(0, -1) * EW(1, {1}, {0}));
  // Raw commutator equals i hbar times the result, exactly.
  for (int trial = 0; trial < 10; ++trial) {
    const auto X = testing::random_exact_word(rng, 1 + trial % 2, 1, 5, 4);
    const auto Y = testing::random_exact_word(rng, 1 + trial % 2, 1, 5, 4);
    auto back = normal_order_product(word::hbar<GaussianRational>(X.dim()), commutator_over_ihbar(X, Y));
    back *= GaussianRational(0, 1);
    CHECK(back == commutator(X, Y));
  }
}

TEST_CASE("grade law for commutators") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const int p = 3 + trial % 3;
    const int r = 3 + (trial / 3) % 3;
    const auto A = testing::random_exact_word(rng, n, p, p, 3);
    const auto B = testing::random_exact_word(rng, n, r, r, 3);
    const auto c = commutator_over_ihbar(A, B);
    if (!c.empty()) CHECK(wlg_grade(c) >= p + r - 2);
  }
}

TEST_CASE("adjoint") {
  CHECK(adjoint(word::a(1, 0)) == word::adag(1, 0));
  // adjoint(c e^{imt} D_t) = conj(c) e^{-imt} (D_t - m hbar).
  const Complex c(0.3, -1.2);
  const int m = 2;
  const WordPoly got = adjoint(W(1, {0}, {0}, m, 1, 0, c));
  const WordPoly want = W(1, {0}, {0}, -m, 1, 0, std::conj(c)) + W(1, {0}, {0}, -m, 0, 1, -double(m) * std::conj(c));
  CHECK((got - want).max_abs() <= 1e-15);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto A = testing::random_exact_word(rng, 1 + trial % 2, 1, 6, 5);
    CHECK(adjoint(adjoint(A)) == A);
    const auto B = testing::random_exact_word(rng, 1 + trial % 2, 1, 6, 5);
    CHECK(adjoint(normal_order_product(A, B)) == normal_order_product(adjoint(B), adjoint(A)));
  }
}

TEST_CASE("wlg grade") {
  CHECK(wlg_grade(W(1, {1}, {1})) == 2);
  CHECK(wlg_grade(word::dt(1)) == 2);
  CHECK(wlg_grade(W(1, {0}, {1}, 0, 0, 1)) == 3);
  CHECK(wlg_grade(WordPoly(1)) == kInfiniteOrder);
}

TEST_CASE("ladder action on basis states") {
  CHECK(apply_to_basis(word::a(1, 0), {{0}, 0}, 0.3).empty());
  const StateVector n3 = apply_to_basis(W(1, {1}, {1}), {{3}, 2}, 0.1);
  REQUIRE(n3.size() == 1);
  CHECK(std::abs(n3.at({{3}, 2}) - 0.3) < 1e-15);
  const StateVector x = apply_to_basis(word::a(1, 0) + word::adag(1, 0), {{1}, 0}, 0.5);
  REQUIRE(x.size() == 2);
  CHECK(std::abs(x.at({{0}, 0}) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(x.at({{2}, 0}) - 1.0) < 1e-15);
  const StateVector d = apply_to_basis(W(1, {0}, {0}, 2, 1), {{0}, -1}, 0.25);
  REQUIRE(d.size() == 1);
  CHECK(std::abs(d.at({{0}, 1}) + 0.25) < 1e-15);
}

TEST_CASE("matrix elements") {
  CHECK(matrix_element(word::constant(1, Complex(1.0)), {{4}, 0}, {{4}, 0}, 0.2) == Complex(1.0));
  CHECK(std::abs(matrix_element(W(1, {1}, {1}), {{3}, 0}, {{3}, 0}, 0.1) - 0.3) < 1e-15);
  const Complex up = matrix_element(word::adag(1, 0), {{4}, 0}, {{3}, 0}, 0.1);
  const Complex down = matrix_element(word::a(1, 0), {{3}, 0}, {{4}, 0}, 0.1);
  CHECK(std::abs(up - std::conj(down)) < 1e-15);
  std::mt19937_64 rng(44);
  const WordPoly A = testing::random_word(rng, 2, 1, 5, 6);
  const BasisState bra{{2, 1}, 1}, ket{{1, 3}, 0};
  const Complex lhs = matrix_element(A, bra, ket, 0.07);
  const Complex rhs = std::conj(matrix_element(adjoint(A), ket, bra, 0.07));
  CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("matrix elements of products factor through intermediate states") {
  std::mt19937_64 rng(45);
  const WordPoly A = testing::random_word(rng, 1, 1, 5, 5);
  const WordPoly B = testing::random_word(rng, 1, 1, 5, 5);
  const double hb = 0.13;
  const BasisState ket{{3}, 0};
  const StateVector Bk = apply_to_basis(B, ket, hb);
  const StateVector ABk = apply_to_vector(A, Bk, hb);
  const StateVector direct = apply_to_basis(normal_order_product(A, B), ket, hb);
  for (const auto& [s, c] : direct) {
    auto it = ABk.find(s);
    CHECK(std::abs(c - (it == ABk.end() ? Complex(0.0) : it->second)) < 1e-13);
  }
  for (const auto& [s, c] : ABk)
    if (!direct.count(s)) CHECK(std::abs(c) < 1e-13);
}

TEST_CASE("nonzero words act nontrivially on a small window") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const WordPoly A = testing::random_word(rng, 1, 1, 4, 3);
    if (A.empty()) continue;
    double best = 0.0;
    for (int mu = 0; mu <= 6; ++mu)
      for (int nu = -3; nu <= 3; ++nu) best = std::max(best, norm(apply_to_basis(A, {{mu}, nu}, 0.1)));
    CHECK(best > 1e-8);
  }
}

TEST_CASE("diagonal words to normal form") {
  const ActionPoly n = diagonal_to_normal_form(W(1, {1}, {1}));
  CHECK(n.coeff(nf_key(1, {1})) == Complex(1.0));
  CHECK(n.coeff(nf_key(1, {0}, 0, 1)) == Complex(-0.5));
  CHECK(n.size() == 2);
  // (p - hbar/2)(p - 3 hbar/2) = p^2 - 2 p hbar + 3/4 hbar^2.
  const ActionPoly n2 = diagonal_to_normal_form(W(1, {2}, {2}));
  CHECK(n2.coeff(nf_key(1, {2})) == Complex(1.0));
  CHECK(n2.coeff(nf_key(1, {1}, 0, 1)) == Complex(-2.0));
  CHECK(n2.coeff(nf_key(1, {0}, 0, 2)) == Complex(0.75));
  const ActionPoly d = diagonal_to_normal_form(word::dt(1));
  CHECK(d.coeff(nf_key(1, {0}, 1)) == Complex(1.0));
  CHECK(d.size() == 1);
}

TEST_CASE("diagonal normal form reproduces diagonal matrix elements") {
  std::mt19937_64 rng(47);
  const WordPoly A = testing::random_word(rng, 2, 1, 8, 12);
  const ActionPoly h = diagonal_to_normal_form(A);
  const double hb = 0.37;
  for (int m0 = 0; m0 <= 3; ++m0)
    for (int m1 = 0; m1 <= 2; ++m1)
      for (int nu = -2; nu <= 2; ++nu) {
        const BasisState s{{m0, m1}, nu};
        const Complex want = matrix_element(A, s, s, hb);
        const Complex got = h.evaluate({(m0 + 0.5) * hb, (m1 + 0.5) * hb}, nu * hb, hb);
        CHECK(std::abs(want - got) < 1e-12);
      }
  // word_from_action inverts it on diagonal words.
  const WordPoly diag = A.filter([](const MonomialKey& k) { return k.resonant(); });
  CHECK((word_from_action(h) - diag).max_abs() < 1e-12);
}

TEST_CASE("quadratic word acts diagonally with the shifted spectrum") {
  const WordPoly H0 = quadratic_word({0.4, 0.9}, 1.5);
  const StateVector v = apply_to_basis(H0, {{2, 1}, -1}, 0.2);
  REQUIRE(v.size() == 1);
  CHECK(std::abs(v.begin()->second - (0.4 * 2.5 * 0.2 + 0.9 * 1.5 * 0.2 - 0.2 + 1.5)) < 1e-14);
  CHECK(adjoint_defect(H0) == 0.0);
}

TEST_CASE("pretty printer") {
  const std::string s = pretty(W(1, {2}, {1}, 1, 1, 1, Complex(0.5, 0.0)));
  CHECK(s == "(0.5+0i)*hbar*e^{1it}*a1+^2*a1*Dt");
  CHECK(pretty(WordPoly(1)) == "0");
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(normal_order_product(word::a(1, 0), word::a(2, 0)), DimensionMismatch);
}
