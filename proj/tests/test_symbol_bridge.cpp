#include <doctest.h>

#include "bnf/classical_bnf.hpp"
#include "bnf/quantum_bnf.hpp"
#include "bnf/symbol_bridge.hpp"
#include "bnf/verification.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace bnf;

namespace {

const double kTheta = std::sqrt(2.0) - 1.0;

RadialSymbol radial(int n, std::initializer_list<std::pair<NFKey, double>> terms) {
  RadialSymbol out(n);
  for (const auto& [k, c] : terms) out.add(k, c);
  return out;
}

}  // namespace

TEST_CASE("heat map on simple symbols") {
  const FTSeries c = series::constant(1, Complex(2.5));
  CHECK(wick_from_weyl(c, 4) == c);
  // p -> p + hbar/2.
  const FTSeries wp = wick_from_weyl(series::p(1, 0), 4);
  CHECK((wp - series::p(1, 0) - Complex(0.5) * series::hbar(1)).max_abs() < 1e-15);
  const RadialSymbol rp = wick_from_weyl(radial(1, {{nf_key(1, {1}), 1.0}}), 4);
  CHECK(max_difference(rp, radial(1, {{nf_key(1, {1}), 1.0}, {nf_key(1, {}, 0, 1), 0.5}})) < 1e-15);
}

TEST_CASE("heat map round trip") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const FTSeries s = testing::random_series(rng, 1 + trial % 2, 0, 6, 8).hbar_truncated(0);
    CHECK((weyl_from_wick(wick_from_weyl(s, 6), 6) - s).max_abs() < 1e-13);
    CHECK((wick_from_weyl(weyl_from_wick(s, 6), 6) - s).max_abs() < 1e-13);
  }
}

TEST_CASE("Weyl symbol of functional calculus, closed forms") {
  const RadialSymbol one = radial(1, {{nf_key(1), 1.0}});
  CHECK(max_difference(weyl_of_functional_calculus(one, 6), one) == 0.0);
  const RadialSymbol p = radial(1, {{nf_key(1, {1}), 1.0}});
  CHECK(max_difference(weyl_of_functional_calculus(p, 6), p) == 0.0);
  const RadialSymbol p2 = radial(1, {{nf_key(1, {2}), 1.0}});
  CHECK(max_difference(weyl_of_functional_calculus(p2, 6),
                       radial(1, {{nf_key(1, {2}), 1.0}, {nf_key(1, {}, 0, 2), -0.25}})) == 0.0);
  // tau passes through untouched.
  const RadialSymbol t = radial(1, {{nf_key(1, {}, 3), 1.0}});
  CHECK(max_difference(weyl_of_functional_calculus(t, 6), t) == 0.0);
}

TEST_CASE("powers of P agree with iterated exact Moyal products") {
  const ExactFTSeries p = series::p<GaussianRational>(1, 0);
  ExactFTSeries acc = p;
  for (int r = 2; r <= 7; ++r) {
    acc = moyal_product(acc, p, 2 * r);
    const auto table = weyl_of_power(r);
    ExactFTSeries want(1);
    for (const auto& [rk, c] : table) {
      const auto [pr, k] = rk;
      Rational scale = c;
      for (int q = 0; q < pr; ++q) scale /= 2;
      want.add(series::key(1, {pr}, {pr}, 0, 0, k), GaussianRational(scale));
    }
    CHECK((acc - want).empty());
    for (const auto& [rk, c] : table) CHECK(rk.second % 2 == 0);
  }
}

TEST_CASE("multiplicativity across degrees of freedom") {
  const RadialSymbol f = radial(2, {{nf_key(2, {3, 0}), 0.7}, {nf_key(2, {1, 0}), -1.0}});
  const RadialSymbol g = radial(2, {{nf_key(2, {0, 2}), 1.3}, {nf_key(2, {0, 0}), 0.2}});
  const RadialSymbol lhs = weyl_of_functional_calculus(f * g, 8);
  const RadialSymbol rhs = weyl_of_functional_calculus(f, 8) * weyl_of_functional_calculus(g, 8);
  CHECK(max_difference(lhs, rhs.hbar_truncated(8)) < 1e-14);
}

TEST_CASE("diagonal values") {
  const NormalForm p(radial(1, {{nf_key(1, {1}), 1.0}}), Route::Quantum);
  const auto v = diagonal_values_check(p, 0.2, 2);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(0.1));
  CHECK(v[1] == doctest::Approx(0.3));
  CHECK(v[2] == doctest::Approx(0.5));
  const NormalForm c(radial(1, {{nf_key(1), 3.0}}), Route::Quantum);
  for (double x : diagonal_values_check(c, 0.7, 4)) CHECK(x == 3.0);
  const NormalForm p2(radial(1, {{nf_key(1, {2}), 1.0}}), Route::Quantum);
  const auto v2 = diagonal_values_check(p2, 1.0, 1);
  CHECK(v2[0] == doctest::Approx(0.25));
  CHECK(v2[1] == doctest::Approx(2.25));
}

TEST_CASE("diagonal values equal Hermite diagonal matrix elements of h(P)") {
  const NormalForm h(radial(1, {{nf_key(1, {1}), kTheta}, {nf_key(1, {3}), -0.4}, {nf_key(1, {1}, 0, 2), 0.9}}),
                     Route::Quantum);
  const WordPoly op = word_from_action(to_complex(h.poly));
  const auto v = diagonal_values_check(h, 0.15, 6);
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(matrix_element(op, {{k}, 0}, {{k}, 0}, 0.15) - v[k]) < 1e-12);
}

TEST_CASE("Weyl symbols of words") {
  const FTSeries s = weyl_symbol(word::a(1, 0));
  CHECK(std::abs(s.coeff(series::key(1, {1}, {0})) - 1.0 / std::sqrt(2.0)) < 1e-15);
  // a+ a = P - hbar/2.
  const FTSeries n = weyl_symbol(normal_order_product(word::adag(1, 0), word::a(1, 0)));
  CHECK((n - series::p(1, 0) + Complex(0.5) * series::hbar(1)).max_abs() < 1e-15);
  CHECK((weyl_symbol(word::dt(1)) - series::tau(1)).max_abs() == 0.0);
  // Product of words maps to the Moyal product of symbols.
  std::mt19937_64 rng(62);
  const WordPoly A = testing::random_word(rng, 1, 1, 4, 4);
  const WordPoly B = testing::random_word(rng, 1, 1, 4, 4);
  const FTSeries lhs = weyl_symbol(normal_order_product(A, B));
  const FTSeries rhs = moyal_product(weyl_symbol(A), weyl_symbol(B), 20);
  CHECK((lhs - rhs).max_abs() < 1e-13);
}

TEST_CASE("relating normal forms") {
  const NormalForm h0(radial(1, {{nf_key(1, {1}), kTheta}, {nf_key(1, {}, 1), 1.0}}), Route::Quantum);
  CHECK(max_difference(relate_normal_forms(h0, 2).poly, h0.poly) == 0.0);
  const NormalForm h(radial(1, {{nf_key(1, {2}), 0.8}}), Route::Quantum);
  const NormalForm rel = relate_normal_forms(h, 2);
  CHECK(rel.coeff(nf_key(1, {}, 0, 2)) == doctest::Approx(-0.2));
}

TEST_CASE("end to end: semiclassical H' from the quantum h") {
  const RotationData rot = nonresonance_margin({kTheta}, 6);
  const QuantumBnfResult q = birkhoff_quantum(anharmonic_word(0.1, 3), rot, 6);
  const BnfResult s = birkhoff_semiclassical(anharmonic_symbol(0.1, 3), rot, 6, 2);
  const RouteComparison cmp = compare_routes(q.h, s.nf, 2);
  CHECK(cmp.max_discrepancy <= 1e-10);
  CHECK(cmp.shift_by_hbar.at(0) <= 1e-12);
  CHECK(cmp.shift_by_hbar.at(1) <= 1e-12);
  CHECK(cmp.shift_by_hbar.at(2) > 1e-3);
  // Semiclassical hbar^2 constant = quantum constant - c_{p^2}/4 (values frozen from the quantum route).
  CHECK(s.nf.coeff(nf_key(1, {}, 0, 2)) ==
        doctest::Approx(q.h.coeff(nf_key(1, {}, 0, 2)) - q.h.coeff(nf_key(1, {2})) / 4.0).epsilon(1e-12));
}
