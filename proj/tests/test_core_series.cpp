#include <doctest.h>

#include "bnf/core_series.hpp"
#include "bnf/serialization.hpp"
#include "test_support.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace bnf;
using bnf::testing::random_exact_series;
using bnf::testing::random_series;

namespace {

FTSeries h0(double theta) {
  FTSeries h = series::tau(1);
  h += Complex(theta) * series::p(1, 0);
  return h;
}

}  // namespace

TEST_CASE("bracket of a series with itself vanishes") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const FTSeries A = random_series(rng, 1 + trial % 2, 1, 5, 6);
    CHECK(poisson_bracket(A, A).max_abs() <= 1e-14);
  }
}

TEST_CASE("tau against a Fourier mode") {
  for (int m : {-2, 1, 3}) {
    const FTSeries b = poisson_bracket(series::tau(1), series::fourier(1, m));
    // Sign fixed by {A,B} = ... + A_t B_tau - A_tau B_t.
    CHECK(b.size() == 1);
    CHECK(std::abs(b.coeff(series::key(1, {0}, {0}, m)) - Complex(0, -m)) < 1e-15);
  }
}

TEST_CASE("quadratic Hamiltonian rotates z") {
  const double theta = std::sqrt(2.0) - 1.0;
  const FTSeries b = poisson_bracket(h0(theta), series::z(1, 0));
  CHECK(b.size() == 1);
  CHECK(std::abs(b.coeff(series::key(1, {1}, {0})) - Complex(0, theta)) < 1e-15);
  const FTSeries bb = poisson_bracket(h0(theta), series::zbar(1, 0));
  CHECK(std::abs(bb.coeff(series::key(1, {0}, {1})) - Complex(0, -theta)) < 1e-15);
}

TEST_CASE("Moyal product with one is the identity") {
  std::mt19937_64 rng(12);
  const FTSeries A = random_series(rng, 2, 1, 6, 8);
  const FTSeries one = series::constant(2, Complex(1.0));
  CHECK(moyal_product(A, one, 6) == A);
  CHECK(moyal_product(one, A, 6) == A);
}

TEST_CASE("p # p = p^2 - hbar^2/4") {
  const FTSeries pp = moyal_product(series::p(1, 0), series::p(1, 0), 4);
  FTSeries want = series::p(1, 0) * series::p(1, 0);
  want += series::constant(1, Complex(-0.25)) * series::hbar(1) * series::hbar(1);
  CHECK((pp - want).max_abs() <= 1e-15);
}

TEST_CASE("vanishing order") {
  CHECK(vanishing_order(FTSeries(1)) == kInfiniteOrder);
  CHECK(vanishing_order(series::z(1, 0) * series::zbar(1, 0)) == 2);
  CHECK(vanishing_order(series::tau(1) * series::z(1, 0)) == 3);
  CHECK(vanishing_order(series::hbar(1) * series::z(1, 0)) == 1);
}

TEST_CASE("Jacobi identity, exact") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 2;
    const auto A = random_exact_series(rng, n, 1, 4, 3);
    const auto B = random_exact_series(rng, n, 1, 4, 3);
    const auto C = random_exact_series(rng, n, 1, 4, 3);
    const auto J = poisson_bracket(A, poisson_bracket(B, C)) + poisson_bracket(B, poisson_bracket(C, A)) +
                   poisson_bracket(C, poisson_bracket(A, B));
    CHECK(J.empty());
  }
}

TEST_CASE("Leibniz rule, exact") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 2;
    const auto A = random_exact_series(rng, n, 1, 4, 3);
    const auto B = random_exact_series(rng, n, 1, 4, 3);
    const auto C = random_exact_series(rng, n, 1, 4, 3);
    const auto lhs = poisson_bracket(A, B * C);
    const auto rhs = poisson_bracket(A, B) * C + B * poisson_bracket(A, C);
    CHECK((lhs - rhs).empty());
  }
}

TEST_CASE("Moyal product is associative, exact") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + trial % 2;
    const auto A = random_exact_series(rng, n, 1, 3, 3);
    const auto B = random_exact_series(rng, n, 1, 3, 3);
    const auto C = random_exact_series(rng, n, 1, 3, 3);
    // Degrees are small enough that order 20 keeps every term.
    const auto lhs = moyal_product(moyal_product(A, B, 20), C, 20);
    const auto rhs = moyal_product(A, moyal_product(B, C, 20), 20);
    CHECK((lhs - rhs).empty());
  }
}

TEST_CASE("Moyal bracket reduces to the Poisson bracket at hbar^0") {
  std::mt19937_64 rng(16);
  const auto A = random_exact_series(rng, 1, 1, 5, 4).hbar_truncated(0);
  const auto B = random_exact_series(rng, 1, 1, 5, 4).hbar_truncated(0);
  CHECK((moyal_bracket(A, B, 0) - poisson_bracket(A, B)).empty());
  // Odd-order terms only: the hbar^1 slice is zero for hbar-free inputs.
  const auto full = moyal_bracket(A, B, 4);
  CHECK(full.filter([](const MonomialKey& k) { return k.k % 2 == 1; }).empty());
}

TEST_CASE("Moyal bracket matches the raw commutator of Moyal products") {
  std::mt19937_64 rng(17);
  const auto A = random_exact_series(rng, 2, 1, 4, 3);
  const auto B = random_exact_series(rng, 2, 1, 4, 3);
  const auto comm = moyal_product(A, B, 20) - moyal_product(B, A, 20);
  // i hbar times the bracket.
  auto scaled = moyal_bracket(A, B, 20) * series::hbar<GaussianRational>(2);
  scaled *= GaussianRational(0, 1);
  CHECK((comm - scaled).empty());
}

TEST_CASE("real symbols stay real under brackets") {
  std::mt19937_64 rng(18);
  const FTSeries A = bnf::testing::realify(random_series(rng, 2, 1, 5, 6));
  const FTSeries B = bnf::testing::realify(random_series(rng, 2, 1, 5, 6));
  REQUIRE(is_real_symbol(A));
  CHECK(is_real_symbol(poisson_bracket(A, B)));
  CHECK(is_real_symbol(moyal_bracket(A, B, 4)));
  CHECK(is_real_symbol(A * B));
}

TEST_CASE("evaluation is multiplicative") {
  std::mt19937_64 rng(19);
  const FTSeries A = random_series(rng, 2, 1, 4, 5);
  const FTSeries B = random_series(rng, 2, 1, 4, 5);
  const std::vector<Complex> zs = {{0.3, -0.2}, {0.1, 0.4}};
  const Complex lhs = evaluate(A * B, zs, 0.7, 0.2, 0.05);
  const Complex rhs = evaluate(A, zs, 0.7, 0.2, 0.05) * evaluate(B, zs, 0.7, 0.2, 0.05);
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("truncation drops keys above max weight") {
  FTSeries a(1, 3);
  a.add(series::key(1, {2}, {1}), 1.0);
  a.add(series::key(1, {2}, {2}), 1.0);
  a.add(series::key(1, {1}, {0}, 0, 0, 1), 1.0);
  CHECK(a.size() == 2);
  CHECK(a.coeff(series::key(1, {2}, {2})) == Complex(0.0));
  const FTSeries prod = series::z(1, 0, 3) * series::z(1, 0, 3) * series::z(1, 0, 3) * series::z(1, 0, 3);
  CHECK(prod.empty());
}

TEST_CASE("mismatched dimensions are rejected") {
  CHECK_THROWS_AS(series::z(1, 0) + series::z(2, 0), DimensionMismatch);
  CHECK_THROWS_AS(poisson_bracket(series::z(1, 0), series::z(2, 0)), DimensionMismatch);
}

TEST_CASE("JSON and CSV round trips are bit-exact") {
  std::mt19937_64 rng(20);
  FTSeries A = random_series(rng, 2, 1, 6, 12);
  A.add(series::key(2, {1, 0}, {0, 0}), Complex(0.1, 1.0 / 3.0));
  A.add(series::key(2, {0, 1}, {0, 0}, -3), Complex(-5e-300, 1e300));
  const FTSeries back = series_from_json(nlohmann::json::parse(to_json(A).dump()), 2);
  CHECK(back == A);
  std::ostringstream os;
  write_csv(os, A);
  std::istringstream is(os.str());
  CHECK(series_from_csv(is, 2) == A);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-310, 6.02214076e23, 0.0}) CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}
