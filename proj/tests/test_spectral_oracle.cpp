#include <doctest.h>

#include "bnf/spectral_oracle.hpp"
#include "bnf/symbol_bridge.hpp"
#include "bnf/verification.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>

using namespace bnf;

namespace {

const double kTheta = std::sqrt(2.0) - 1.0;

BasisWindow window(int cut, double hbar, int fc = 0) {
  BasisWindow w;
  w.hermite_cut = cut;
  w.hbar = hbar;
  w.fourier_cut = fc;
  return w;
}

}  // namespace

TEST_CASE("H0 matrix is the shifted oscillator diagonal") {
  const Eigen::MatrixXcd m = assemble_matrix(quadratic_word({1.0}, 0.25), window(2, 1.0));
  REQUIRE(m.rows() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(m(i, i) - (i + 0.5 + 0.25)) < 1e-15);
  CHECK((m - Eigen::MatrixXcd(m.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("position operator is tridiagonal with sqrt amplitudes") {
  const Eigen::MatrixXcd m = assemble_matrix(word::a(1, 0) + word::adag(1, 0), window(2, 1.0));
  CHECK(std::abs(m(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(m(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(m(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(m(0, 2)) == 0.0);
  CHECK(std::abs(m(0, 0)) == 0.0);
}

TEST_CASE("symmetric words assemble to Hermitian matrices") {
  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 5; ++trial) {
    const WordPoly A = testing::symmetrize(testing::random_word(rng, 1, 1, 6, 8));
    CHECK(hermitian_defect(assemble_matrix(A, window(12, 0.2, 3))) <= 1e-14);
  }
}

TEST_CASE("window bookkeeping") {
  const BasisWindow w = window(5, 0.1, 2);
  CHECK(w.size() == 30);
  CHECK(w.states().size() == 30);
  CHECK(w.states().front() == BasisState{{0}, -2});
  CHECK(w.is_safe({{2}, 1}));
  CHECK_FALSE(w.is_safe({{3}, 0}));
  CHECK_FALSE(w.is_safe({{0}, 2}));
  BasisWindow big = window(100, 0.1);
  big.dim = 2;
  CHECK_THROWS_AS(big.validate(), BudgetExceeded);
}

TEST_CASE("assembling is multiplicative on the interior block") {
  std::mt19937_64 rng(82);
  const WordPoly A = testing::random_word(rng, 1, 1, 4, 5);
  const WordPoly B = testing::random_word(rng, 1, 1, 4, 5);
  const BasisWindow w = window(30, 0.1, 4);
  const Eigen::MatrixXcd prod = assemble_matrix(A, w) * assemble_matrix(B, w);
  const Eigen::MatrixXcd direct = assemble_matrix(normal_order_product(A, B), w);
  const auto states = w.states();
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < states.size(); ++j)
      if (states[i].mu[0] <= 20 && states[j].mu[0] <= 20 && std::abs(states[i].nu) <= 1 && std::abs(states[j].nu) <= 1)
        worst = std::max(worst, std::abs(prod(Eigen::Index(i), Eigen::Index(j)) - direct(Eigen::Index(i), Eigen::Index(j))));
  CHECK(worst < 1e-13);
}

TEST_CASE("quasi-eigenvalues of H0 on the exact grid") {
  const BasisWindow w = window(40, 0.1);
  const auto ev = quasi_eigenvalues(quadratic_word({kTheta}, 0.3), w, 0.25, 0.8);
  std::vector<double> want;
  for (int mu = 0; mu <= 20; ++mu)
    for (int nu = 0; nu <= 0; ++nu) {
      const double e = kTheta * (mu + 0.5) * 0.1 + nu * 0.1 + 0.3;
      if (e >= 0.25 && e <= 0.8) want.push_back(e);
    }
  std::sort(want.begin(), want.end());
  REQUIRE(ev.size() == want.size());
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - want[i]) < 1e-13);
  // With Fourier modes every energy window is reached by edge modes nu = -fc at irrational theta.
  CHECK_THROWS_AS(quasi_eigenvalues(quadratic_word({kTheta}, 0.3), window(20, 0.1, 4), 0.25, 0.45), UnsafeWindowError);
}

TEST_CASE("unsafe windows are refused") {
  const BasisWindow w = window(10, 0.1);
  CHECK_THROWS_AS(quasi_eigenvalues(quadratic_word({kTheta}), w, 0.0, 10.0), UnsafeWindowError);
  CHECK_THROWS_AS(tracked_levels(quadratic_word({kTheta}), w, {{{8}, 0}}), UnsafeWindowError);
}

TEST_CASE("confining quartic levels are stable under cut doubling") {
  const WordPoly H = anharmonic_word(0.05, 4);
  const auto ev = quasi_eigenpairs(H, window(60, 0.05), -1.0, 0.2);
  REQUIRE_FALSE(ev.empty());
  for (const auto& q : ev) CHECK(q.drift <= 1e-10);
  const auto lv = tracked_levels(H, window(60, 0.05), {{{0}, 0}, {{3}, 0}});
  CHECK(lv[0].value < lv[1].value);
  CHECK(lv[0].drift <= 1e-10);
}

TEST_CASE("cubic levels drift: the operator is unbounded below") {
  const WordPoly H = anharmonic_word(0.1, 3);
  SpectrumOptions so;
  CHECK_THROWS_AS(tracked_levels(H, window(100, 0.1), {{{0}, 0}}, so), UnsafeWindowError);
}

TEST_CASE("numeric trace basics") {
  const GaussianBump b;
  CHECK(numeric_trace({}, 0.0, 0.1, b, 1).value == Complex{});
  // One state at E: phi(0) = (1/2 pi) int phi_hat.
  const NumericTrace one = numeric_trace(unit_weights({0.7}), 0.7, 0.1, b, 1);
  double integral = 0.0;
  const int N = 200000;
  const double h = 2.0 * b.support / N;
  for (int q = 1; q < N; ++q) integral += b.profile(-b.support + q * h);
  integral *= h / (2.0 * std::numbers::pi);
  CHECK(std::abs(one.value - integral) < 1e-10);
  CHECK(one.quadrature == b.describe());
}

TEST_CASE("numeric trace of the oscillator against the csc closed form") {
  // sum_mu phi(theta (mu + 1/2)) = (1/2 pi) int phi_hat(t) (i/2) csc(t theta/2) dt for phi_hat near 2 pi l.
  // At l = 2 the pole t = 2 pi/theta sits inside the support, so only l = 1 has a smooth kernel.
  const GaussianBump b;
  for (int l = 1; l <= 1; ++l) {
    std::vector<double> energies;
    for (int mu = 0; mu < 2000; ++mu) energies.push_back(kTheta * (mu + 0.5));
    const Complex got = numeric_trace(unit_weights(energies), 0.0, 1.0, b, l).value;
    Complex want = 0.0;
    const int N = 200000;
    const double h = 2.0 * b.support / N;
    for (int q = 1; q < N; ++q) {
      const double u = -b.support + q * h;
      const double t = 2.0 * std::numbers::pi * l + u;
      want += b.profile(u) * Complex(0.0, 0.5) / std::sin(t * kTheta / 2.0);
    }
    want *= h / (2.0 * std::numbers::pi);
    CHECK(std::abs(got - want) < 1e-9);
  }
}

TEST_CASE("boundary leakage is reported") {
  const GaussianBump b;
  std::vector<SpectralEntry> sp = {{0.0, 1.0, true}};
  CHECK_THROWS_AS(numeric_trace(sp, 0.0, 0.1, b, 1), CoverageError);
}

TEST_CASE("weighted spectra and Fourier copies") {
  const WordPoly H = anharmonic_word(0.05, 4);
  const auto all = weighted_spectrum(H, window(40, 0.05), [](const std::vector<double>&) { return 1.0; });
  for (const auto& e : all) CHECK(std::abs(e.weight - 1.0) < 1e-12);
  const auto rho = action_cutoff(0.2, 0.5);
  CHECK(rho({0.1}) == 1.0);
  CHECK(rho({0.6}) == 0.0);
  CHECK(rho({0.35}) > 0.0);
  CHECK(rho({0.35}) < 1.0);
  const auto cut = weighted_spectrum(H, window(40, 0.05), rho);
  for (const auto& e : cut) {
    CHECK(e.weight >= -1e-14);
    CHECK(e.weight <= 1.0 + 1e-14);
  }
  const auto ext = extend_fourier(unit_weights({1.0}), 0.1, 2);
  REQUIRE(ext.size() == 5);
  CHECK(ext.front().energy == doctest::Approx(0.8));
  CHECK(ext.back().energy == doctest::Approx(1.2));
}

TEST_CASE("coherent states") {
  const StateVector c = coherent_state({0.3}, {0.1}, 0.1, 120);
  CHECK(std::abs(norm(c) - 1.0) < 1e-12);
  CHECK_THROWS_AS(coherent_state({3.0}, {1.0}, 0.1, 20), UnsafeWindowError);
}

TEST_CASE("coherent-state identities") {
  const CoherentReport r0 = coherent_state_checks(window(120, 0.1), 0.0, 0.3, 0.1);
  CHECK(r0.pass());
  const CoherentReport r = coherent_state_checks(window(120, 0.1), 0.7, 0.3, 0.1);
  CHECK(r.pass());
  bool has_note = false;
  for (const auto& c : r.checks) {
    if (c.gating) CHECK(c.residual <= 1e-8);
    else has_note = true;
    if (c.name == "self overlap") CHECK(c.residual < 1e-12);
  }
  CHECK(has_note);
  CHECK(r.to_text().find("PASS") != std::string::npos);
}

TEST_CASE("coherent expectations are Wick symbols") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 5; ++trial) {
    const WordPoly A = testing::random_word(rng, 1, 1, 4, 4).filter([](const MonomialKey& k) { return k.m == 0 && k.j == 0; });
    const double hb = 0.05, x = 0.4, xi = -0.2;
    const Complex got = coherent_expectation(A, {x}, {xi}, hb, 150);
    const Complex want = evaluate(wick_from_weyl(weyl_symbol(A), 12), {Complex(x, xi)}, 0.0, 0.0, hb);
    CHECK(std::abs(got - want) < 1e-10);
  }
}

TEST_CASE("normal-form operators assemble as diagonals") {
  RadialSymbol p(1);
  p.add(nf_key(1, {1}), kTheta);
  p.add(nf_key(1, {2}), 0.3);
  p.add(nf_key(1, {}, 1), 1.0);
  const NormalForm h(p, Route::Quantum);
  const BasisWindow w = window(6, 0.2, 1);
  const Eigen::MatrixXcd m = assemble_matrix(h, w);
  const auto states = w.states();
  for (std::size_t i = 0; i < states.size(); ++i)
    CHECK(std::abs(m(Eigen::Index(i), Eigen::Index(i)) - h.eigenvalue(states[i].mu, states[i].nu, 0.2)) < 1e-15);
  const double top = h.eigenvalue({3}, 0, 0.2);
  BasisWindow w0 = window(6, 0.2);
  const auto ev = quasi_eigenvalues(h, w0, -10.0, top);
  REQUIRE(ev.size() == 4);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(ev[std::size_t(k)] - h.eigenvalue({k}, 0, 0.2)) < 1e-15);
  CHECK_THROWS_AS(quasi_eigenvalues(h, w0, -10.0, 10.0), UnsafeWindowError);
}
