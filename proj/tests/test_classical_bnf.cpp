#include <doctest.h>

#include "bnf/classical_bnf.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace bnf;

namespace {

const double kTheta = std::sqrt(2.0) - 1.0;

RotationData rot1() { return nonresonance_margin({kTheta}, 8); }

FTSeries cubic(double eps) {
  FTSeries h = quadratic_hamiltonian(rot1());
  FTSeries z3 = series::z(1, 0) * series::z(1, 0) * series::z(1, 0);
  h += Complex(eps) * (z3 + conjugate_symbol(z3));
  return h;
}

FTSeries nf_series(const NormalForm& nf) { return action_to_series(to_complex(nf.poly)); }

}  // namespace

TEST_CASE("resonant G needs no generator") {
  FTSeries G = series::z(1, 0) * series::zbar(1, 0) * series::tau(1);
  G *= Complex(0.7, 0.0);
  const HomologicalResult r = solve_homological_classical(G, rot1(), Bracket::poisson());
  CHECK(r.F.empty());
  CHECK((r.G1 + G).empty());
}

TEST_CASE("homological residual for z e^{it}") {
  const FTSeries G = series::z(1, 0) * series::fourier(1, 1);
  const HomologicalResult r = solve_homological_classical(G, rot1(), Bracket::poisson());
  const FTSeries res = apply_bracket(quadratic_hamiltonian(rot1()), r.F, Bracket::poisson()) - G - r.G1;
  CHECK(res.max_abs() <= 1e-14);
  CHECK(r.G1.empty());
  // {H0, z e^{it}} = i(theta - 1) z e^{it}.
  CHECK(r.min_divisor == doctest::Approx(1.0 - kTheta));
}

TEST_CASE("homological residuals on random G, both brackets") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const RotationData rot =
        n == 1 ? nonresonance_margin({kTheta}, 8) : nonresonance_margin({kTheta, std::sqrt(3.0) - 1.0}, 6);
    const int kappa = 3 + trial % 4;
    const FTSeries G = testing::random_series(rng, n, kappa, kappa, 5);
    for (const Bracket& br : {Bracket::poisson(), Bracket::moyal(4)}) {
      const HomologicalResult r = solve_homological_classical(G, rot, br);
      const FTSeries res = apply_bracket(quadratic_hamiltonian(rot), r.F, br) - G - r.G1;
      CHECK(res.max_abs() <= 1e-12);
      // G1 is minus the resonant part.
      CHECK((r.G1 + G.filter([](const MonomialKey& k) { return k.resonant(); })).max_abs() <= 1e-15);
    }
  }
}

TEST_CASE("resonant divisors are rejected") {
  // {H0, z^2 e^{it}} = i(2 theta - 1) z^2 e^{it}, zero at theta = 1/2.
  RotationData rot = scan_margin({0.5}, 2);
  const FTSeries G = series::z(1, 0) * series::z(1, 0) * series::fourier(1, 1);
  CHECK_THROWS_AS(solve_homological_classical(G, rot, Bracket::poisson()), ResonanceError);
}

TEST_CASE("H0 is already in normal form") {
  const BnfResult r = birkhoff_classical(quadratic_hamiltonian(rot1(), 0.25), rot1(), 6);
  CHECK(r.generators.empty());
  CHECK(r.nf.coeff(nf_key(1, {1})) == doctest::Approx(kTheta));
  CHECK(r.nf.tau_coefficient() == doctest::Approx(1.0));
  CHECK(r.nf.energy() == doctest::Approx(0.25));
  CHECK(r.nf.poly.size() == 3);
  CHECK(r.remainder.empty());
}

TEST_CASE("cubic perturbation: cubic removed, quartic correction scales as eps^2") {
  const BnfResult a = birkhoff_classical(cubic(0.1), rot1(), 4);
  const BnfResult b = birkhoff_classical(cubic(0.2), rot1(), 4);
  const double ca = a.nf.coeff(nf_key(1, {2}));
  const double cb = b.nf.coeff(nf_key(1, {2}));
  CHECK(ca != 0.0);
  CHECK(cb / ca == doctest::Approx(4.0).epsilon(1e-12));
  // Conjugated H has no cubic term left.
  const FTSeries conj = replay_generators(cubic(0.1), a.generators, Bracket::poisson(), 6);
  CHECK(conj.weight_slice(3).max_abs() <= 1e-14);
}

TEST_CASE("quartic resonant term: c (z zbar)^2 = 4 c p^2") {
  FTSeries h = quadratic_hamiltonian(rot1());
  const FTSeries zz = series::z(1, 0) * series::zbar(1, 0);
  h += Complex(0.3) * zz * zz;
  const BnfResult r = birkhoff_classical(h, rot1(), 6);
  CHECK(r.generators.empty());
  CHECK(r.nf.coeff(nf_key(1, {2})) == doctest::Approx(1.2));
}

TEST_CASE("semiclassical route at hbar order 0 equals the classical route") {
  const BnfResult c = birkhoff_classical(cubic(0.1), rot1(), 6);
  const BnfResult s = birkhoff_semiclassical(cubic(0.1), rot1(), 6, 0);
  CHECK(max_difference(c.nf.poly, s.nf.poly) <= 1e-13);
}

TEST_CASE("an hbar-weighted cubic term is removed by the semiclassical route") {
  FTSeries h = quadratic_hamiltonian(rot1());
  h += Complex(0.2) * series::hbar(1) * (series::z(1, 0) + series::zbar(1, 0));
  const BnfResult s = birkhoff_semiclassical(h, rot1(), 6, 2);
  REQUIRE_FALSE(s.generators.empty());
  const FTSeries conj = replay_generators(h, s.generators, Bracket::moyal(2), 8);
  CHECK(conj.weight_slice(3).max_abs() <= 1e-14);
  // -|c|^2 hbar^2 / theta from the second-order term.
  CHECK(s.nf.coeff(nf_key(1, {}, 0, 2)) == doctest::Approx(-0.04 / kTheta * 2.0).epsilon(1e-12));
}

TEST_CASE("processing order does not change the normal form") {
  const BnfResult ref = birkhoff_semiclassical(cubic(0.1), rot1(), 6, 2);
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    BnfOptions opts;
    opts.split_monomials = true;
    opts.shuffle_seed = seed;
    const BnfResult r = birkhoff_semiclassical(cubic(0.1), rot1(), 6, 2, opts);
    CHECK(max_difference(ref.nf.poly, r.nf.poly) <= 1e-10);
  }
}

TEST_CASE("generator and remainder orders") {
  std::mt19937_64 rng(32);
  FTSeries h = quadratic_hamiltonian(rot1());
  for (int w = 3; w <= 6; ++w) h += testing::realify(testing::random_series(rng, 1, w, w, 3).hbar_truncated(0));
  const BnfResult r = birkhoff_classical(h, rot1(), 6);
  for (const auto& g : r.generators) CHECK(vanishing_order(g.F) >= g.kappa);
  CHECK(vanishing_order(r.remainder) > 6);
  // Replaying the log gives the normal form plus the remainder.
  const FTSeries conj = replay_generators(h, r.generators, Bracket::poisson(), 8);
  CHECK((conj - nf_series(r.nf) - r.remainder).max_abs() <= 1e-12);
  for (const auto& g : r.generators) CHECK(is_real_symbol(g.F, 1e-12));
}

TEST_CASE("semiclassical generators respect the joint grading") {
  std::mt19937_64 rng(33);
  FTSeries h = quadratic_hamiltonian(rot1());
  for (int w = 3; w <= 6; ++w) h += testing::realify(testing::random_series(rng, 1, w, w, 3));
  const BnfResult r = birkhoff_semiclassical(h, rot1(), 6, 2);
  for (const auto& g : r.generators) CHECK(g.F.min_weight() >= g.kappa);
  CHECK(r.remainder.min_weight() > 6);
  const FTSeries conj = replay_generators(h, r.generators, Bracket::moyal(2), 8).hbar_truncated(2);
  CHECK((conj - nf_series(r.nf) - r.remainder).hbar_truncated(2).max_abs() <= 1e-12);
}

TEST_CASE("pure tau terms follow the tau policy") {
  FTSeries h = quadratic_hamiltonian(rot1());
  h += Complex(0.5) * series::tau(1) * series::tau(1);
  const BnfResult r = birkhoff_classical(h, rot1(), 6);
  CHECK(r.nf.coeff(nf_key(1, {0}, 2)) == doctest::Approx(0.5));
  BnfOptions strict;
  strict.tau_policy = TauPolicy::RequireFlattened;
  CHECK_THROWS_AS(birkhoff_classical(h, rot1(), 6, strict), InvalidInput);
}
