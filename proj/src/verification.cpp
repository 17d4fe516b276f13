#include "bnf/verification.hpp"

#include "bnf/classical_bnf.hpp"
#include "bnf/quantum_bnf.hpp"
#include "bnf/serialization.hpp"
#include "bnf/spectral_oracle.hpp"
#include "bnf/symbol_bridge.hpp"
#include "bnf/trace_invariants.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace bnf {

namespace {

const double kTheta1 = std::sqrt(2.0) - 1.0;
const double kTheta2 = std::sqrt(3.0) - 1.0;

double tol(const VerifyOptions& o, const std::string& key, double dflt) {
  auto it = o.tolerances.find(key);
  return it == o.tolerances.end() ? dflt : it->second;
}

std::string tol_text(const VerifyOptions& o, const std::string& key, const std::string& rel, double dflt) {
  const double v = tol(o, key, dflt);
  std::string s = rel + " " + format_double(v);
  if (o.tolerances.count(key)) s += " [override of " + format_double(dflt) + "]";
  return s;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runs f(i) for i < count on up to `threads` workers; results keep index order.
template <class F>
auto parallel_map(int count, int threads, F&& f) -> std::vector<decltype(f(0))> {
  using R = decltype(f(0));
  std::vector<R> out(static_cast<std::size_t>(count));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(i);
    return out;
  }
  for (int start = 0; start < count; start += threads) {
    std::vector<std::future<R>> jobs;
    for (int i = start; i < std::min(count, start + threads); ++i) jobs.push_back(std::async(std::launch::async, f, i));
    for (std::size_t q = 0; q < jobs.size(); ++q) out[static_cast<std::size_t>(start) + q] = jobs[q].get();
  }
  return out;
}

// Random key of exact weight kappa with |m| <= 2.
MonomialKey random_key(std::mt19937_64& rng, int n, int kappa) {
  std::uniform_int_distribution<int> mdist(-2, 2);
  MonomialKey key{zero_index(n), zero_index(n), mdist(rng), 0, 0};
  int left = kappa;
  key.k = std::uniform_int_distribution<int>(0, left / 2)(rng);
  left -= 2 * key.k;
  key.j = std::uniform_int_distribution<int>(0, left / 2)(rng);
  left -= 2 * key.j;
  std::uniform_int_distribution<int> slot(0, 2 * n - 1);
  for (int q = 0; q < left; ++q) {
    const int s = slot(rng);
    (s < n ? key.mu : key.nu)[static_cast<std::size_t>(s % n)] += 1;
  }
  return key;
}

// Basis states mu = 0..count-1, nu = 0 (n = 1).
std::vector<BasisState> low_levels(int count) {
  std::vector<BasisState> out;
  for (int mu = 0; mu < count; ++mu) out.push_back({{mu}, 0});
  return out;
}

Complex random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return {re, u(rng)};
}

void set_slope(CheckResult& r) {
  bool positive = !r.convergence.empty();
  for (const auto& [h, e] : r.convergence) positive = positive && e > 0;
  if (positive && r.convergence.size() >= 2) {
    r.has_slope = true;
    r.slope = fit_loglog_slope(r.convergence);
  }
}

}  // namespace

WordPoly anharmonic_word(double eps, int power) {
  const WordPoly x = word::a(1, 0) + word::adag(1, 0);
  WordPoly p = word::constant(1, Complex(1.0));
  for (int q = 0; q < power; ++q) p = normal_order_product(p, x);
  return quadratic_word({kTheta1}) + Complex(eps) * p;
}

FTSeries anharmonic_symbol(double eps, int power) {
  const FTSeries x = Complex(1.0 / std::sqrt(2.0)) * (series::z(1, 0) + series::zbar(1, 0));
  FTSeries p = series::constant(1, Complex(1.0));
  for (int q = 0; q < power; ++q) p = p * x;
  return quadratic_hamiltonian(scan_margin({kTheta1}, 1)) + Complex(eps) * p;
}

CheckResult check_homological_residuals(const VerifyOptions& opts) {
  Stopwatch sw;
  CheckResult r;
  r.id = "criterion-1";
  r.name = "homological residuals, 50 random G (classical and quantum)";
  r.metric = "max_residual";
  const double limit = tol(opts, "homological.residual", 1e-12);
  r.tolerance = tol_text(opts, "homological.residual", "<=", 1e-12) + ", runtime < 10 s";
  std::mt19937_64 rng(opts.seed);
  const RotationData rot1 = nonresonance_margin({kTheta1}, 6);
  const RotationData rot2 = nonresonance_margin({kTheta1, kTheta2}, 6);
  double worst_c = 0.0, worst_q = 0.0, min_div = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    const int n = trial % 2 ? 2 : 1;
    const int kappa = 3 + (trial / 2) % 4;
    const RotationData& rot = n == 1 ? rot1 : rot2;
    FTSeries G(n);
    WordPoly Gw(n);
    for (int q = 0; q < 5; ++q) {
      const MonomialKey key = random_key(rng, n, kappa);
      const Complex c = random_complex(rng);
      G.add(key, c);
      Gw.add(key, c);
    }
    const HomologicalResult hc = solve_homological_classical(G, rot, Bracket::poisson());
    const FTSeries rc = apply_bracket(quadratic_hamiltonian(rot), hc.F, Bracket::poisson()) - G - hc.G1;
    worst_c = std::max(worst_c, rc.max_abs());
    const QuantumHomologicalResult hq = solve_homological_quantum(Gw, rot);
    const WordPoly rq = commutator_over_ihbar(quadratic_word(rot.theta), hq.F) - Gw - hq.G1_word;
    worst_q = std::max(worst_q, rq.max_abs());
    min_div = std::min({min_div, hc.min_divisor, hq.min_divisor});
  }
  r.value = std::max(worst_c, worst_q);
  r.fields = {{"classical_max_residual", worst_c}, {"quantum_max_residual", worst_q}, {"min_divisor", min_div}};
  r.seconds = sw.seconds();
  r.pass = r.value <= limit && r.seconds < 10.0;
  return r;
}

CheckResult check_quantum_vs_oracle(const VerifyOptions& opts) {
  Stopwatch sw;
  CheckResult r;
  r.id = "criterion-2";
  r.name = "quantum normal form vs oracle quasi-eigenvalues, H0 + 0.1(a+a+)^3, L=6";
  r.metric = "fitted_exponent";
  const double drift_tol = tol(opts, "oracle.drift", 1e-10);
  const double band = tol(opts, "oracle.exponent_band", 1.0);
  r.tolerance = "3.5 +- " + format_double(band) + ", drift <= " + format_double(drift_tol) + ", runtime < 120 s";
  const WordPoly H = anharmonic_word(0.1, 3);
  const RotationData rot = nonresonance_margin({kTheta1}, 6);
  const QuantumBnfResult q = birkhoff_quantum(H, rot, 6);
  const std::vector<double> grid = {0.1, 0.05, 0.025};
  struct Point {
    double err = 0.0, drift = 0.0;
    double lowest = 0.0;
  };
  const auto points = parallel_map(static_cast<int>(grid.size()), opts.threads, [&](int i) {
    BasisWindow w;
    w.hermite_cut = 200;
    w.hbar = grid[static_cast<std::size_t>(i)];
    SpectrumOptions so;
    so.drift_tolerance = std::numeric_limits<double>::infinity();
    const auto ev = tracked_levels(H, w, low_levels(10), so);
    Point p;
    for (const auto& e : ev) {
      p.err = std::max(p.err, std::abs(e.value - q.h.eigenvalue(e.label.mu, e.label.nu, w.hbar)));
      p.drift = std::max(p.drift, e.drift);
    }
    // Spurious states of the unbounded cubic, for the report.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(assemble_matrix(H, w), Eigen::EigenvaluesOnly);
    p.lowest = es.eigenvalues()(0);
    return p;
  });
  double drift = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.convergence.emplace_back(grid[i], points[i].err);
    drift = std::max(drift, points[i].drift);
    r.fields.emplace_back("lowest_eigenvalue_hbar_" + format_double(grid[i]), points[i].lowest);
  }
  r.fields.emplace_back("max_drift_under_doubled_cut", drift);
  set_slope(r);
  r.value = r.slope;
  r.seconds = sw.seconds();
  const bool safe = drift <= drift_tol;
  r.pass = safe && r.has_slope && std::abs(r.slope - 3.5) <= band && r.seconds < 120.0;
  if (!safe) {
    std::ostringstream os;
    os << "UnsafeWindowError: the levels tracked from mu = 0..9 move by up to " << format_double(drift)
       << " when the Hermite cut is doubled. The cubic term makes H unbounded below: the barrier of the well is "
          "about 0.0164 above its bottom, below the ground-state energy theta hbar/2 at hbar = 0.1, so these levels "
          "are resonances rather than eigenvalues and the truncated matrices give no stable value for them. The "
          "lowest eigenvalues of the truncated matrices are spurious states at the truncation edge "
          "(lowest_eigenvalue_* fields).";
    r.detail = os.str();
  }
  return r;
}

namespace {

// Weyl symbol of h(P) by repeated Moyal products of the p_i.
RadialSymbol iterated_moyal(const RadialSymbol& h, int hbar_order) {
  const int n = h.dim();
  FTSeries acc(n);
  for (const auto& [key, c] : h.terms()) {
    FTSeries term = series::monomial(n, series::key(n, {}, {}, 0, key.s, key.k), Complex(c));
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < key.r[static_cast<std::size_t>(i)]; ++q)
        term = moyal_product(term, series::p(n, i), hbar_order);
    acc += term;
  }
  return real_part_checked(resonant_to_action(acc), 1e-12);
}

}  // namespace

CheckResult check_weyl_calculus(const VerifyOptions& opts) {
  Stopwatch sw;
  CheckResult r;
  r.id = "criterion-3";
  r.name = "Weyl functional calculus vs closed forms and iterated Moyal products";
  r.metric = "max_discrepancy";
  const double exact_tol = tol(opts, "weyl.exact", 1e-12);
  const double oracle_tol = tol(opts, "weyl.oracle", 1e-10);
  r.tolerance = "closed forms <= " + format_double(exact_tol) + ", oracle <= " + format_double(oracle_tol) +
                ", runtime < 10 s";
  constexpr int kOrder = 8;

  RadialSymbol p1(1);
  p1.add(nf_key(1, {1}), 1.0);
  const double d_p = max_difference(weyl_of_functional_calculus(p1, kOrder), p1);
  RadialSymbol p2(1);
  p2.add(nf_key(1, {2}), 1.0);
  RadialSymbol want2(1);
  want2.add(nf_key(1, {2}), 1.0);
  want2.add(nf_key(1, {}, 0, 2), -0.25);
  const double d_p2 = max_difference(weyl_of_functional_calculus(p2, kOrder), want2);

  std::mt19937_64 rng(opts.seed + 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, odd = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    RadialSymbol h(n);
    MultiIndex r0 = zero_index(n);
    std::function<void(int, int)> fill = [&](int i, int left) {
      if (i == n) {
        h.add({r0, 0, 0}, u(rng));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        r0[static_cast<std::size_t>(i)] = v;
        fill(i + 1, left - v);
      }
      r0[static_cast<std::size_t>(i)] = 0;
    };
    fill(0, 4);
    const RadialSymbol w = weyl_of_functional_calculus(h, kOrder);
    worst = std::max(worst, max_difference(w, iterated_moyal(h, kOrder)));
    for (const auto& [key, c] : w.terms())
      if (key.k % 2) odd = std::max(odd, std::abs(c));
  }
  r.value = std::max({d_p, d_p2, worst});
  r.fields = {{"p_to_p", d_p}, {"p2_to_p2_minus_hbar2_over_4", d_p2}, {"vs_iterated_moyal", worst},
              {"largest_odd_hbar_coefficient", odd}};
  r.seconds = sw.seconds();
  r.pass = d_p <= exact_tol && d_p2 <= exact_tol && odd <= exact_tol && worst <= oracle_tol && r.seconds < 10.0;
  return r;
}

CheckResult check_route_equivalence(const VerifyOptions& opts) {
  Stopwatch sw;
  CheckResult r;
  r.id = "criterion-4";
  r.name = "route equivalence: Weyl(h_quantum) vs semiclassical H', weight 6, hbar order 2";
  r.metric = "max_discrepancy";
  const double limit = tol(opts, "routes.discrepancy", 1e-10);
  r.tolerance = tol_text(opts, "routes.discrepancy", "<=", 1e-10) + ", runtime < 60 s";
  const RotationData rot = nonresonance_margin({kTheta1}, 6);
  const WordPoly Hw = anharmonic_word(0.1, 3);
  const FTSeries Hs = anharmonic_symbol(0.1, 3);
  const double symbol_gap = (weyl_symbol(Hw) - Hs).max_abs();
  const BnfResult sc = birkhoff_semiclassical(Hs, rot, 6, 2);
  const QuantumBnfResult q = birkhoff_quantum(Hw, rot, 6);
  const RouteComparison cmp = compare_routes(q.h, sc.nf, 2);
  const double low_shift = std::max(cmp.shift_by_hbar.at(0), cmp.shift_by_hbar.at(1));
  r.value = cmp.max_discrepancy;
  r.fields = {{"weyl_symbol_vs_series_input", symbol_gap},
              {"shift_hbar0", cmp.shift_by_hbar.at(0)},
              {"shift_hbar1", cmp.shift_by_hbar.at(1)},
              {"shift_hbar2", cmp.shift_by_hbar.at(2)}};
  r.seconds = sw.seconds();
  r.pass = cmp.max_discrepancy <= limit && symbol_gap <= limit && low_shift <= limit && r.seconds < 60.0;
  return r;
}

CheckResult check_trace_round_trip(const VerifyOptions& opts) {
  Stopwatch sw;
  CheckResult r;
  r.id = "criterion-5";
  r.name = "trace round trip, |r|+s <= 4, l = 1..6, M = 4";
  r.metric = "max_relative_error";
  const double limit = tol(opts, "trace.relative", 1e-8);
  const double cond_limit = tol(opts, "trace.condition", 1e8);
  r.tolerance = tol_text(opts, "trace.relative", "<=", 1e-8) + ", condition < " + format_double(cond_limit) +
                ", runtime < 30 s";
  std::mt19937_64 rng(opts.seed + 5);
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::bernoulli_distribution sign(0.5);
  const RotationData rot = nonresonance_margin({kTheta1}, 4);
  constexpr int M = 4;
  double worst = 0.0, cond = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    RadialSymbol c(1);
    c.add(nf_key(1, {1}), kTheta1);
    c.add(nf_key(1, {}, 1), 1.0);
    std::vector<std::pair<NFKey, double>> truth;
    for (int d = 2; d <= M; ++d)
      for (int s = 0; s <= d; ++s) {
        const double v = (sign(rng) ? -1.0 : 1.0) * mag(rng);
        truth.push_back({nf_key(1, {d - s}, s), v});
        c.add(truth.back().first, v);
      }
    const double shift = 0.2 * (sign(rng) ? -1.0 : 1.0) * mag(rng);
    truth.push_back({nf_key(1, {}, 0, 1), shift});
    c.add(truth.back().first, shift);
    GaussianBump bump;
    std::vector<TestFunctionJet> jets;
    for (int l = 1; l <= 6; ++l) jets.push_back(bump.jet(l, 2 * M));
    TraceExpansion tr = forward_trace_expansion(NormalForm(c, Route::Trace), jets, M);
    tr.hbar_shift = 0.0;
    const InversionResult inv = invert_trace_expansion(tr, rot, M);
    for (const auto& rep : inv.reports) cond = std::max(cond, rep.condition);
    for (const auto& [k, v] : truth) worst = std::max(worst, std::abs(inv.nf.coeff(k) - v) / std::abs(v));
  }
  r.value = worst;
  r.fields = {{"max_condition_number", cond}};
  r.seconds = sw.seconds();
  r.pass = worst <= limit && cond < cond_limit && r.seconds < 30.0;
  return r;
}

namespace {

struct TracePoint {
  double err = 0.0;
  double boundary = 0.0;
  std::string failure;
};

// |rho-weighted trace - sum_{m<=2} d^m hbar^m| for one hbar.
TracePoint trace_gap(const std::vector<SpectralEntry>& spectrum, const TraceExpansion& tr, const GaussianBump& bump,
                     double hbar, double E) {
  TracePoint p;
  try {
    const NumericTrace nt = numeric_trace(extend_fourier(spectrum, hbar, 40), E, hbar, bump, 1, 1e-10);
    p.boundary = nt.boundary_mass;
    const Complex pred = tr.entries.at({1, 0}) + hbar * tr.entries.at({1, 1}) + hbar * hbar * tr.entries.at({1, 2});
    p.err = std::abs(nt.value - pred);
  } catch (const CoverageError& e) {
    p.failure = e.what();
    p.boundary = e.leak();
  }
  return p;
}

constexpr double kRhoInner = 0.01;
constexpr double kRhoOuter = 0.1;

}  // namespace

CheckResult check_trace_regression(const VerifyOptions& opts) {
  Stopwatch sw;
  CheckResult r;
  r.id = "criterion-6";
  r.name = "numeric trace of the oracle spectrum vs d^0 + hbar d^1 + hbar^2 d^2, hbar = 2^-4..2^-7";
  r.metric = "fitted_exponent";
  const double min_slope = tol(opts, "trace_regression.exponent", 2.5);
  r.tolerance = ">= " + format_double(min_slope) + ", residual constant within a factor 3, runtime < 300 s";
  const WordPoly H = anharmonic_word(0.1, 3);
  const RotationData rot = nonresonance_margin({kTheta1}, 6);
  const QuantumBnfResult q = birkhoff_quantum(H, rot, 6);
  const GaussianBump bump;
  const TraceExpansion tr = forward_trace_expansion(q.h, {bump.jet(1, 12)}, 3);
  const auto rho = action_cutoff(kRhoInner, kRhoOuter);
  const std::vector<int> exps = {4, 5, 6, 7};
  const auto points = parallel_map(static_cast<int>(exps.size()), opts.threads, [&](int i) {
    const double hb = std::ldexp(1.0, -exps[static_cast<std::size_t>(i)]);
    BasisWindow w;
    w.hbar = hb;
    w.hermite_cut = static_cast<int>(4.0 * kRhoOuter / hb) + 40;
    std::vector<SpectralEntry> sp;
    for (const auto& e : weighted_spectrum(H, w, rho))
      if (e.weight > 1e-300) sp.push_back(e);
    return trace_gap(sp, tr, bump, hb, 0.0);
  });
  std::string failure;
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const double hb = std::ldexp(1.0, -exps[i]);
    if (!points[i].failure.empty()) failure = points[i].failure;
    r.convergence.emplace_back(hb, points[i].err);
    r.fields.emplace_back("boundary_mass_hbar_" + format_double(hb), points[i].boundary);
    const double c = points[i].err / (hb * hb * hb);
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  set_slope(r);
  r.value = r.slope;
  r.fields.emplace_back("residual_constant_spread", cmax / cmin);
  r.seconds = sw.seconds();
  r.pass = failure.empty() && r.has_slope && r.slope >= min_slope && cmax / cmin <= 3.0 && r.seconds < 300.0;
  std::ostringstream os;
  os << "trace weighted by rho(P), rho = 1 for p <= " << kRhoInner << " and 0 for p >= " << kRhoOuter << ". ";
  if (!failure.empty()) os << "CoverageError: " << failure << ". ";
  if (!r.pass)
    os << "At hbar = 2^-4 no oscillator level lies inside the region where the normal form and the cutoff are "
          "valid (the normal-form frequency vanishes near p = 0.148 and the cubic barrier sits at 0.0164), so the "
          "cutoff error dominates the O(hbar^3) remainder on this grid.";
  r.detail = os.str();
  return r;
}

namespace {

using EW = ExactWordPoly;

EW random_exact_word(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coeff(-3, 3), terms(1, 3), grade(0, 4);
  EW w(n);
  const int t = terms(rng);
  for (int q = 0; q < t; ++q) {
    MonomialKey key = random_key(rng, n, grade(rng));
    key.m = std::uniform_int_distribution<int>(-1, 1)(rng);
    w.add(key, GaussianRational(Rational(coeff(rng)), Rational(coeff(rng))));
  }
  return w;
}

// Norm bound C_p |mu hbar|^{p/2} with C_p from the word's coefficients.
double norm_bound_constant(const WordPoly& a, int p, double hbar) {
  double c = 0.0;
  for (const auto& [key, v] : a.terms()) {
    double f = std::abs(v) * std::pow(2.0, 0.5 * (key.weight() - p));
    for (int x : key.mu) f *= std::pow(1.0 + 2.0 * x * hbar, 0.5 * x);
    c += f;
  }
  return c;
}

}  // namespace

CheckResult check_algebra_invariants(const VerifyOptions& opts) {
  Stopwatch sw;
  CheckResult r;
  r.id = "criterion-7";
  r.name = "word algebra invariants on 100 random words (exact arithmetic) and the norm bound";
  r.metric = "violations";
  r.tolerance = "0 exact failures, norm bound slack <= 1e-12, runtime < 30 s";
  std::mt19937_64 rng(opts.seed + 7);
  int ring = 0, ccr = 0, adj = 0, jacobi = 0, leibniz = 0, grade = 0;
  for (int i = 0; i < 2; ++i) {
    const EW a = word::a<GaussianRational>(2, i), ad = word::adag<GaussianRational>(2, i);
    if (!(commutator(a, ad) == word::hbar<GaussianRational>(2))) ++ccr;
    if (!(commutator(a, word::adag<GaussianRational>(2, 1 - i)) == EW(2))) ++ccr;
  }
  const EW one = word::constant<GaussianRational>(2, GaussianRational(1));
  for (int trial = 0; trial < 100; ++trial) {
    const EW A = random_exact_word(rng, 2), B = random_exact_word(rng, 2), C = random_exact_word(rng, 2);
    const EW AB = normal_order_product(A, B);
    if (!(normal_order_product(AB, C) == normal_order_product(A, normal_order_product(B, C)))) ++ring;
    if (!(normal_order_product(A, B + C) == AB + normal_order_product(A, C))) ++ring;
    if (!(normal_order_product(A + B, C) == normal_order_product(A, C) + normal_order_product(B, C))) ++ring;
    if (!(normal_order_product(one, A) == A) || !(normal_order_product(A, one) == A)) ++ring;
    if (!(adjoint(adjoint(A)) == A)) ++adj;
    if (!(adjoint(AB) == normal_order_product(adjoint(B), adjoint(A)))) ++adj;
    const EW jac = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) + commutator(C, commutator(A, B));
    if (!jac.empty()) ++jacobi;
    const EW jq = commutator_over_ihbar(A, commutator_over_ihbar(B, C)) +
                  commutator_over_ihbar(B, commutator_over_ihbar(C, A)) +
                  commutator_over_ihbar(C, commutator_over_ihbar(A, B));
    if (!jq.empty()) ++jacobi;
    if (!(commutator(A, normal_order_product(B, C)) ==
          normal_order_product(commutator(A, B), C) + normal_order_product(B, commutator(A, C))))
      ++leibniz;
    const EW cab = commutator_over_ihbar(A, B);
    if (!cab.empty() && wlg_grade(cab) < wlg_grade(A) + wlg_grade(B) - 2) ++grade;
    if (!AB.empty() && wlg_grade(AB) < wlg_grade(A) + wlg_grade(B)) ++grade;
  }

  // Norm bound on states with |mu hbar| in [0.5, 2], two values of hbar.
  std::mt19937_64 rng2(opts.seed + 8);
  double slack = 0.0;
  std::vector<double> fitted;
  for (int trial = 0; trial < 100; ++trial) {
    const WordPoly A = random_exact_word(rng2, 1).to_complex();
    if (A.empty()) continue;
    const int p = wlg_grade(A);
    for (double hbar : {0.02, 0.01}) {
      const double cp = norm_bound_constant(A, p, hbar);
      double ratio = 0.0;
      for (int mu = 0; mu * hbar <= 2.0; ++mu)
        for (int nu = -2; nu <= 2; ++nu) {
          const double size = (mu + std::abs(nu)) * hbar;
          if (size < 0.5 || size > 2.0) continue;
          const double nrm = norm(apply_to_basis(A, {{mu}, nu}, hbar));
          const double bound = cp * std::pow(size, 0.5 * p);
          slack = std::max(slack, (nrm - bound) / bound);
          ratio = std::max(ratio, nrm / std::pow(size, 0.5 * p));
        }
      if (trial == 0) fitted.push_back(ratio);
    }
  }
  const int violations = ring + ccr + adj + jacobi + leibniz + grade;
  r.value = violations;
  r.fields = {{"ring_axioms", static_cast<double>(ring)},  {"canonical_commutator", static_cast<double>(ccr)},
              {"adjoint", static_cast<double>(adj)},       {"jacobi", static_cast<double>(jacobi)},
              {"leibniz", static_cast<double>(leibniz)},   {"grade_law", static_cast<double>(grade)},
              {"norm_bound_max_relative_excess", slack}};
  if (fitted.size() == 2) {
    r.fields.emplace_back("fitted_C_p_hbar_0.02", fitted[0]);
    r.fields.emplace_back("fitted_C_p_hbar_0.01", fitted[1]);
  }
  r.seconds = sw.seconds();
  r.pass = violations == 0 && slack <= 1e-12 && r.seconds < 30.0;
  return r;
}

std::vector<CheckResult> supplementary_checks(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  {
    Stopwatch sw;
    CheckResult r;
    r.id = "supplement-quartic";
    r.gating = false;
    r.name = "quantum normal form vs oracle on H0 + 0.05(a+a+)^4, L=6";
    r.metric = "fitted_exponent";
    r.tolerance = "in [2.5, 4.5], drift <= 1e-10";
    const WordPoly H = anharmonic_word(0.05, 4);
    const QuantumBnfResult q = birkhoff_quantum(H, nonresonance_margin({kTheta1}, 6), 6);
    double drift = 0.0;
    std::string failure;
    for (double hb : {0.1, 0.05, 0.025}) {
      BasisWindow w;
      w.hermite_cut = 60;
      w.hbar = hb;
      try {
        double err = 0.0;
        for (const auto& e : tracked_levels(H, w, low_levels(10))) {
          err = std::max(err, std::abs(e.value - q.h.eigenvalue(e.label.mu, 0, hb)));
          drift = std::max(drift, e.drift);
        }
        r.convergence.emplace_back(hb, err);
      } catch (const UnsafeWindowError& e) {
        failure = e.what();
      }
    }
    set_slope(r);
    r.value = r.slope;
    r.fields = {{"max_drift", drift}};
    r.detail = failure;
    r.seconds = sw.seconds();
    r.pass = failure.empty() && r.has_slope && r.slope >= 2.5 && r.slope <= 4.5;
    out.push_back(r);
  }
  {
    Stopwatch sw;
    CheckResult r;
    r.id = "supplement-trace-nf";
    r.gating = false;
    r.name = "forward trace expansion vs rho-weighted trace of the exact normal-form spectrum";
    r.metric = "fitted_exponent";
    r.tolerance = ">= 2.5 on hbar = 2^-9..2^-12";
    const RotationData rot = nonresonance_margin({kTheta1}, 6);
    const QuantumBnfResult q = birkhoff_quantum(anharmonic_word(0.1, 3), rot, 6);
    const GaussianBump bump;
    const TraceExpansion tr = forward_trace_expansion(q.h, {bump.jet(1, 12)}, 3);
    const auto rho = action_cutoff(kRhoInner, kRhoOuter);
    const std::vector<int> exps = {9, 10, 11, 12};
    const auto points = parallel_map(static_cast<int>(exps.size()), opts.threads, [&](int i) {
      const double hb = std::ldexp(1.0, -exps[static_cast<std::size_t>(i)]);
      std::vector<SpectralEntry> sp;
      for (int mu = 0; (mu + 0.5) * hb < kRhoOuter; ++mu)
        sp.push_back({q.h.eigenvalue({mu}, 0, hb), rho({(mu + 0.5) * hb}), false});
      return trace_gap(sp, tr, bump, hb, 0.0);
    });
    for (std::size_t i = 0; i < exps.size(); ++i) r.convergence.emplace_back(std::ldexp(1.0, -exps[i]), points[i].err);
    set_slope(r);
    r.value = r.slope;
    r.seconds = sw.seconds();
    r.pass = r.has_slope && r.slope >= 2.5;
    out.push_back(r);
  }
  {
    Stopwatch sw;
    CheckResult r;
    r.id = "supplement-coherent";
    r.gating = false;
    r.name = "coherent-state identities (s=0.7, hbar=0.1, x=0.3, xi=0.1) and Wick symbols of words";
    r.metric = "max_residual";
    r.tolerance = "<= 1e-8";
    BasisWindow w;
    w.hermite_cut = 120;
    w.hbar = 0.1;
    const CoherentReport rep = coherent_state_checks(w, 0.7, 0.3, 0.1);
    double worst = 0.0;
    for (const auto& c : rep.checks) {
      r.fields.emplace_back((c.gating ? "" : "note: ") + c.name, c.residual);
      if (c.gating) worst = std::max(worst, c.residual);
    }
    std::mt19937_64 rng(opts.seed + 11);
    double wick = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      WordPoly A(1);
      for (int q = 0; q < 3; ++q) {
        MonomialKey key = random_key(rng, 1, 2 + trial % 4);
        key.m = 0;
        key.j = 0;
        A.add(key, random_complex(rng));
      }
      const Complex direct = coherent_expectation(A, {0.3}, {0.1}, 0.1, 120);
      const Complex sym = evaluate(wick_from_weyl(weyl_symbol(A), 64), {Complex(0.3, 0.1)}, 0.0, 0.0, 0.1);
      wick = std::max(wick, std::abs(direct - sym));
    }
    r.fields.emplace_back("coherent expectation vs wick_from_weyl(weyl_symbol)", wick);
    r.value = std::max(worst, wick);
    r.seconds = sw.seconds();
    r.pass = rep.pass() && wick <= 1e-8;
    out.push_back(r);
  }
  return out;
}

Report run_all(const VerifyOptions& opts) {
  Report rep;
  rep.title = "acceptance suite (seed " + std::to_string(opts.seed) + ")";
  using Fn = CheckResult (*)(const VerifyOptions&);
  const Fn checks[] = {check_homological_residuals, check_quantum_vs_oracle, check_weyl_calculus,
                       check_route_equivalence,     check_trace_round_trip,  check_trace_regression,
                       check_algebra_invariants};
  int index = 1;
  for (Fn f : checks) {
    try {
      rep.checks.push_back(f(opts));
    } catch (const Error& e) {
      CheckResult r;
      r.id = "criterion-" + std::to_string(index);
      r.name = "aborted";
      r.detail = e.what();
      rep.checks.push_back(r);
    }
    ++index;
  }
  if (opts.supplementary)
    for (auto& c : supplementary_checks(opts)) rep.checks.push_back(std::move(c));
  return rep;
}

}  // namespace bnf
