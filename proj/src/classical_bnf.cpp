#include "bnf/classical_bnf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace bnf {

FTSeries apply_bracket(const FTSeries& a, const FTSeries& b, const Bracket& br) {
  if (br.kind == Bracket::Kind::Poisson) return poisson_bracket(a, b);
  return moyal_bracket(a, b, br.hbar_order);
}

FTSeries quadratic_hamiltonian(const RotationData& rot, double energy, int max_weight) {
  const int n = rot.dim();
  FTSeries h0 = series::tau(n, max_weight);
  for (int i = 0; i < n; ++i) h0 += Complex(rot.theta[static_cast<std::size_t>(i)], 0.0) * series::p(n, i, max_weight);
  h0 += series::constant(n, Complex(energy, 0.0), max_weight);
  return h0;
}

namespace {

std::string describe(const MonomialKey& key) {
  std::ostringstream os;
  os << "mu=" << to_string(key.mu) << " nu=" << to_string(key.nu) << " m=" << key.m << " j=" << key.j
     << " k=" << key.k;
  return os.str();
}

// Eigenvalue of bracket(H0, .) on a single monomial, checked to be diagonal.
Complex ad_eigenvalue(const FTSeries& h0, const MonomialKey& key, const Bracket& br) {
  FTSeries mono(h0.dim());
  mono.add(key, Complex(1.0, 0.0));
  FTSeries image = apply_bracket(h0, mono, br);
  Complex lambda = image.coeff(key);
  if (image.size() > (lambda == Complex{} ? 0u : 1u))
    throw InvalidInput("H0 does not act diagonally on monomial " + describe(key));
  return lambda;
}

}  // namespace

HomologicalResult solve_homological_classical(const FTSeries& G, const RotationData& rot, const Bracket& br,
                                              const SolveOptions& opts) {
  if (G.dim() != rot.dim()) throw DimensionMismatch("series and rotation data differ in dimension");
  const FTSeries h0 = quadratic_hamiltonian(rot);
  HomologicalResult out{FTSeries(G.dim(), G.max_weight()), FTSeries(G.dim(), G.max_weight()), ActionPoly(G.dim()),
                        std::numeric_limits<double>::infinity(), {}};
  for (const auto& [key, c] : G.terms()) {
    if (key.resonant()) {
      out.G1.add(key, -c);
      continue;
    }
    const Complex lambda = ad_eigenvalue(h0, key, br);
    const double d = std::abs(lambda);
    out.min_divisor = std::min(out.min_divisor, d);
    if (d < opts.threshold)
      throw ResonanceError("small divisor " + std::to_string(d) + " at " + describe(key), key.mu - key.nu, key.m, d);
    if (d < opts.warn_below)
      out.warnings.push_back("near-resonant divisor " + std::to_string(d) + " at " + describe(key));
    out.F.add(key, c / lambda);
  }
  out.G1_action = resonant_to_action(out.G1);
  return out;
}

FTSeries lie_conjugate(const FTSeries& H, const FTSeries& F, const Bracket& br, int max_weight) {
  FTSeries sum = H.truncated(max_weight);
  if (F.empty()) return sum;
  if (F.min_weight() < 3)
    throw NonNilpotentError("generator has joint weight " + std::to_string(F.min_weight()) +
                            " < 3; the Lie series would not terminate on the truncation");
  FTSeries term = sum;
  for (int k = 1; !term.empty(); ++k) {
    term = apply_bracket(F, term, br).truncated(max_weight);
    term *= Complex(1.0 / k, 0.0);
    sum += term;
  }
  return sum;
}

FTSeries replay_generators(const FTSeries& H, const GeneratorLog& log, const Bracket& br, int max_weight) {
  FTSeries out = H.truncated(max_weight);
  for (const auto& g : log) out = lie_conjugate(out, g.F, br, max_weight);
  return out;
}

namespace {

double scale_of(const FTSeries& h) { return std::max(1.0, h.max_abs()); }

void validate_input(const FTSeries& H, const RotationData& rot, const BnfOptions& opts) {
  if (H.dim() != rot.dim()) throw DimensionMismatch("Hamiltonian and rotation data differ in dimension");
  const double tol = 1e-12 * scale_of(H);
  if (real_symbol_defect(H) > tol) throw InvalidInput("Hamiltonian is not a real symbol");
  const int n = H.dim();
  for (const auto& [key, c] : H.terms()) {
    const int w = key.weight();
    const bool pure_tau = total(key.mu) == 0 && total(key.nu) == 0 && key.m == 0;
    if (opts.tau_policy == TauPolicy::RequireFlattened && pure_tau && key.k == 0 && key.j >= 2)
      throw InvalidInput("tau^" + std::to_string(key.j) + " term present but the input is required to be flattened");
    if (w > 2) continue;
    if (key == series::key(n)) continue;                                // E
    if (pure_tau && key.j == 0 && key.k == 1) continue;                 // constant * hbar
    if (pure_tau && key.j == 1 && key.k == 0) {
      if (std::abs(c - Complex(1.0, 0.0)) > tol) throw InvalidInput("tau coefficient must be 1");
      continue;
    }
    bool is_p = key.m == 0 && key.j == 0 && key.k == 0 && key.mu == key.nu && total(key.mu) == 1;
    if (is_p) {
      int i = static_cast<int>(std::find(key.mu.begin(), key.mu.end(), 1) - key.mu.begin());
      double want = rot.theta[static_cast<std::size_t>(i)] / 2.0;
      if (std::abs(c - Complex(want, 0.0)) > tol)
        throw InvalidInput("coefficient of p_" + std::to_string(i) + " does not match theta_" + std::to_string(i));
      continue;
    }
    throw InvalidInput("quadratic part is not normalized: unexpected term " + describe(key));
  }
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    MultiIndex e = unit_index(n, i);
    if (std::abs(H.coeff(series::key(n, e, e)) - Complex(rot.theta[ui] / 2.0, 0.0)) > tol)
      throw InvalidInput("coefficient of p_" + std::to_string(i) + " does not match theta_" + std::to_string(i));
  }
  if (std::abs(H.coeff(series::key(n, {}, {}, 0, 1, 0)) - Complex(1.0, 0.0)) > tol)
    throw InvalidInput("tau coefficient must be 1");
}

BnfResult run_birkhoff(const FTSeries& H_in, const RotationData& rot, int order, const Bracket& br, Route route,
                       const BnfOptions& opts) {
  if (order < 2) throw InvalidInput("normal-form order must be at least 2");
  validate_input(H_in, rot, opts);
  const int work = opts.work_weight >= 0 ? std::max(opts.work_weight, order) : order + 2;
  const int kmax = br.kind == Bracket::Kind::Poisson ? 0 : br.hbar_order;
  FTSeries h = H_in.hbar_truncated(kmax).truncated(work);

  BnfResult result;
  std::mt19937_64 rng(opts.shuffle_seed);
  for (int kappa = 3; kappa <= order; ++kappa) {
    const FTSeries slice = h.weight_slice(kappa).filter([](const MonomialKey& key) { return !key.resonant(); });
    std::vector<FTSeries> pieces;
    if (opts.split_monomials) {
      std::vector<MonomialKey> keys;
      for (const auto& kv : slice.terms()) keys.push_back(kv.first);
      std::shuffle(keys.begin(), keys.end(), rng);
      for (const auto& key : keys) pieces.push_back(series::monomial(h.dim(), key, Complex(1.0, 0.0), work));
    } else {
      pieces.push_back(slice);
    }
    for (const auto& piece : pieces) {
      FTSeries g = piece;
      if (opts.split_monomials) {
        // Earlier conjugations in this sweep do not touch weight kappa, but re-read anyway.
        const MonomialKey& key = piece.terms().begin()->first;
        g = series::monomial(h.dim(), key, h.coeff(key), work);
      }
      HomologicalResult sol = solve_homological_classical(g, rot, br, opts.solve);
      for (auto& w : sol.warnings) result.warnings.push_back(std::move(w));
      if (sol.F.empty()) continue;
      h = lie_conjugate(h, sol.F, br, work);
      result.generators.push_back({kappa, sol.F});
    }
    const FTSeries left = h.weight_slice(kappa).filter([](const MonomialKey& key) { return !key.resonant(); });
    if (left.max_abs() > 1e-12 * scale_of(h))
      throw InvalidInput("sweep at weight " + std::to_string(kappa) + " left non-resonant terms");
  }

  FTSeries resonant = h.filter([order](const MonomialKey& key) { return key.resonant() && key.weight() <= order; });
  ActionPoly act = resonant_to_action(resonant);
  result.nf = NormalForm(real_part_checked(act, 1e-10 * scale_of(h)), route);
  // Lower weights hold only rounding residue of the sweeps (checked above).
  result.remainder = h.filter([order](const MonomialKey& key) { return key.weight() > order; });
  return result;
}

}  // namespace

BnfResult birkhoff_classical(const FTSeries& H, const RotationData& rot, int order, const BnfOptions& opts) {
  return run_birkhoff(H, rot, order, Bracket::poisson(), Route::Classical, opts);
}

BnfResult birkhoff_semiclassical(const FTSeries& H, const RotationData& rot, int order, int hbar_order,
                                 const BnfOptions& opts) {
  if (hbar_order < 0) throw InvalidInput("hbar_order must be non-negative");
  return run_birkhoff(H, rot, order, Bracket::moyal(hbar_order), Route::Semiclassical, opts);
}

}  // namespace bnf
