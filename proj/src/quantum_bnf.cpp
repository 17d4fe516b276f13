#include "bnf/quantum_bnf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bnf {

namespace {

std::string describe(const MonomialKey& key) {
  std::ostringstream os;
  os << "creation=" << to_string(key.mu) << " annihilation=" << to_string(key.nu) << " m=" << key.m
     << " j=" << key.j << " k=" << key.k;
  return os.str();
}

Complex ad_eigenvalue(const WordPoly& h0, const MonomialKey& key) {
  const WordPoly mono = word::monomial(h0.dim(), key);
  const WordPoly image = commutator_over_ihbar(h0, mono);
  const Complex lambda = image.coeff(key);
  if (image.size() > (lambda == Complex{} ? 0u : 1u))
    throw InvalidInput("H0 does not act diagonally on word " + describe(key));
  return lambda;
}

double scale_of(const WordPoly& w) { return std::max(1.0, w.max_abs()); }

void validate_quantum_input(const WordPoly& H, const RotationData& rot, double sym_tol) {
  if (H.dim() != rot.dim()) throw DimensionMismatch("Hamiltonian and rotation data differ in dimension");
  const double tol = sym_tol * scale_of(H);
  if (adjoint_defect(H) > tol) throw InvalidInput("Hamiltonian is not adjoint-symmetric");
  const int n = H.dim();
  for (const auto& [key, c] : H.terms()) {
    if (key.weight() > 2) continue;
    const bool scalar = total(key.mu) == 0 && total(key.nu) == 0 && key.m == 0;
    if (scalar && key.j == 0) continue;  // E and the hbar constant
    if (scalar && key.j == 1 && key.k == 0) {
      if (std::abs(c - Complex(1.0, 0.0)) > tol) throw InvalidInput("D_t coefficient must be 1");
      continue;
    }
    if (key.m == 0 && key.j == 0 && key.k == 0 && key.mu == key.nu && total(key.mu) == 1) continue;
    throw InvalidInput("grade-2 part is not sum theta_i P_i + D_t: unexpected word " + describe(key));
  }
  for (int i = 0; i < n; ++i) {
    MultiIndex e = unit_index(n, i);
    if (std::abs(H.coeff(series::key(n, e, e)) - Complex(rot.theta[static_cast<std::size_t>(i)], 0.0)) > tol)
      throw InvalidInput("coefficient of a+_" + std::to_string(i) + " a_" + std::to_string(i) +
                         " does not match theta_" + std::to_string(i));
  }
  if (std::abs(H.coeff(series::key(n, {}, {}, 0, 1, 0)) - Complex(1.0, 0.0)) > tol)
    throw InvalidInput("D_t coefficient must be 1");
}

}  // namespace

QuantumHomologicalResult solve_homological_quantum(const WordPoly& G, const RotationData& rot,
                                                   const SolveOptions& opts) {
  if (G.dim() != rot.dim()) throw DimensionMismatch("word and rotation data differ in dimension");
  const WordPoly h0 = quadratic_word(rot.theta);
  QuantumHomologicalResult out{WordPoly(G.dim(), G.max_weight()), WordPoly(G.dim(), G.max_weight()),
                               ActionPoly(G.dim()), std::numeric_limits<double>::infinity(), {}};
  for (const auto& [key, c] : G.terms()) {
    if (key.resonant()) {
      out.G1_word.add(key, -c);
      continue;
    }
    const Complex lambda = ad_eigenvalue(h0, key);
    const double d = std::abs(lambda);
    out.min_divisor = std::min(out.min_divisor, d);
    if (d < opts.threshold)
      throw ResonanceError("small divisor " + std::to_string(d) + " at " + describe(key), key.mu - key.nu, key.m, d);
    if (d < opts.warn_below)
      out.warnings.push_back("near-resonant divisor " + std::to_string(d) + " at " + describe(key));
    out.F.add(key, c / lambda);
  }
  out.G1 = diagonal_to_normal_form(out.G1_word);
  return out;
}

WordPoly exp_conjugate(const WordPoly& H, const WordPoly& F, int max_grade) {
  WordPoly sum = H.truncated(max_grade);
  if (F.empty()) return sum;
  if (wlg_grade(F) < 3)
    throw NonNilpotentError("generator has grade " + std::to_string(wlg_grade(F)) +
                            " < 3; the conjugation series would not terminate on the truncation");
  WordPoly term = sum;
  for (int k = 1; !term.empty(); ++k) {
    term = commutator_over_ihbar(F.truncated(max_grade), term).truncated(max_grade);
    term *= Complex(1.0 / k, 0.0);
    sum += term;
  }
  return sum;
}

WordPoly replay_quantum_generators(const WordPoly& H, const std::vector<WordPoly>& gens, int max_grade) {
  WordPoly out = H.truncated(max_grade);
  for (const auto& f : gens) out = exp_conjugate(out, f, max_grade);
  return out;
}

QuantumBnfResult birkhoff_quantum(const WordPoly& H, const RotationData& rot, int L, const QuantumBnfOptions& opts) {
  if (L < 2) throw InvalidInput("quantum normal-form order must be at least 2");
  validate_quantum_input(H, rot, opts.symmetry_tolerance);
  const int work = opts.work_grade >= 0 ? std::max(opts.work_grade, L) : L + 2;
  WordPoly h = H.truncated(work);
  QuantumBnfResult result;
  for (int kappa = 3; kappa <= L; ++kappa) {
    const WordPoly g = h.weight_slice(kappa).filter([](const MonomialKey& key) { return !key.resonant(); });
    QuantumHomologicalResult sol = solve_homological_quantum(g, rot, opts.solve);
    for (auto& w : sol.warnings) result.warnings.push_back(std::move(w));
    if (sol.F.empty()) continue;
    h = exp_conjugate(h, sol.F, work);
    result.generators.push_back(sol.F);
    const WordPoly left = h.weight_slice(kappa).filter([](const MonomialKey& key) { return !key.resonant(); });
    if (left.max_abs() > 1e-12 * scale_of(h))
      throw InvalidInput("sweep at grade " + std::to_string(kappa) + " left off-diagonal words");
  }
  const WordPoly diag = h.filter([L](const MonomialKey& key) { return key.resonant() && key.weight() <= L; });
  result.h = NormalForm(real_part_checked(diagonal_to_normal_form(diag), 1e-10 * scale_of(h)), Route::Quantum);
  // Lower grades hold only rounding residue of the sweeps (checked above).
  result.remainder = h.filter([L](const MonomialKey& key) { return key.weight() > L; });
  return result;
}

}  // namespace bnf
