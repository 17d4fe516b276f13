#pragma once

#include "bnf/normal_form.hpp"
#include "bnf/trace_invariants.hpp"
#include "bnf/word_algebra.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace bnf {

/// Truncated Hermite (x) Fourier basis: mu_i <= hermite_cut, |nu| <= fourier_cut.
struct BasisWindow {
  int dim = 1;
  int hermite_cut = 40;
  int fourier_cut = 0;
  double hbar = 0.1;
  std::size_t budget = 4000;

  void validate() const;
  std::size_t size() const;
  /// Basis states in matrix order (mu lexicographic, then nu ascending).
  std::vector<BasisState> states() const;
  bool is_safe(const BasisState& s) const;
  /// Same window with the Hermite cut (and a nonzero Fourier cut) doubled.
  BasisWindow doubled() const;
};

Eigen::MatrixXcd assemble_matrix(const WordPoly& a, const BasisWindow& w);
/// Exact diagonal h((mu+1/2) hbar, nu hbar, hbar).
Eigen::MatrixXcd assemble_matrix(const NormalForm& h, const BasisWindow& w);

/// Largest |M - M^dagger|.
double hermitian_defect(const Eigen::MatrixXcd& m);

struct QuasiEigenvalue {
  double value = 0.0;
  /// Basis state carrying the largest weight of the eigenvector.
  BasisState label;
  /// |value - nearest eigenvalue of the doubled window|.
  double drift = 0.0;
};

struct SpectrumOptions {
  double drift_tolerance = 1e-10;
  /// Throw if an eigenvalue inside the energy window is labelled by an unsafe state;
  /// otherwise such eigenvalues are dropped.
  bool strict = true;
};

/// Eigenvalues in [lo, hi] whose labels lie in the safe region, checked
/// against the doubled window. Throws UnsafeWindowError on drift.
std::vector<QuasiEigenvalue> quasi_eigenpairs(const WordPoly& a, const BasisWindow& w, double lo, double hi,
                                              const SpectrumOptions& opts = {});
/// For each requested state, the eigenvalue whose eigenvector overlaps it most,
/// with drift measured by the same rule in the doubled window. Strict mode is
/// implied: unsafe states and drift above tolerance throw UnsafeWindowError.
std::vector<QuasiEigenvalue> tracked_levels(const WordPoly& a, const BasisWindow& w,
                                            const std::vector<BasisState>& levels, const SpectrumOptions& opts = {});
std::vector<double> quasi_eigenvalues(const WordPoly& a, const BasisWindow& w, double lo, double hi,
                                      const SpectrumOptions& opts = {});
std::vector<double> quasi_eigenvalues(const NormalForm& h, const BasisWindow& w, double lo, double hi);

struct SpectralEntry {
  double energy = 0.0;
  double weight = 1.0;
  /// True when the eigenvector is dominated by a state outside the safe region.
  bool boundary = false;
};

/// Plain spectrum with unit weights.
std::vector<SpectralEntry> unit_weights(const std::vector<double>& energies);

/// Full eigen-decomposition of a word with weights <psi_k| rho(P) |psi_k>,
/// rho a function of the oscillator actions (mu_i + 1/2) hbar.
std::vector<SpectralEntry> weighted_spectrum(const WordPoly& a, const BasisWindow& w,
                                             const std::function<double(const std::vector<double>&)>& rho);

/// Adds copies shifted by nu hbar for 0 < |nu| <= nu_max (t-independent operators
/// assembled with fourier_cut = 0).
std::vector<SpectralEntry> extend_fourier(const std::vector<SpectralEntry>& spectrum, double hbar, int nu_max);

/// Smooth cutoff of the actions: 1 for max p_i <= inner, 0 for max p_i >= outer.
std::function<double(const std::vector<double>&)> action_cutoff(double inner, double outer);

struct NumericTrace {
  Complex value;
  /// Sum of |weight phi| over boundary entries.
  double boundary_mass = 0.0;
  std::string quadrature;
};

/// sum_k w_k phi((E_k - E)/hbar) with phi from the bump by quadrature.
/// Throws CoverageError when boundary entries contribute more than floor.
NumericTrace numeric_trace(const std::vector<SpectralEntry>& spectrum, double E, double hbar, const GaussianBump& bump,
                           int l, double floor = 1e-12);

/// Coherent state e^{i x xi/2hbar} D(alpha)|0>, alpha_i = (x_i + i xi_i)/sqrt(2 hbar),
/// expanded through Hermite index cut. Throws UnsafeWindowError if the
/// discarded norm exceeds tail_tolerance.
StateVector coherent_state(const std::vector<double>& x, const std::vector<double>& xi, double hbar, int cut,
                           double tail_tolerance = 1e-14);

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 1e-8;
  /// Printed-convention variants are reported but do not gate.
  bool gating = true;
  bool pass() const { return !gating || residual <= tolerance; }
};

struct CoherentReport {
  std::vector<IdentityCheck> checks;
  bool pass() const;
  std::string to_text() const;
};

/// Rotation law, overlap and Wick closed form for e^{isP} on one degree of
/// freedom, plus the printed-phase variants as notes.
CoherentReport coherent_state_checks(const BasisWindow& w, double s, double x, double xi);

/// <phi_{x xi}| A |phi_{x xi}> computed in the basis.
Complex coherent_expectation(const WordPoly& a, const std::vector<double>& x, const std::vector<double>& xi,
                             double hbar, int cut);

}  // namespace bnf
