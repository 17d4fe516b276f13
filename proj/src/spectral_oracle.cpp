#include "bnf/spectral_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace bnf {

namespace {

const Complex kI{0.0, 1.0};

std::map<BasisState, Eigen::Index> index_of(const std::vector<BasisState>& states) {
  std::map<BasisState, Eigen::Index> out;
  for (std::size_t i = 0; i < states.size(); ++i) out.emplace(states[i], static_cast<Eigen::Index>(i));
  return out;
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

}  // namespace

void BasisWindow::validate() const {
  if (dim < 1) throw InvalidInput("basis dimension must be positive");
  if (hermite_cut < 0 || fourier_cut < 0) throw InvalidInput("basis cuts must be non-negative");
  if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
  if (size() > budget)
    throw BudgetExceeded("basis of size " + std::to_string(size()) + " exceeds budget " + std::to_string(budget));
}

std::size_t BasisWindow::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(hermite_cut + 1);
  return n * static_cast<std::size_t>(2 * fourier_cut + 1);
}

std::vector<BasisState> BasisWindow::states() const {
  std::vector<BasisState> out;
  MultiIndex mu(static_cast<std::size_t>(dim), 0);
  while (true) {
    for (int nu = -fourier_cut; nu <= fourier_cut; ++nu) out.push_back({mu, nu});
    int i = dim - 1;
    for (; i >= 0; --i) {
      if (mu[static_cast<std::size_t>(i)] < hermite_cut) {
        ++mu[static_cast<std::size_t>(i)];
        break;
      }
      mu[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) return out;
  }
}

bool BasisWindow::is_safe(const BasisState& s) const {
  for (int m : s.mu)
    if (2 * m > hermite_cut) return false;
  return 2 * std::abs(s.nu) <= fourier_cut;
}

BasisWindow BasisWindow::doubled() const {
  BasisWindow out = *this;
  out.hermite_cut = 2 * hermite_cut + 1;
  out.fourier_cut = 2 * fourier_cut;
  out.budget = std::max(budget, out.size());
  return out;
}

Eigen::MatrixXcd assemble_matrix(const WordPoly& a, const BasisWindow& w) {
  w.validate();
  if (a.dim() != w.dim) throw DimensionMismatch("word and basis window differ in dimension");
  const auto states = w.states();
  const auto index = index_of(states);
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col)
    for (const auto& [s, c] : apply_to_basis(a, states[static_cast<std::size_t>(col)], w.hbar)) {
      auto it = index.find(s);
      if (it != index.end()) m(it->second, col) += c;
    }
  return m;
}

Eigen::MatrixXcd assemble_matrix(const NormalForm& h, const BasisWindow& w) {
  w.validate();
  if (h.dim() != w.dim) throw DimensionMismatch("normal form and basis window differ in dimension");
  const auto states = w.states();
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    m(i, i) = h.eigenvalue(states[static_cast<std::size_t>(i)].mu, states[static_cast<std::size_t>(i)].nu, w.hbar);
  return m;
}

double hermitian_defect(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

struct Decomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  std::vector<BasisState> states;
};

Decomposition decompose(const WordPoly& a, const BasisWindow& w) {
  const Eigen::MatrixXcd m = assemble_matrix(a, w);
  const double defect = hermitian_defect(m);
  if (defect > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw InvalidInput("operator matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw Error("eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors(), w.states()};
}

BasisState dominant(const Decomposition& d, Eigen::Index k) {
  Eigen::Index best = 0;
  d.vectors.col(k).cwiseAbs2().maxCoeff(&best);
  return d.states[static_cast<std::size_t>(best)];
}

}  // namespace

std::vector<QuasiEigenvalue> quasi_eigenpairs(const WordPoly& a, const BasisWindow& w, double lo, double hi,
                                              const SpectrumOptions& opts) {
  if (!(lo <= hi)) throw InvalidInput("empty energy window");
  const Decomposition base = decompose(a, w);
  std::vector<QuasiEigenvalue> out;
  for (Eigen::Index k = 0; k < base.values.size(); ++k) {
    const double v = base.values(k);
    if (v < lo || v > hi) continue;
    const BasisState label = dominant(base, k);
    if (!w.is_safe(label)) {
      if (opts.strict)
        throw UnsafeWindowError("eigenvalue " + std::to_string(v) + " in the window is carried by a state outside the safe region",
                                std::numeric_limits<double>::infinity());
      continue;
    }
    out.push_back({v, label, 0.0});
  }
  if (out.empty()) return out;
  const BasisWindow big = w.doubled();
  const Eigen::MatrixXcd mb = assemble_matrix(a, big);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (mb + mb.adjoint()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& bv = es.eigenvalues();
  double worst = 0.0;
  for (auto& q : out) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < bv.size(); ++k) best = std::min(best, std::abs(bv(k) - q.value));
    q.drift = best;
    worst = std::max(worst, best);
  }
  if (worst > opts.drift_tolerance)
    throw UnsafeWindowError("eigenvalues drift by " + std::to_string(worst) + " when the basis cut is doubled", worst);
  return out;
}

namespace {

// Eigenvalue whose eigenvector has the largest weight on the basis state s.
double level_of(const Decomposition& d, const BasisState& s) {
  auto it = std::find(d.states.begin(), d.states.end(), s);
  if (it == d.states.end()) throw InvalidInput("tracked state is not in the basis window");
  const Eigen::Index row = it - d.states.begin();
  Eigen::Index best = 0;
  d.vectors.row(row).cwiseAbs2().maxCoeff(&best);
  return d.values(best);
}

}  // namespace

std::vector<QuasiEigenvalue> tracked_levels(const WordPoly& a, const BasisWindow& w,
                                            const std::vector<BasisState>& levels, const SpectrumOptions& opts) {
  for (const auto& s : levels)
    if (!w.is_safe(s))
      throw UnsafeWindowError("tracked state lies outside the safe region", std::numeric_limits<double>::infinity());
  const Decomposition base = decompose(a, w);
  const Decomposition big = decompose(a, w.doubled());
  std::vector<QuasiEigenvalue> out;
  double worst = 0.0;
  for (const auto& s : levels) {
    const double v = level_of(base, s);
    const double drift = std::abs(level_of(big, s) - v);
    worst = std::max(worst, drift);
    out.push_back({v, s, drift});
  }
  if (worst > opts.drift_tolerance)
    throw UnsafeWindowError("tracked levels drift by " + std::to_string(worst) + " when the basis cut is doubled", worst);
  return out;
}

std::vector<double> quasi_eigenvalues(const WordPoly& a, const BasisWindow& w, double lo, double hi,
                                      const SpectrumOptions& opts) {
  std::vector<double> out;
  for (const auto& q : quasi_eigenpairs(a, w, lo, hi, opts)) out.push_back(q.value);
  return out;
}

std::vector<double> quasi_eigenvalues(const NormalForm& h, const BasisWindow& w, double lo, double hi) {
  w.validate();
  std::vector<double> out;
  for (const auto& s : w.states()) {
    const double v = h.eigenvalue(s.mu, s.nu, w.hbar);
    if (v < lo || v > hi) continue;
    if (!w.is_safe(s))
      throw UnsafeWindowError("window reaches states outside the safe region", std::numeric_limits<double>::infinity());
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SpectralEntry> unit_weights(const std::vector<double>& energies) {
  std::vector<SpectralEntry> out;
  for (double e : energies) out.push_back({e, 1.0, false});
  return out;
}

std::vector<SpectralEntry> weighted_spectrum(const WordPoly& a, const BasisWindow& w,
                                             const std::function<double(const std::vector<double>&)>& rho) {
  const Decomposition d = decompose(a, w);
  Eigen::VectorXd rho_diag(static_cast<Eigen::Index>(d.states.size()));
  for (std::size_t i = 0; i < d.states.size(); ++i) {
    std::vector<double> p;
    for (int m : d.states[i].mu) p.push_back((m + 0.5) * w.hbar);
    rho_diag(static_cast<Eigen::Index>(i)) = rho(p);
  }
  std::vector<SpectralEntry> out;
  for (Eigen::Index k = 0; k < d.values.size(); ++k) {
    const double weight = d.vectors.col(k).cwiseAbs2().dot(rho_diag);
    out.push_back({d.values(k), weight, !w.is_safe(dominant(d, k))});
  }
  return out;
}

std::vector<SpectralEntry> extend_fourier(const std::vector<SpectralEntry>& spectrum, double hbar, int nu_max) {
  std::vector<SpectralEntry> out;
  for (int nu = -nu_max; nu <= nu_max; ++nu)
    for (auto e : spectrum) {
      e.energy += nu * hbar;
      out.push_back(e);
    }
  return out;
}

std::function<double(const std::vector<double>&)> action_cutoff(double inner, double outer) {
  if (!(0 < inner && inner < outer)) throw InvalidInput("action cutoff needs 0 < inner < outer");
  return [inner, outer](const std::vector<double>& p) {
    double m = 0.0;
    for (double v : p) m = std::max(m, v);
    return smooth_step((outer - m) / (outer - inner));
  };
}

NumericTrace numeric_trace(const std::vector<SpectralEntry>& spectrum, double E, double hbar, const GaussianBump& bump,
                           int l, double floor) {
  if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
  bump.validate();
  NumericTrace out;
  out.quadrature = bump.describe();
  for (const auto& e : spectrum) {
    if (e.weight == 0.0) continue;
    const Complex v = e.weight * bump.phi((e.energy - E) / hbar, l);
    if (e.boundary) out.boundary_mass += std::abs(v);
    out.value += v;
  }
  if (out.boundary_mass > floor)
    throw CoverageError("boundary states contribute " + std::to_string(out.boundary_mass) + " to the trace",
                        out.boundary_mass);
  return out;
}

StateVector coherent_state(const std::vector<double>& x, const std::vector<double>& xi, double hbar, int cut,
                           double tail_tolerance) {
  if (x.size() != xi.size() || x.empty()) throw DimensionMismatch("coherent state needs matching x and xi");
  if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
  const std::size_t n = x.size();
  std::vector<std::vector<Complex>> factors(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex alpha = Complex(x[i], xi[i]) / std::sqrt(2.0 * hbar);
    const double a2 = std::norm(alpha);
    Complex c = std::exp(Complex(-0.5 * a2, x[i] * xi[i] / (2.0 * hbar)));
    double kept = 0.0;
    for (int k = 0; k <= cut; ++k) {
      if (k > 0) c *= alpha / std::sqrt(static_cast<double>(k));
      factors[i].push_back(c);
      kept += std::norm(c);
    }
    const double tail = 1.0 - kept;
    if (tail > tail_tolerance)
      throw UnsafeWindowError("coherent state loses norm " + std::to_string(tail) + " beyond the Hermite cut", tail);
  }
  StateVector out;
  MultiIndex mu(n, 0);
  while (true) {
    Complex c{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) c *= factors[i][static_cast<std::size_t>(mu[i])];
    if (c != Complex{}) out[{mu, 0}] = c;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (mu[i] < cut) {
        ++mu[i];
        break;
      }
      mu[i] = 0;
    }
    if (i == n) return out;
  }
}

namespace {

Complex inner(const StateVector& a, const StateVector& b) {
  Complex s{};
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it != b.end()) s += std::conj(v) * it->second;
  }
  return s;
}

double distance(const StateVector& a, const StateVector& b) {
  double s = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    s += std::norm(v - (it == b.end() ? Complex{} : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

bool CoherentReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass(); });
}

std::string CoherentReport::to_text() const {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific;
  for (const auto& c : checks)
    os << (c.gating ? (c.pass() ? "PASS " : "FAIL ") : "NOTE ") << c.name << " residual=" << c.residual
       << " tol=" << c.tolerance << "\n";
  return os.str();
}

CoherentReport coherent_state_checks(const BasisWindow& w, double s, double x, double xi) {
  w.validate();
  if (w.dim != 1) throw DimensionMismatch("coherent-state checks run on one degree of freedom");
  const double hb = w.hbar;
  const StateVector phi = coherent_state({x}, {xi}, hb, w.hermite_cut);
  // e^{isP} is diagonal with phases e^{is(mu+1/2)hbar}.
  StateVector rotated;
  for (const auto& [st, c] : phi) rotated[st] = c * std::exp(Complex(0.0, s * (st.mu[0] + 0.5) * hb));

  const Complex w1 = Complex(x, xi) * std::exp(Complex(0.0, s * hb));
  const double x1 = w1.real(), xi1 = w1.imag();
  const StateVector phi1 = coherent_state({x1}, {xi1}, hb, w.hermite_cut);
  auto scaled = [](const StateVector& v, Complex f) {
    StateVector out;
    for (const auto& [k, c] : v) out[k] = f * c;
    return out;
  };
  const Complex half_phase = std::exp(Complex(0.0, s * hb / 2.0));
  const Complex label_phase = std::exp(Complex(0.0, (x * xi - x1 * xi1) / (2.0 * hb)));

  CoherentReport rep;
  rep.checks.push_back({"rotation law e^{isP} phi = e^{is hbar/2} e^{i(x xi - x' xi')/2hbar} phi'",
                        distance(rotated, scaled(phi1, half_phase * label_phase)), 1e-8, true});
  rep.checks.push_back({"rotation law, printed phase e^{is hbar/2} only",
                        distance(rotated, scaled(phi1, half_phase)), 1e-8, false});

  // Overlap (phi_{x xi}, phi_{x' xi'}) with alpha = (x + i xi)/sqrt(2 hbar).
  const Complex a0 = Complex(x, xi) / std::sqrt(2.0 * hb);
  const Complex a1 = w1 / std::sqrt(2.0 * hb);
  const Complex printed = std::exp(std::conj(a0) * a1 - 0.5 * std::norm(a0) - 0.5 * std::norm(a1));
  const Complex overlap = inner(phi, phi1);
  rep.checks.push_back({"overlap with label phases e^{i(x' xi' - x xi)/2hbar}",
                        std::abs(overlap - std::conj(label_phase) * printed), 1e-8, true});
  rep.checks.push_back({"overlap modulus", std::abs(std::abs(overlap) - std::abs(printed)), 1e-8, true});
  rep.checks.push_back({"overlap, printed form without label phases", std::abs(overlap - printed), 1e-8, false});
  rep.checks.push_back({"self overlap", std::abs(inner(phi, phi) - 1.0), 1e-8, true});

  const double p = 0.5 * (x * x + xi * xi);
  const Complex wick = inner(phi, rotated);
  const Complex closed = std::exp(-(1.0 - std::exp(Complex(0.0, s * hb))) * p / hb + Complex(0.0, s * hb / 2.0));
  const Complex closed_printed =
      std::exp(-(1.0 - std::exp(Complex(0.0, -s * hb))) * p / hb + Complex(0.0, s * hb / 2.0));
  rep.checks.push_back({"Wick symbol exp(-(1 - e^{is hbar}) p/hbar + is hbar/2)", std::abs(wick - closed), 1e-8, true});
  rep.checks.push_back({"Wick symbol with printed e^{-is hbar}", std::abs(wick - closed_printed), 1e-8, false});
  return rep;
}

Complex coherent_expectation(const WordPoly& a, const std::vector<double>& x, const std::vector<double>& xi,
                             double hbar, int cut) {
  const StateVector phi = coherent_state(x, xi, hbar, cut);
  return inner(phi, apply_to_vector(a, phi, hbar));
}

}  // namespace bnf
