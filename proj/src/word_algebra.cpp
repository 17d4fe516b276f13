#include "bnf/word_algebra.hpp"

#include <cmath>
#include <sstream>

namespace bnf {

namespace {

template <class C>
C from_int(long long v) {
  return CoeffTraits<C>::ratio(v, 1);
}

template <class F>
void for_each_below(const MultiIndex& bound, F&& f) {
  MultiIndex a(bound.size(), 0);
  while (true) {
    f(a);
    std::size_t i = 0;
    for (; i < a.size(); ++i) {
      if (a[i] < bound[i]) {
        ++a[i];
        break;
      }
      a[i] = 0;
    }
    if (i == a.size()) return;
  }
}

// Canonical form of one monomial product. The term with no reordering
// correction (kappa = 0, all D_t passed through unchanged) is the leading
// term; skip_leading drops it.
template <class C>
void multiply_monomials(const MonomialKey& ka, const C& ca, const MonomialKey& kb, const C& cb, bool skip_leading,
                        BasicWordPoly<C>& out) {
  const std::size_t n = ka.mu.size();
  MultiIndex kmax(n);
  for (std::size_t i = 0; i < n; ++i) kmax[i] = std::min(ka.nu[i], kb.mu[i]);
  for_each_below(kmax, [&](const MultiIndex& kap) {
    const int skap = total(kap);
    C ladder = ca * cb;
    MonomialKey key;
    key.mu.resize(n);
    key.nu.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      // a^nu (a+)^mu = sum_kappa kappa! C(nu,kappa) C(mu,kappa) hbar^kappa (a+)^{mu-kappa} a^{nu-kappa}
      ladder *= from_int<C>(factorial(kap[i]) * binomial(ka.nu[i], kap[i]) * binomial(kb.mu[i], kap[i]));
      key.mu[i] = ka.mu[i] + kb.mu[i] - kap[i];
      key.nu[i] = ka.nu[i] + kb.nu[i] - kap[i];
    }
    key.m = ka.m + kb.m;
    // D_t^jA e^{i mB t} = e^{i mB t} sum_d C(jA,d) (mB hbar)^{jA-d} D_t^d
    for (int d = ka.j; d >= 0; --d) {
      const int shift = ka.j - d;
      if (shift > 0 && kb.m == 0) break;
      if (skip_leading && skap == 0 && shift == 0) continue;
      MonomialKey out_key = key;
      out_key.j = d + kb.j;
      out_key.k = ka.k + kb.k + skap + shift;
      out.add(out_key, ladder * from_int<C>(binomial(ka.j, d)) * ipow(from_int<C>(kb.m), shift));
    }
  });
}

template <class C>
BasicWordPoly<C> product_impl(const BasicWordPoly<C>& a, const BasicWordPoly<C>& b, bool skip_leading) {
  a.check_dim(b);
  BasicWordPoly<C> out(a.dim(), std::min(a.max_weight(), b.max_weight()));
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) multiply_monomials(ka, ca, kb, cb, skip_leading, out);
  return out;
}

}  // namespace

template <class C>
BasicWordPoly<C> normal_order_product(const BasicWordPoly<C>& a, const BasicWordPoly<C>& b) {
  return product_impl(a, b, false);
}

template <class C>
BasicWordPoly<C> commutator(const BasicWordPoly<C>& a, const BasicWordPoly<C>& b) {
  return product_impl(a, b, true) - product_impl(b, a, true);
}

template <class C>
BasicWordPoly<C> commutator_over_ihbar(const BasicWordPoly<C>& a, const BasicWordPoly<C>& b) {
  const BasicWordPoly<C> raw = commutator(a, b);
  BasicWordPoly<C> out(raw.dim(), raw.max_weight());
  const C minus_i = -CoeffTraits<C>::imag_unit();
  for (const auto& [key, c] : raw.terms()) {
    if (key.k < 1) throw OrderingError("commutator term without an hbar factor; the inputs are not canonical");
    MonomialKey shifted = key;
    shifted.k -= 1;
    out.add(shifted, c * minus_i);
  }
  return out;
}

template <class C>
BasicWordPoly<C> adjoint(const BasicWordPoly<C>& a) {
  BasicWordPoly<C> out(a.dim(), a.max_weight());
  for (const auto& [key, c] : a.terms()) {
    // (e^{imt} (a+)^mu a^nu D^j)^* = e^{-imt} (a+)^nu a^mu (D - m hbar)^j
    const C cc = CoeffTraits<C>::conj(c);
    for (int q = key.j; q >= 0; --q) {
      const int shift = key.j - q;
      if (shift > 0 && key.m == 0) break;
      MonomialKey k2{key.nu, key.mu, -key.m, q, key.k + shift};
      out.add(k2, cc * from_int<C>(binomial(key.j, q)) * ipow(from_int<C>(-key.m), shift));
    }
  }
  return out;
}

StateVector apply_to_basis(const WordPoly& a, const BasisState& s, double hbar) {
  if (static_cast<int>(s.mu.size()) != a.dim()) throw DimensionMismatch("basis state has wrong dimension");
  if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
  StateVector out;
  for (const auto& [key, c] : a.terms()) {
    Complex amp = c * std::pow(hbar, key.k) * std::pow(s.nu * hbar, key.j);
    if (amp == Complex{}) continue;
    BasisState t = s;
    bool dead = false;
    for (std::size_t i = 0; i < t.mu.size() && !dead; ++i) {
      for (int q = 0; q < key.nu[i]; ++q) {
        if (t.mu[i] == 0) {
          dead = true;
          break;
        }
        amp *= std::sqrt(t.mu[i] * hbar);
        --t.mu[i];
      }
      if (dead) break;
      for (int q = 0; q < key.mu[i]; ++q) {
        amp *= std::sqrt((t.mu[i] + 1) * hbar);
        ++t.mu[i];
      }
    }
    if (dead) continue;
    t.nu += key.m;
    out[t] += amp;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == Complex{} ? out.erase(it) : std::next(it);
  return out;
}

StateVector apply_to_vector(const WordPoly& a, const StateVector& v, double hbar) {
  StateVector out;
  for (const auto& [s, c] : v)
    for (const auto& [t, d] : apply_to_basis(a, s, hbar)) out[t] += c * d;
  return out;
}

Complex matrix_element(const WordPoly& a, const BasisState& bra, const BasisState& ket, double hbar) {
  const StateVector v = apply_to_basis(a, ket, hbar);
  auto it = v.find(bra);
  return it == v.end() ? Complex{} : it->second;
}

double norm(const StateVector& v) {
  double s = 0.0;
  for (const auto& kv : v) s += std::norm(kv.second);
  return std::sqrt(s);
}

ActionPoly diagonal_to_normal_form(const WordPoly& a) {
  const int n = a.dim();
  ActionPoly out(n);
  for (const auto& [key, c] : a.terms()) {
    if (!key.resonant()) continue;
    ActionPoly term(n);
    term.add(nf_key(n, {}, key.j, key.k), c);
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < key.mu[static_cast<std::size_t>(i)]; ++q) {
        // p_i - (q + 1/2) hbar
        ActionPoly factor(n);
        factor.add(nf_key(n, unit_index(n, i)), Complex(1.0, 0.0));
        factor.add(nf_key(n, {}, 0, 1), Complex(-(q + 0.5), 0.0));
        term = term * factor;
      }
    }
    out += term;
  }
  return out;
}

WordPoly word_from_action(const ActionPoly& h, int max_grade) {
  const int n = h.dim();
  std::vector<WordPoly> pword;
  for (int i = 0; i < n; ++i) {
    WordPoly p = normal_order_product(word::adag(n, i, max_grade), word::a(n, i, max_grade));
    p += Complex(0.5, 0.0) * word::hbar(n, max_grade);
    pword.push_back(p);
  }
  WordPoly out(n, max_grade);
  for (const auto& [key, c] : h.terms()) {
    WordPoly term = word::monomial(n, series::key(n, {}, {}, 0, key.s, key.k), c, max_grade);
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < key.r[static_cast<std::size_t>(i)]; ++q)
        term = normal_order_product(term, pword[static_cast<std::size_t>(i)]);
    out += term;
  }
  return out;
}

WordPoly quadratic_word(const std::vector<double>& theta, double energy, int max_grade) {
  const int n = static_cast<int>(theta.size());
  WordPoly h0 = word::dt(n, max_grade);
  for (int i = 0; i < n; ++i) {
    const double t = theta[static_cast<std::size_t>(i)];
    h0.add(series::key(n, unit_index(n, i), unit_index(n, i)), Complex(t, 0.0));
    h0.add(series::key(n, {}, {}, 0, 0, 1), Complex(t / 2.0, 0.0));
  }
  h0.add(series::key(n), Complex(energy, 0.0));
  return h0;
}

double adjoint_defect(const WordPoly& a) { return (adjoint(a) - a).max_abs(); }

std::string pretty(const WordPoly& a) {
  if (a.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (const auto& [key, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    if (key.k) os << "*hbar" << (key.k > 1 ? "^" + std::to_string(key.k) : "");
    if (key.m) os << "*e^{" << key.m << "it}";
    for (std::size_t i = 0; i < key.mu.size(); ++i)
      if (key.mu[i]) os << "*a" << i + 1 << "+" << (key.mu[i] > 1 ? "^" + std::to_string(key.mu[i]) : "");
    for (std::size_t i = 0; i < key.nu.size(); ++i)
      if (key.nu[i]) os << "*a" << i + 1 << (key.nu[i] > 1 ? "^" + std::to_string(key.nu[i]) : "");
    if (key.j) os << "*Dt" << (key.j > 1 ? "^" + std::to_string(key.j) : "");
  }
  return os.str();
}

#define BNF_INSTANTIATE(C)                                                                            \
  template BasicWordPoly<C> normal_order_product(const BasicWordPoly<C>&, const BasicWordPoly<C>&);   \
  template BasicWordPoly<C> commutator(const BasicWordPoly<C>&, const BasicWordPoly<C>&);             \
  template BasicWordPoly<C> commutator_over_ihbar(const BasicWordPoly<C>&, const BasicWordPoly<C>&);  \
  template BasicWordPoly<C> adjoint(const BasicWordPoly<C>&);

BNF_INSTANTIATE(Complex)
BNF_INSTANTIATE(GaussianRational)
#undef BNF_INSTANTIATE

}  // namespace bnf
