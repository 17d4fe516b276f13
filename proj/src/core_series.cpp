#include "bnf/core_series.hpp"

#include <algorithm>
#include <sstream>

namespace bnf {

int total(const MultiIndex& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

MultiIndex zero_index(int n) { return MultiIndex(static_cast<std::size_t>(n), 0); }

MultiIndex unit_index(int n, int i) {
  if (i < 0 || i >= n) throw InvalidInput("unit index out of range");
  MultiIndex e = zero_index(n);
  e[static_cast<std::size_t>(i)] = 1;
  return e;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DimensionMismatch("multi-index length mismatch");
  MultiIndex c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw DimensionMismatch("multi-index length mismatch");
  MultiIndex c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

std::string to_string(const MultiIndex& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ')';
  return os.str();
}

namespace series {

MonomialKey key(int dim, MultiIndex mu, MultiIndex nu, int m, int j, int k) {
  if (mu.empty()) mu = zero_index(dim);
  if (nu.empty()) nu = zero_index(dim);
  return MonomialKey{std::move(mu), std::move(nu), m, j, k};
}

}  // namespace series

MonomialKey conjugate_key(const MonomialKey& key) { return {key.nu, key.mu, -key.m, key.j, key.k}; }

namespace {

template <class C>
C from_int(long long v) {
  return CoeffTraits<C>::ratio(v, 1);
}

// Multi-index enumeration of 0 <= a <= bound componentwise.
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

MultiIndex min_index(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::min(a[i], b[i]);
  return c;
}

// Enumerate every term hbar^q P_q(A,B) of the Moyal product of two monomials.
template <class C, class Sink>
void moyal_monomials(const MonomialKey& ka, const C& ca, const MonomialKey& kb, const C& cb, int qmax, Sink&& sink) {
  const std::size_t n = ka.mu.size();
  const MultiIndex amax = min_index(ka.mu, kb.nu);
  const MultiIndex bmax = min_index(ka.nu, kb.mu);
  const C iu = CoeffTraits<C>::imag_unit();
  const C half = CoeffTraits<C>::ratio(1, 2);
  for_each_below(amax, [&](const MultiIndex& a) {
    const int sa = total(a);
    if (sa > qmax) return;
    for_each_below(bmax, [&](const MultiIndex& b) {
      const int sb = total(b);
      if (sa + sb > qmax) return;
      C spatial = ca * cb;
      MonomialKey key;
      key.mu.resize(n);
      key.nu.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        long long num = falling(ka.mu[i], a[i]) * falling(kb.nu[i], a[i]) * falling(ka.nu[i], b[i]) *
                        falling(kb.mu[i], b[i]);
        long long den = factorial(a[i]) * factorial(b[i]);
        if (b[i] % 2) num = -num;
        spatial *= CoeffTraits<C>::ratio(num, den);
        key.mu[i] = ka.mu[i] - a[i] + kb.mu[i] - b[i];
        key.nu[i] = ka.nu[i] - b[i] + kb.nu[i] - a[i];
      }
      key.m = ka.m + kb.m;
      for (int c = 0; c <= kb.j && sa + sb + c <= qmax; ++c) {
        // (i/2)^c (i mA)^c ff(jB,c) / c!
        if (c > 0 && ka.m == 0) break;
        C tc = ipow(iu * half * iu * from_int<C>(ka.m), c) * CoeffTraits<C>::ratio(falling(kb.j, c), factorial(c));
        for (int d = 0; d <= ka.j && sa + sb + c + d <= qmax; ++d) {
          if (d > 0 && kb.m == 0) break;
          // (-i/2)^d ff(jA,d) (i mB)^d / d!
          C td = ipow(-iu * half * iu * from_int<C>(kb.m), d) *
                 CoeffTraits<C>::ratio(falling(ka.j, d), factorial(d));
          MonomialKey out = key;
          out.j = ka.j - d + kb.j - c;
          out.k = ka.k + kb.k;
          sink(out, spatial * tc * td, sa + sb + c + d);
        }
      }
    });
  });
}

}  // namespace

template <class C>
BasicFTSeries<C> operator*(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b) {
  a.check_dim(b);
  BasicFTSeries<C> out(a.dim(), std::min(a.max_weight(), b.max_weight()));
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      MonomialKey key{ka.mu + kb.mu, ka.nu + kb.nu, ka.m + kb.m, ka.j + kb.j, ka.k + kb.k};
      out.add(key, ca * cb);
    }
  return out;
}

template <class C>
BasicFTSeries<C> poisson_bracket(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b) {
  a.check_dim(b);
  const int n = a.dim();
  const C iu = CoeffTraits<C>::imag_unit();
  BasicFTSeries<C> out(n, std::min(a.max_weight(), b.max_weight()));
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const C cc = ca * cb;
      // 2i (A_zbar B_z - A_z B_zbar), per degree of freedom.
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        long long f = static_cast<long long>(ka.nu[ui]) * kb.mu[ui] - static_cast<long long>(ka.mu[ui]) * kb.nu[ui];
        if (f == 0) continue;
        MonomialKey key{ka.mu + kb.mu, ka.nu + kb.nu, ka.m + kb.m, ka.j + kb.j, ka.k + kb.k};
        key.mu[ui] -= 1;
        key.nu[ui] -= 1;
        if (key.mu[ui] < 0 || key.nu[ui] < 0) continue;
        out.add(key, cc * iu * from_int<C>(2 * f));
      }
      // A_t B_tau - A_tau B_t = i (mA jB - jA mB).
      long long g = static_cast<long long>(ka.m) * kb.j - static_cast<long long>(ka.j) * kb.m;
      if (g != 0) {
        MonomialKey key{ka.mu + kb.mu, ka.nu + kb.nu, ka.m + kb.m, ka.j + kb.j - 1, ka.k + kb.k};
        out.add(key, cc * iu * from_int<C>(g));
      }
    }
  }
  return out;
}

template <class C>
BasicFTSeries<C> moyal_product(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b, int hbar_order) {
  a.check_dim(b);
  if (hbar_order < 0) throw InvalidInput("hbar_order must be non-negative");
  BasicFTSeries<C> out(a.dim(), std::min(a.max_weight(), b.max_weight()));
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      const int qmax = hbar_order - ka.k - kb.k;
      if (qmax < 0) continue;
      moyal_monomials<C>(ka, ca, kb, cb, qmax, [&](MonomialKey key, const C& c, int q) {
        key.k += q;
        out.add(key, c);
      });
    }
  return out;
}

template <class C>
BasicFTSeries<C> moyal_bracket(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b, int hbar_order) {
  a.check_dim(b);
  if (hbar_order < 0) throw InvalidInput("hbar_order must be non-negative");
  // P_q(B,A) = (-1)^q P_q(A,B), so the bracket is -2i sum_{q odd} hbar^{q-1} P_q(A,B).
  const C factor = -CoeffTraits<C>::imag_unit() * from_int<C>(2);
  BasicFTSeries<C> out(a.dim(), std::min(a.max_weight(), b.max_weight()));
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      const int qmax = hbar_order + 1 - ka.k - kb.k;
      if (qmax < 1) continue;
      moyal_monomials<C>(ka, ca, kb, cb, qmax, [&](MonomialKey key, const C& c, int q) {
        if (q % 2 == 0) return;
        key.k += q - 1;
        out.add(key, factor * c);
      });
    }
  return out;
}

double real_symbol_defect(const FTSeries& a) {
  double worst = 0.0;
  for (const auto& [key, c] : a.terms())
    worst = std::max(worst, std::abs(c - std::conj(a.coeff(conjugate_key(key)))));
  return worst;
}

Complex evaluate(const FTSeries& a, const std::vector<Complex>& z, double t, double tau, double hbar) {
  if (static_cast<int>(z.size()) != a.dim()) throw DimensionMismatch("evaluation point has wrong dimension");
  Complex sum{};
  for (const auto& [key, c] : a.terms()) {
    Complex v = c * std::exp(Complex(0.0, key.m * t)) * std::pow(tau, key.j) * std::pow(hbar, key.k);
    for (std::size_t i = 0; i < z.size(); ++i) v *= std::pow(z[i], key.mu[i]) * std::pow(std::conj(z[i]), key.nu[i]);
    sum += v;
  }
  return sum;
}

#define BNF_INSTANTIATE(C)                                                                      \
  template BasicFTSeries<C> operator*(const BasicFTSeries<C>&, const BasicFTSeries<C>&);      \
  template BasicFTSeries<C> poisson_bracket(const BasicFTSeries<C>&, const BasicFTSeries<C>&); \
  template BasicFTSeries<C> moyal_product(const BasicFTSeries<C>&, const BasicFTSeries<C>&, int); \
  template BasicFTSeries<C> moyal_bracket(const BasicFTSeries<C>&, const BasicFTSeries<C>&, int);

BNF_INSTANTIATE(Complex)
BNF_INSTANTIATE(GaussianRational)
#undef BNF_INSTANTIATE

}  // namespace bnf
