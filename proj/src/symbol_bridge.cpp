#include "bnf/symbol_bridge.hpp"

#include "bnf/power_series.hpp"

#include <cmath>

namespace bnf {

namespace {

constexpr int kAllHbar = 1 << 16;

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

FTSeries heat_map(const FTSeries& s, int hbar_order, double sign) {
  FTSeries out(s.dim(), s.max_weight());
  for (const auto& [key, c] : s.terms()) {
    MultiIndex bound(key.mu.size());
    for (std::size_t i = 0; i < bound.size(); ++i) bound[i] = std::min(key.mu[i], key.nu[i]);
    for_each_below(bound, [&](const MultiIndex& q) {
      const int sq = total(q);
      if (key.k + sq > hbar_order) return;
      double f = std::pow(sign, sq);
      for (std::size_t i = 0; i < q.size(); ++i)
        f *= static_cast<double>(falling(key.mu[i], q[i]) * falling(key.nu[i], q[i])) /
             static_cast<double>(factorial(q[i]));
      out.add({key.mu - q, key.nu - q, key.m, key.j, key.k + sq}, c * f);
    });
  }
  return out;
}

RadialSymbol radial_heat_map(const RadialSymbol& s, int hbar_order, double sign) {
  // On functions of p_i: d_z d_zbar p^r = r^2 p^{r-1} / 2.
  RadialSymbol cur = s;
  for (int i = 0; i < s.dim(); ++i) {
    RadialSymbol next(s.dim());
    for (const auto& [key, c] : cur.terms()) {
      const int r = key.r[static_cast<std::size_t>(i)];
      for (int q = 0; q <= r && key.k + q <= hbar_order; ++q) {
        const double ff = static_cast<double>(falling(r, q));
        const double f = std::pow(sign, q) * ff * ff / (std::ldexp(1.0, q) * static_cast<double>(factorial(q)));
        NFKey k2 = key;
        k2.r[static_cast<std::size_t>(i)] -= q;
        k2.k += q;
        next.add(k2, c * f);
      }
    }
    cur = next;
  }
  return cur;
}

}  // namespace

FTSeries weyl_symbol(const WordPoly& w) {
  const int n = w.dim();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  FTSeries out(n, w.max_weight());
  for (const auto& [key, c] : w.terms()) {
    FTSeries term = series::monomial(n, series::key(n, {}, {}, key.m, 0, key.k), c, w.max_weight());
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (int q = 0; q < key.mu[ui]; ++q)
        term = moyal_product(term, Complex(inv_sqrt2, 0.0) * series::zbar(n, i), kAllHbar);
    }
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (int q = 0; q < key.nu[ui]; ++q)
        term = moyal_product(term, Complex(inv_sqrt2, 0.0) * series::z(n, i), kAllHbar);
    }
    for (int q = 0; q < key.j; ++q) term = moyal_product(term, series::tau(n), kAllHbar);
    out += term;
  }
  return out;
}

FTSeries wick_from_weyl(const FTSeries& s, int hbar_order) { return heat_map(s, hbar_order, 1.0); }
FTSeries weyl_from_wick(const FTSeries& s, int hbar_order) { return heat_map(s, hbar_order, -1.0); }
RadialSymbol wick_from_weyl(const RadialSymbol& s, int hbar_order) { return radial_heat_map(s, hbar_order, 1.0); }
RadialSymbol weyl_from_wick(const RadialSymbol& s, int hbar_order) { return radial_heat_map(s, hbar_order, -1.0); }

std::map<std::pair<int, int>, Rational> weyl_of_power(int r) {
  if (r < 0) throw InvalidInput("negative power");
  // Series in s whose coefficients are polynomials in (p, hbar).
  using Poly = std::map<std::pair<int, int>, Rational>;
  using SSeries = std::vector<Poly>;
  const std::size_t len = static_cast<std::size_t>(r) + 1;
  const std::size_t half = len / 2 + 1;
  const auto tan_c = ps::tan_coefficients(half);
  const auto sec_c = ps::sec_coefficients(half);

  auto mul = [len](const SSeries& a, const SSeries& b) {
    SSeries out(len);
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; i + j < len; ++j)
        for (const auto& [ka, ca] : a[i])
          for (const auto& [kb, cb] : b[j]) out[i + j][{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
    return out;
  };

  // E(s) = p s sum_j t_j (hbar/2)^{2j} s^{2j}; the factor i of each p is
  // restored below as the sign (-1)^{(r - deg_p)/2}.
  SSeries e(len);
  for (std::size_t j = 0; 2 * j + 1 < len; ++j)
    e[2 * j + 1][{1, static_cast<int>(2 * j)}] = tan_c[j] / Rational(1LL << (2 * j));
  SSeries sec(len);
  for (std::size_t j = 0; 2 * j < len; ++j)
    sec[2 * j][{0, static_cast<int>(2 * j)}] = sec_c[j] / Rational(1LL << (2 * j));

  SSeries ex(len);
  ex[0][{0, 0}] = Rational(1);
  SSeries power = ex;
  Rational inv_fact(1);
  for (int k = 1; k <= r; ++k) {
    power = mul(power, e);
    inv_fact /= k;
    for (std::size_t i = 0; i < len; ++i)
      for (const auto& [key, c] : power[i]) ex[i][key] += c * inv_fact;
  }
  const SSeries total_series = mul(sec, ex);
  Poly out;
  Rational rfact(factorial(r));
  for (const auto& [key, c] : total_series[static_cast<std::size_t>(r)]) {
    if (c == 0) continue;
    const int sign_exp = (r - key.first) / 2;
    out[key] = (sign_exp % 2 ? -c : c) * rfact;
  }
  return out;
}

RadialSymbol weyl_of_functional_calculus(const RadialSymbol& h, int hbar_order) {
  const int n = h.dim();
  std::map<int, std::map<std::pair<int, int>, Rational>> cache;
  auto power = [&cache](int r) -> const std::map<std::pair<int, int>, Rational>& {
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, weyl_of_power(r)).first;
    return it->second;
  };
  RadialSymbol out(n);
  for (const auto& [key, c] : h.terms()) {
    if (key.k > hbar_order) continue;
    RadialSymbol term(n);
    term.add(nf_key(n, {}, key.s, key.k), c);
    for (int i = 0; i < n; ++i) {
      RadialSymbol factor(n);
      for (const auto& [pk, pc] : power(key.r[static_cast<std::size_t>(i)])) {
        MultiIndex r = zero_index(n);
        r[static_cast<std::size_t>(i)] = pk.first;
        factor.add({r, 0, pk.second}, static_cast<double>(pc));
      }
      term = (term * factor).hbar_truncated(hbar_order);
    }
    out += term;
  }
  return out;
}

NormalForm weyl_of_functional_calculus(const NormalForm& h, int hbar_order) {
  return NormalForm(weyl_of_functional_calculus(h.poly, hbar_order), Route::WeylOfQuantum);
}

std::vector<double> diagonal_values_check(const NormalForm& h, double hbar, int kmax) {
  if (!(hbar > 0)) throw InvalidInput("hbar must be positive");
  std::vector<double> out;
  for (int k = 0; k <= kmax; ++k) out.push_back(h.poly.evaluate(std::vector<double>(h.dim(), (k + 0.5) * hbar), 0.0, hbar));
  return out;
}

NormalForm relate_normal_forms(const NormalForm& h_quantum, int hbar_order) {
  return weyl_of_functional_calculus(h_quantum, hbar_order);
}

RouteComparison compare_routes(const NormalForm& h_quantum, const NormalForm& h_semiclassical, int hbar_order) {
  RouteComparison out;
  out.quantum = h_quantum.poly.hbar_truncated(hbar_order);
  out.predicted = relate_normal_forms(h_quantum, hbar_order).poly;
  out.semiclassical = h_semiclassical.poly.hbar_truncated(hbar_order);
  out.max_discrepancy = max_difference(out.predicted, out.semiclassical);
  const RadialSymbol shift = out.semiclassical - out.quantum;
  for (int k = 0; k <= hbar_order; ++k) out.shift_by_hbar[k] = 0.0;
  for (const auto& [key, c] : shift.terms())
    out.shift_by_hbar[key.k] = std::max(out.shift_by_hbar[key.k], std::abs(c));
  return out;
}

}  // namespace bnf
