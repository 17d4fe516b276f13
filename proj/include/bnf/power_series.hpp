#pragma once

#include "bnf/errors.hpp"
#include "bnf/scalar.hpp"

#include <cstddef>
#include <vector>

namespace bnf::ps {

/// Truncated univariate power series: coefficient vectors of a fixed length.
template <class T>
using Series = std::vector<T>;

template <class T>
Series<T> mul(const Series<T>& a, const Series<T>& b, std::size_t len) {
  Series<T> out(len, T(0));
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (a[i] == T(0)) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// 1/a; a[0] must be nonzero.
template <class T>
Series<T> reciprocal(const Series<T>& a, std::size_t len) {
  if (a.empty() || a[0] == T(0)) throw InvalidInput("power series with zero constant term has no reciprocal");
  Series<T> out(len, T(0));
  out[0] = T(1) / a[0];
  for (std::size_t n = 1; n < len; ++n) {
    T s(0);
    for (std::size_t k = 1; k <= n && k < a.size(); ++k) s += a[k] * out[n - k];
    out[n] = -s / a[0];
  }
  return out;
}

/// exp(a) for a with a[0] = 0 (the caller multiplies by exp(a[0]) if needed).
template <class T>
Series<T> exp_nilpotent(const Series<T>& a, std::size_t len) {
  if (!a.empty() && !(a[0] == T(0))) throw InvalidInput("exp_nilpotent needs a zero constant term");
  // E' = a' E, solved coefficientwise.
  Series<T> out(len, T(0));
  if (len == 0) return out;
  out[0] = T(1);
  for (std::size_t n = 1; n < len; ++n) {
    T s(0);
    for (std::size_t k = 1; k <= n && k < a.size(); ++k) s += T(static_cast<long long>(k)) * a[k] * out[n - k];
    out[n] = s / T(static_cast<long long>(n));
  }
  return out;
}

/// Taylor coefficients t_j with tan(u) = sum_j t_j u^{2j+1}, j < count.
std::vector<Rational> tan_coefficients(std::size_t count);
/// Taylor coefficients s_j with sec(u) = sum_j s_j u^{2j}, j < count.
std::vector<Rational> sec_coefficients(std::size_t count);

}  // namespace bnf::ps
