#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <ostream>

namespace bnf {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

/// Exact element of Q[i]. Used by the exact-arithmetic instantiations of the
/// series and word algebras, where identities must hold with zero residual.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long long r) : re(r) {}

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    Rational den = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) {
    return os << '(' << g.re << ',' << g.im << ')';
  }
};

/// Field operations the series/word templates need from a coefficient type.
template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Complex> {
  static Complex zero() { return {}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex imag_unit() { return {0.0, 1.0}; }
  static Complex ratio(long long p, long long q) {
    return {static_cast<double>(p) / static_cast<double>(q), 0.0};
  }
  static Complex conj(const Complex& c) { return std::conj(c); }
  static bool is_zero(const Complex& c) { return c == Complex{}; }
  static Complex to_complex(const Complex& c) { return c; }
};

template <>
struct CoeffTraits<GaussianRational> {
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return {1}; }
  static GaussianRational imag_unit() { return {Rational(0), Rational(1)}; }
  static GaussianRational ratio(long long p, long long q) { return {Rational(p, q)}; }
  static GaussianRational conj(const GaussianRational& c) { return {c.re, -c.im}; }
  static bool is_zero(const GaussianRational& c) { return c.re == 0 && c.im == 0; }
  static Complex to_complex(const GaussianRational& c) {
    return {static_cast<double>(c.re), static_cast<double>(c.im)};
  }
};

template <class C>
C ipow(C base, int e) {
  C out = CoeffTraits<C>::one();
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

inline std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// n (n-1) ... (n-k+1); zero when k > n.
inline std::int64_t falling(int n, int k) {
  if (k > n) return 0;
  std::int64_t f = 1;
  for (int i = 0; i < k; ++i) f *= (n - i);
  return f;
}

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  return falling(n, k) / factorial(k);
}

}  // namespace bnf
