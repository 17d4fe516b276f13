#include "bnf/power_series.hpp"

namespace bnf::ps {

namespace {

// cos(u) and sin(u) through u^{len-1}.
void trig(std::size_t len, Series<Rational>& c, Series<Rational>& s) {
  c.assign(len, Rational(0));
  s.assign(len, Rational(0));
  Rational term(1);
  for (std::size_t n = 0; n < len; ++n) {
    if (n > 0) term /= static_cast<long long>(n);
    const Rational signed_term = (n / 2) % 2 ? -term : term;
    (n % 2 ? s : c)[n] = signed_term;
  }
}

}  // namespace

std::vector<Rational> tan_coefficients(std::size_t count) {
  const std::size_t len = 2 * count + 1;
  Series<Rational> c, s;
  trig(len, c, s);
  const Series<Rational> t = mul(s, reciprocal(c, len), len);
  std::vector<Rational> out;
  for (std::size_t j = 0; j < count; ++j) out.push_back(t[2 * j + 1]);
  return out;
}

std::vector<Rational> sec_coefficients(std::size_t count) {
  const std::size_t len = 2 * count + 1;
  Series<Rational> c, s;
  trig(len, c, s);
  const Series<Rational> r = reciprocal(c, len);
  std::vector<Rational> out;
  for (std::size_t j = 0; j < count; ++j) out.push_back(r[2 * j]);
  return out;
}

}  // namespace bnf::ps
