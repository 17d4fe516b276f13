#include "bnf/normal_form.hpp"

#include <cmath>
#include <set>

namespace bnf {

NFKey nf_key(int dim, MultiIndex r, int s, int k) {
  if (r.empty()) r = zero_index(dim);
  return {std::move(r), s, k};
}

std::string route_name(Route r) {
  switch (r) {
    case Route::Classical: return "classical";
    case Route::Semiclassical: return "semiclassical";
    case Route::Quantum: return "quantum";
    case Route::WeylOfQuantum: return "weyl_of_quantum";
    case Route::Trace: return "trace";
  }
  return "unknown";
}

Route route_from_name(const std::string& name) {
  for (Route r : {Route::Classical, Route::Semiclassical, Route::Quantum, Route::WeylOfQuantum, Route::Trace})
    if (route_name(r) == name) return r;
  throw InvalidInput("unknown route '" + name + "'");
}

double NormalForm::energy() const { return coeff(nf_key(dim())); }

std::vector<double> NormalForm::theta() const {
  std::vector<double> out;
  for (int i = 0; i < dim(); ++i) out.push_back(coeff(nf_key(dim(), unit_index(dim(), i))));
  return out;
}

double NormalForm::tau_coefficient() const { return coeff(nf_key(dim(), {}, 1, 0)); }

double NormalForm::eigenvalue(const MultiIndex& mu, int nu, double hbar) const {
  std::vector<double> p;
  for (int v : mu) p.push_back((v + 0.5) * hbar);
  return poly.evaluate(p, nu * hbar, hbar);
}

RadialSymbol real_part_checked(const ActionPoly& a, double tol) {
  RadialSymbol out(a.dim());
  for (const auto& [key, c] : a.terms()) {
    if (std::abs(c.imag()) > tol)
      throw InvalidInput("normal-form coefficient at r=" + to_string(key.r) + ", s=" + std::to_string(key.s) +
                         ", k=" + std::to_string(key.k) + " is not real (imaginary part " +
                         std::to_string(c.imag()) + ")");
    out.add(key, c.real());
  }
  return out;
}

ActionPoly to_complex(const RadialSymbol& a) {
  ActionPoly out(a.dim());
  for (const auto& [key, c] : a.terms()) out.add(key, Complex(c, 0.0));
  return out;
}

ActionPoly resonant_to_action(const FTSeries& resonant) {
  ActionPoly out(resonant.dim());
  for (const auto& [key, c] : resonant.terms()) {
    if (!key.resonant()) throw InvalidInput("non-resonant key passed to resonant_to_action");
    out.add({key.mu, key.j, key.k}, c * std::ldexp(1.0, total(key.mu)));
  }
  return out;
}

FTSeries action_to_series(const ActionPoly& a, int max_weight) {
  FTSeries out(a.dim(), max_weight);
  for (const auto& [key, c] : a.terms()) out.add({key.r, key.r, 0, key.s, key.k}, c * std::ldexp(1.0, -total(key.r)));
  return out;
}

double max_difference(const RadialSymbol& a, const RadialSymbol& b) {
  a.check_dim(b);
  std::set<NFKey> keys;
  for (const auto& kv : a.terms()) keys.insert(kv.first);
  for (const auto& kv : b.terms()) keys.insert(kv.first);
  double worst = 0.0;
  for (const auto& key : keys) worst = std::max(worst, std::abs(a.coeff(key) - b.coeff(key)));
  return worst;
}

}  // namespace bnf
