#pragma once

#include "bnf/core_series.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace bnf {

/// Key of p^r tau^s hbar^k.
struct NFKey {
  MultiIndex r;
  int s = 0;
  int k = 0;

  auto operator<=>(const NFKey&) const = default;
  bool operator==(const NFKey&) const = default;

  int degree() const { return total(r) + s; }
  /// Joint weight in z, zbar, tau, hbar units (p has weight 2).
  int weight() const { return 2 * total(r) + 2 * s + 2 * k; }
};

NFKey nf_key(int dim, MultiIndex r = {}, int s = 0, int k = 0);

/// Polynomial in (p_1..p_n, tau, hbar).
template <class T>
class BasicActionPoly {
 public:
  using Terms = std::map<NFKey, T>;

  BasicActionPoly() = default;
  explicit BasicActionPoly(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  T coeff(const NFKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? T{} : it->second;
  }

  void add(const NFKey& key, const T& c) {
    if (static_cast<int>(key.r.size()) != dim_) throw DimensionMismatch("normal-form key has wrong dimension");
    if (c == T{}) return;
    auto [it, fresh] = terms_.try_emplace(key, c);
    if (!fresh) {
      it->second += c;
      if (it->second == T{}) terms_.erase(it);
    }
  }

  BasicActionPoly& operator+=(const BasicActionPoly& o) {
    check_dim(o);
    for (const auto& [key, c] : o.terms_) add(key, c);
    return *this;
  }
  BasicActionPoly& operator-=(const BasicActionPoly& o) {
    check_dim(o);
    for (const auto& [key, c] : o.terms_) add(key, -c);
    return *this;
  }
  BasicActionPoly& operator*=(const T& s) {
    for (auto& kv : terms_) kv.second *= s;
    return *this;
  }
  friend BasicActionPoly operator+(BasicActionPoly a, const BasicActionPoly& b) { return a += b; }
  friend BasicActionPoly operator-(BasicActionPoly a, const BasicActionPoly& b) { return a -= b; }
  friend BasicActionPoly operator*(const T& s, BasicActionPoly a) { return a *= s; }
  friend bool operator==(const BasicActionPoly& a, const BasicActionPoly& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }
  friend BasicActionPoly operator*(const BasicActionPoly& a, const BasicActionPoly& b) {
    a.check_dim(b);
    BasicActionPoly out(a.dim_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add({ka.r + kb.r, ka.s + kb.s, ka.k + kb.k}, ca * cb);
    return out;
  }

  BasicActionPoly hbar_truncated(int kmax) const {
    BasicActionPoly out(dim_);
    for (const auto& [key, c] : terms_)
      if (key.k <= kmax) out.terms_.emplace(key, c);
    return out;
  }

  double max_abs() const {
    double out = 0.0;
    for (const auto& kv : terms_) out = std::max(out, static_cast<double>(std::abs(kv.second)));
    return out;
  }

  T evaluate(const std::vector<double>& p, double tau, double hbar) const {
    if (static_cast<int>(p.size()) != dim_) throw DimensionMismatch("evaluation point has wrong dimension");
    T sum{};
    for (const auto& [key, c] : terms_) {
      T v = c * std::pow(tau, key.s) * std::pow(hbar, key.k);
      for (std::size_t i = 0; i < p.size(); ++i) v *= std::pow(p[i], key.r[i]);
      sum += v;
    }
    return sum;
  }

  void check_dim(const BasicActionPoly& o) const {
    if (o.dim_ != dim_) throw DimensionMismatch("normal-form dimension mismatch");
  }

 private:
  int dim_ = 0;
  Terms terms_;
};

using ActionPoly = BasicActionPoly<Complex>;
/// Real polynomial in (p, tau, hbar), read as a phase-space function.
using RadialSymbol = BasicActionPoly<double>;

enum class Route { Classical, Semiclassical, Quantum, WeylOfQuantum, Trace };
std::string route_name(Route r);
Route route_from_name(const std::string& name);

/// Real normal form sum c_{r,s,k} p^r tau^s hbar^k with its provenance route.
struct NormalForm {
  RadialSymbol poly;
  Route route = Route::Classical;

  NormalForm() = default;
  NormalForm(RadialSymbol p, Route r) : poly(std::move(p)), route(r) {}

  int dim() const { return poly.dim(); }
  double coeff(const NFKey& key) const { return poly.coeff(key); }
  double energy() const;
  std::vector<double> theta() const;
  double tau_coefficient() const;
  /// h((mu+1/2) hbar, nu hbar, hbar).
  double eigenvalue(const MultiIndex& mu, int nu, double hbar) const;
};

/// Real part of a complex action polynomial; throws InvalidInput if any
/// imaginary part exceeds tol (self-adjointness violated).
RadialSymbol real_part_checked(const ActionPoly& a, double tol);
ActionPoly to_complex(const RadialSymbol& a);

/// Resonant series terms z^r zbar^r tau^s hbar^k (m = 0) as a polynomial
/// in p via z zbar = 2p. Non-resonant terms are rejected.
ActionPoly resonant_to_action(const FTSeries& resonant);
/// Inverse of resonant_to_action.
FTSeries action_to_series(const ActionPoly& a, int max_weight = kUnboundedWeight);

/// Largest coefficientwise difference (union of keys).
double max_difference(const RadialSymbol& a, const RadialSymbol& b);

}  // namespace bnf
