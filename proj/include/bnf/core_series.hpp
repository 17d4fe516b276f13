#pragma once

#include "bnf/errors.hpp"
#include "bnf/scalar.hpp"

#include <climits>
#include <compare>
#include <map>
#include <string>
#include <vector>

namespace bnf {

/// Non-negative integer multi-index of length n.
using MultiIndex = std::vector<int>;

int total(const MultiIndex& a);
MultiIndex zero_index(int n);
MultiIndex unit_index(int n, int i);
MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
std::string to_string(const MultiIndex& a);

/// Key of a monomial. For series: z^mu zbar^nu e^{imt} tau^j hbar^k.
/// For words: hbar^k e^{imt} (a+)^mu a^nu D_t^j.
struct MonomialKey {
  MultiIndex mu;
  MultiIndex nu;
  int m = 0;
  int j = 0;
  int k = 0;

  auto operator<=>(const MonomialKey&) const = default;
  bool operator==(const MonomialKey&) const = default;

  /// Joint grading, hbar counted with weight 2.
  int weight() const { return total(mu) + total(nu) + 2 * j + 2 * k; }
  /// Order of vanishing at p = tau = 0 (hbar counted with weight 0).
  int vanishing_weight() const { return total(mu) + total(nu) + 2 * j; }
  /// Kernel of ad_{H0} for non-resonant angles.
  bool resonant() const { return mu == nu && m == 0; }
};

inline constexpr int kUnboundedWeight = 1 << 20;
inline constexpr int kInfiniteOrder = INT_MAX;

struct SeriesTag {};
struct WordTag {};

/// Sparse truncated polynomial container shared by series and words.
/// Exact zeros and keys above max_weight are never stored.
template <class C, class Tag>
class BasicPoly {
 public:
  using Coeff = C;
  using Key = MonomialKey;
  using Terms = std::map<MonomialKey, C>;

  BasicPoly() = default;
  BasicPoly(int dim, int max_weight = kUnboundedWeight) : dim_(dim), max_weight_(max_weight) {
    if (dim < 0) throw InvalidInput("negative dimension");
  }

  int dim() const { return dim_; }
  int max_weight() const { return max_weight_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  C coeff(const Key& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? CoeffTraits<C>::zero() : it->second;
  }

  void add(const Key& key, const C& c) {
    check_key(key);
    if (key.weight() > max_weight_ || CoeffTraits<C>::is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(key, c);
    if (!fresh) {
      it->second += c;
      if (CoeffTraits<C>::is_zero(it->second)) terms_.erase(it);
    }
  }

  void add(const Key& key, double c) requires std::is_same_v<C, Complex> { add(key, Complex(c, 0.0)); }

  BasicPoly& operator+=(const BasicPoly& o) {
    check_dim(o);
    max_weight_ = std::min(max_weight_, o.max_weight_);
    prune();
    for (const auto& [key, c] : o.terms_) add(key, c);
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& o) {
    check_dim(o);
    max_weight_ = std::min(max_weight_, o.max_weight_);
    prune();
    for (const auto& [key, c] : o.terms_) add(key, -c);
    return *this;
  }
  BasicPoly& operator*=(const C& s) {
    if (CoeffTraits<C>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [key, c] : terms_) c *= s;
    return *this;
  }
  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator-(BasicPoly a) { return a *= -CoeffTraits<C>::one(); }
  friend BasicPoly operator*(const C& s, BasicPoly a) { return a *= s; }
  friend bool operator==(const BasicPoly& a, const BasicPoly& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Same terms, truncated to a (possibly smaller) max weight.
  BasicPoly truncated(int max_weight) const {
    BasicPoly out(dim_, max_weight);
    for (const auto& [key, c] : terms_) out.add(key, c);
    return out;
  }

  /// Terms with k <= kmax.
  BasicPoly hbar_truncated(int kmax) const {
    return filter([kmax](const Key& key) { return key.k <= kmax; });
  }

  template <class Pred>
  BasicPoly filter(Pred pred) const {
    BasicPoly out(dim_, max_weight_);
    for (const auto& [key, c] : terms_)
      if (pred(key)) out.terms_.emplace(key, c);
    return out;
  }

  /// Terms of exactly the given joint weight.
  BasicPoly weight_slice(int w) const {
    return filter([w](const Key& key) { return key.weight() == w; });
  }

  /// Minimal joint weight over stored keys; kInfiniteOrder when empty.
  int min_weight() const {
    int w = kInfiniteOrder;
    for (const auto& kv : terms_) w = std::min(w, kv.first.weight());
    return w;
  }

  double max_abs() const {
    double out = 0.0;
    for (const auto& kv : terms_) out = std::max(out, std::abs(CoeffTraits<C>::to_complex(kv.second)));
    return out;
  }

  BasicPoly<Complex, Tag> to_complex() const {
    BasicPoly<Complex, Tag> out(dim_, max_weight_);
    for (const auto& [key, c] : terms_) out.add(key, CoeffTraits<C>::to_complex(c));
    return out;
  }

  void check_dim(const BasicPoly& o) const {
    if (o.dim_ != dim_)
      throw DimensionMismatch("dimension mismatch: " + std::to_string(dim_) + " vs " + std::to_string(o.dim_));
  }

 private:
  void check_key(const Key& key) const {
    if (static_cast<int>(key.mu.size()) != dim_ || static_cast<int>(key.nu.size()) != dim_)
      throw DimensionMismatch("monomial key has wrong dimension");
    for (int v : key.mu)
      if (v < 0) throw InvalidInput("negative exponent in monomial key");
    for (int v : key.nu)
      if (v < 0) throw InvalidInput("negative exponent in monomial key");
    if (key.j < 0 || key.k < 0) throw InvalidInput("negative tau/hbar power in monomial key");
  }

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->first.weight() > max_weight_ ? terms_.erase(it) : std::next(it);
  }

  int dim_ = 0;
  int max_weight_ = kUnboundedWeight;
  Terms terms_;
};

template <class C>
using BasicFTSeries = BasicPoly<C, SeriesTag>;
using FTSeries = BasicFTSeries<Complex>;
using ExactFTSeries = BasicFTSeries<GaussianRational>;

namespace series {

template <class C = Complex>
BasicFTSeries<C> monomial(int dim, const MonomialKey& key, const C& c = CoeffTraits<C>::one(),
                          int max_weight = kUnboundedWeight) {
  BasicFTSeries<C> out(dim, max_weight);
  out.add(key, c);
  return out;
}

MonomialKey key(int dim, MultiIndex mu = {}, MultiIndex nu = {}, int m = 0, int j = 0, int k = 0);

template <class C = Complex>
BasicFTSeries<C> z(int dim, int i, int max_weight = kUnboundedWeight) {
  return monomial<C>(dim, key(dim, unit_index(dim, i), zero_index(dim)), CoeffTraits<C>::one(), max_weight);
}
template <class C = Complex>
BasicFTSeries<C> zbar(int dim, int i, int max_weight = kUnboundedWeight) {
  return monomial<C>(dim, key(dim, zero_index(dim), unit_index(dim, i)), CoeffTraits<C>::one(), max_weight);
}
template <class C = Complex>
BasicFTSeries<C> tau(int dim, int max_weight = kUnboundedWeight) {
  return monomial<C>(dim, key(dim, {}, {}, 0, 1, 0), CoeffTraits<C>::one(), max_weight);
}
template <class C = Complex>
BasicFTSeries<C> hbar(int dim, int max_weight = kUnboundedWeight) {
  return monomial<C>(dim, key(dim, {}, {}, 0, 0, 1), CoeffTraits<C>::one(), max_weight);
}
template <class C = Complex>
BasicFTSeries<C> fourier(int dim, int m, int max_weight = kUnboundedWeight) {
  return monomial<C>(dim, key(dim, {}, {}, m, 0, 0), CoeffTraits<C>::one(), max_weight);
}
template <class C = Complex>
BasicFTSeries<C> constant(int dim, const C& c, int max_weight = kUnboundedWeight) {
  return monomial<C>(dim, key(dim), c, max_weight);
}
/// p_i = z_i zbar_i / 2.
template <class C = Complex>
BasicFTSeries<C> p(int dim, int i, int max_weight = kUnboundedWeight) {
  return monomial<C>(dim, key(dim, unit_index(dim, i), unit_index(dim, i)), CoeffTraits<C>::ratio(1, 2),
                     max_weight);
}

}  // namespace series

/// Sign convention of the extended bracket, fixed once:
///   {A,B} = A_x B_xi - A_xi B_x + A_t B_tau - A_tau B_t.
/// With it {tau, e^{imt}} = -i m e^{imt} and {theta p + tau, z} = i theta z,
/// and the Moyal bracket (A#B - B#A)/(i hbar) reduces to {A,B} at leading order.
inline constexpr int kBracketSign = +1;

/// Commutative pointwise product, truncated at the smaller max weight.
template <class C>
BasicFTSeries<C> operator*(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b);

template <class C>
BasicFTSeries<C> poisson_bracket(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b);

/// Weyl composition A#B keeping result terms with hbar power <= hbar_order.
template <class C>
BasicFTSeries<C> moyal_product(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b, int hbar_order);

/// (A#B - B#A)/(i hbar), built from the odd-order bidifferential terms only,
/// keeping result terms with hbar power <= hbar_order.
template <class C>
BasicFTSeries<C> moyal_bracket(const BasicFTSeries<C>& a, const BasicFTSeries<C>& b, int hbar_order);

/// Min over keys of |mu|+|nu|+2j; kInfiniteOrder for the zero series.
template <class C>
int vanishing_order(const BasicFTSeries<C>& a) {
  int w = kInfiniteOrder;
  for (const auto& kv : a.terms()) w = std::min(w, kv.first.vanishing_weight());
  return w;
}

/// Key of the conjugate monomial: (nu, mu, -m, j, k).
MonomialKey conjugate_key(const MonomialKey& key);

/// conj(A) as a phase-space function.
template <class C>
BasicFTSeries<C> conjugate_symbol(const BasicFTSeries<C>& a) {
  BasicFTSeries<C> out(a.dim(), a.max_weight());
  for (const auto& [key, c] : a.terms()) out.add(conjugate_key(key), CoeffTraits<C>::conj(c));
  return out;
}

/// Largest |coeff(key) - conj(coeff(conjugate key))|.
double real_symbol_defect(const FTSeries& a);
inline bool is_real_symbol(const FTSeries& a, double tol = 1e-12) { return real_symbol_defect(a) <= tol; }

/// Evaluate at a phase-space point (z given as complex x + i xi).
Complex evaluate(const FTSeries& a, const std::vector<Complex>& z, double t, double tau, double hbar);

}  // namespace bnf
