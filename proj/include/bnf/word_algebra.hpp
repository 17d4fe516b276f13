#pragma once

#include "bnf/core_series.hpp"
#include "bnf/normal_form.hpp"

#include <map>
#include <string>

namespace bnf {

/// Normal-ordered word c hbar^k e^{imt} (a+)^mu a^nu D_t^j. In a MonomialKey
/// used for words, mu holds creation powers and nu annihilation powers;
/// weight() is the grade (D_t and hbar count two letters each).
template <class C>
using BasicWordPoly = BasicPoly<C, WordTag>;
using WordPoly = BasicWordPoly<Complex>;
using ExactWordPoly = BasicWordPoly<GaussianRational>;

namespace word {

template <class C = Complex>
BasicWordPoly<C> monomial(int dim, const MonomialKey& key, const C& c = CoeffTraits<C>::one(),
                          int max_grade = kUnboundedWeight) {
  BasicWordPoly<C> out(dim, max_grade);
  out.add(key, c);
  return out;
}
template <class C = Complex>
BasicWordPoly<C> a(int dim, int i, int max_grade = kUnboundedWeight) {
  return monomial<C>(dim, series::key(dim, zero_index(dim), unit_index(dim, i)), CoeffTraits<C>::one(), max_grade);
}
template <class C = Complex>
BasicWordPoly<C> adag(int dim, int i, int max_grade = kUnboundedWeight) {
  return monomial<C>(dim, series::key(dim, unit_index(dim, i), zero_index(dim)), CoeffTraits<C>::one(), max_grade);
}
template <class C = Complex>
BasicWordPoly<C> dt(int dim, int max_grade = kUnboundedWeight) {
  return monomial<C>(dim, series::key(dim, {}, {}, 0, 1, 0), CoeffTraits<C>::one(), max_grade);
}
template <class C = Complex>
BasicWordPoly<C> hbar(int dim, int max_grade = kUnboundedWeight) {
  return monomial<C>(dim, series::key(dim, {}, {}, 0, 0, 1), CoeffTraits<C>::one(), max_grade);
}
template <class C = Complex>
BasicWordPoly<C> fourier(int dim, int m, int max_grade = kUnboundedWeight) {
  return monomial<C>(dim, series::key(dim, {}, {}, m, 0, 0), CoeffTraits<C>::one(), max_grade);
}
template <class C = Complex>
BasicWordPoly<C> constant(int dim, const C& c, int max_grade = kUnboundedWeight) {
  return monomial<C>(dim, series::key(dim), c, max_grade);
}

}  // namespace word

/// A*B in canonical order using [a_i, a_j+] = hbar delta_ij and
/// D_t e^{imt} = e^{imt} (D_t + m hbar). Exact; truncated at the smaller grade.
template <class C>
BasicWordPoly<C> normal_order_product(const BasicWordPoly<C>& a, const BasicWordPoly<C>& b);

/// (AB - BA)/(i hbar), assembled from the reordering corrections only so that
/// the leading products cancel structurally. Throws OrderingError if a term
/// without an hbar factor survives.
template <class C>
BasicWordPoly<C> commutator_over_ihbar(const BasicWordPoly<C>& a, const BasicWordPoly<C>& b);

/// Raw commutator AB - BA.
template <class C>
BasicWordPoly<C> commutator(const BasicWordPoly<C>& a, const BasicWordPoly<C>& b);

/// Formal adjoint, re-normal-ordered.
template <class C>
BasicWordPoly<C> adjoint(const BasicWordPoly<C>& a);

/// Minimal grade over stored keys; kInfiniteOrder for the zero word.
template <class C>
int wlg_grade(const BasicWordPoly<C>& a) {
  return a.min_weight();
}

/// Hermite index per degree of freedom and Fourier index on the circle.
struct BasisState {
  MultiIndex mu;
  int nu = 0;
  auto operator<=>(const BasisState&) const = default;
  bool operator==(const BasisState&) const = default;
};

using StateVector = std::map<BasisState, Complex>;

/// A acting on one basis state: a lowers with sqrt(mu hbar), a+ raises with
/// sqrt((mu+1) hbar), D_t multiplies by nu hbar, e^{imt} shifts nu by m.
StateVector apply_to_basis(const WordPoly& a, const BasisState& s, double hbar);
StateVector apply_to_vector(const WordPoly& a, const StateVector& v, double hbar);
Complex matrix_element(const WordPoly& a, const BasisState& bra, const BasisState& ket, double hbar);
double norm(const StateVector& v);

/// Diagonal part (mu = nu, m = 0) rewritten through
/// (a+)^kappa a^kappa = prod_{q<kappa} (P - hbar/2 - q hbar) and D_t^j -> tau^j.
ActionPoly diagonal_to_normal_form(const WordPoly& a);

/// Inverse direction: p^r tau^s hbar^k -> (a+ a + hbar/2)^r D_t^s hbar^k.
WordPoly word_from_action(const ActionPoly& h, int max_grade = kUnboundedWeight);

/// H0 = sum theta_i (a_i+ a_i + hbar/2) + D_t + E.
WordPoly quadratic_word(const std::vector<double>& theta, double energy = 0.0, int max_grade = kUnboundedWeight);

/// Largest |coeff| of adjoint(A) - A.
double adjoint_defect(const WordPoly& a);

/// Human-readable normal-ordered expression.
std::string pretty(const WordPoly& a);

}  // namespace bnf
