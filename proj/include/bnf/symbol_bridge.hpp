#pragma once

#include "bnf/core_series.hpp"
#include "bnf/normal_form.hpp"
#include "bnf/word_algebra.hpp"

#include <map>
#include <vector>

namespace bnf {

/// Weyl symbol of a word, built as a Moyal product of the letter symbols
/// a_i -> z_i/sqrt2, a_i+ -> zbar_i/sqrt2, D_t -> tau, e^{imt} -> e^{imt}.
FTSeries weyl_symbol(const WordPoly& w);

/// Heat map exp(hbar sum_i d_{z_i} d_{zbar_i}) (Weyl to Wick), keeping hbar powers <= hbar_order.
FTSeries wick_from_weyl(const FTSeries& s, int hbar_order);
/// Inverse heat map exp(-hbar sum_i d_{z_i} d_{zbar_i}).
FTSeries weyl_from_wick(const FTSeries& s, int hbar_order);
RadialSymbol wick_from_weyl(const RadialSymbol& s, int hbar_order);
RadialSymbol weyl_from_wick(const RadialSymbol& s, int hbar_order);

/// One degree of freedom: Weyl symbol of P^r as a polynomial in (p, hbar),
/// r! [s^r] sec(s hbar/2) exp(2i tan(s hbar/2) p/hbar) with the (-i)^r
/// absorbed. Exact rationals; only even hbar powers occur.
std::map<std::pair<int, int>, Rational> weyl_of_power(int r);

/// Weyl symbol of the operator h(P_1..P_n, D_t, hbar); tau passes through.
RadialSymbol weyl_of_functional_calculus(const RadialSymbol& h, int hbar_order);
NormalForm weyl_of_functional_calculus(const NormalForm& h, int hbar_order);

/// h((k+1/2) hbar, ..., (k+1/2) hbar; tau = 0) for k = 0..kmax.
std::vector<double> diagonal_values_check(const NormalForm& h, double hbar, int kmax);

/// Predicted semiclassical normal form from the quantum one.
NormalForm relate_normal_forms(const NormalForm& h_quantum, int hbar_order);

struct RouteComparison {
  RadialSymbol quantum;
  RadialSymbol predicted;
  RadialSymbol semiclassical;
  /// Largest |predicted - semiclassical| over all keys.
  double max_discrepancy = 0.0;
  /// max |H' - h| per hbar power.
  std::map<int, double> shift_by_hbar;
};

/// Compares relate_normal_forms(h_quantum) against a semiclassical H'
/// through hbar_order.
RouteComparison compare_routes(const NormalForm& h_quantum, const NormalForm& h_semiclassical, int hbar_order);

}  // namespace bnf
