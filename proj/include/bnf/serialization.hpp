#pragma once

#include "bnf/core_series.hpp"
#include "bnf/normal_form.hpp"
#include "bnf/trace_invariants.hpp"
#include "bnf/word_algebra.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace bnf {

/// Shortest text that parses back to the same double.
std::string format_double(double v);

/// Records {mu, nu, m, j, k, re, im}; doubles round-trip bit-exactly.
nlohmann::ordered_json to_json(const FTSeries& s);
nlohmann::ordered_json to_json(const WordPoly& w);
FTSeries series_from_json(const nlohmann::json& records, int dim, int max_weight = kUnboundedWeight);
WordPoly words_from_json(const nlohmann::json& records, int dim, int max_grade = kUnboundedWeight);

/// CSV with header mu,nu,m,j,k,re,im; multi-indices are ';'-separated.
void write_csv(std::ostream& os, const FTSeries& s);
void write_csv(std::ostream& os, const WordPoly& w);
FTSeries series_from_csv(std::istream& is, int dim);

/// Rows {route, r, s, k, coeff}.
nlohmann::ordered_json to_json(const NormalForm& nf);
NormalForm normal_form_from_json(const nlohmann::json& j);
void write_csv(std::ostream& os, const NormalForm& nf);
NormalForm normal_form_from_csv(std::istream& is);

/// Entries, jets, angles and the bare hbar shift.
nlohmann::ordered_json to_json(const TraceExpansion& tr);
TraceExpansion trace_from_json(const nlohmann::json& j);
/// Rows l,m,re,im,jet_id.
void write_csv(std::ostream& os, const TraceExpansion& tr);

}  // namespace bnf
