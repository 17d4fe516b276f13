#include "bnf/serialization.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace bnf {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidInput("bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidInput("bad integer '" + s + "'");
  return v;
}

std::string join(const MultiIndex& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ";" : "") + std::to_string(a[i]);
  return out;
}

MultiIndex split_index(const std::string& s) {
  MultiIndex out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ';')) out.push_back(parse_int(part));
  return out;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class Tag>
ordered_json records(const BasicPoly<Complex, Tag>& p) {
  ordered_json out = ordered_json::array();
  for (const auto& [key, c] : p.terms())
    out.push_back({{"mu", key.mu}, {"nu", key.nu}, {"m", key.m}, {"j", key.j}, {"k", key.k}, {"re", c.real()},
                   {"im", c.imag()}});
  return out;
}

MultiIndex index_field(const json& r, const char* name, int dim) {
  if (!r.contains(name)) return zero_index(dim);
  MultiIndex v = r.at(name).get<MultiIndex>();
  if (static_cast<int>(v.size()) != dim)
    throw DimensionMismatch(std::string("record field '") + name + "' has " + std::to_string(v.size()) +
                            " entries, expected " + std::to_string(dim));
  for (int x : v)
    if (x < 0) throw InvalidInput(std::string("record field '") + name + "' has a negative entry");
  return v;
}

template <class Tag>
BasicPoly<Complex, Tag> from_records(const json& recs, int dim, int max_weight) {
  if (!recs.is_array()) throw InvalidInput("monomial records must be an array");
  BasicPoly<Complex, Tag> out(dim, max_weight);
  for (const auto& r : recs) {
    if (!r.is_object()) throw InvalidInput("monomial record must be an object");
    MonomialKey key{index_field(r, "mu", dim), index_field(r, "nu", dim), r.value("m", 0), r.value("j", 0),
                    r.value("k", 0)};
    if (key.j < 0 || key.k < 0) throw InvalidInput("record exponents j and k must be non-negative");
    out.add(key, Complex(r.value("re", 0.0), r.value("im", 0.0)));
  }
  return out;
}

template <class Tag>
void csv_records(std::ostream& os, const BasicPoly<Complex, Tag>& p) {
  os << "mu,nu,m,j,k,re,im\n";
  for (const auto& [key, c] : p.terms())
    os << join(key.mu) << ',' << join(key.nu) << ',' << key.m << ',' << key.j << ',' << key.k << ','
       << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
}

}  // namespace

ordered_json to_json(const FTSeries& s) { return records(s); }
ordered_json to_json(const WordPoly& w) { return records(w); }

FTSeries series_from_json(const json& recs, int dim, int max_weight) {
  return from_records<SeriesTag>(recs, dim, max_weight);
}
WordPoly words_from_json(const json& recs, int dim, int max_grade) {
  return from_records<WordTag>(recs, dim, max_grade);
}

void write_csv(std::ostream& os, const FTSeries& s) { csv_records(os, s); }
void write_csv(std::ostream& os, const WordPoly& w) { csv_records(os, w); }

FTSeries series_from_csv(std::istream& is, int dim) {
  std::string line;
  if (!std::getline(is, line) || line != "mu,nu,m,j,k,re,im") throw InvalidInput("missing series CSV header");
  FTSeries out(dim);
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != 7) throw InvalidInput("series CSV row " + std::to_string(row) + " needs 7 cells");
    MonomialKey key{split_index(cells[0]), split_index(cells[1]), parse_int(cells[2]), parse_int(cells[3]),
                    parse_int(cells[4])};
    if (static_cast<int>(key.mu.size()) != dim || static_cast<int>(key.nu.size()) != dim)
      throw DimensionMismatch("series CSV row " + std::to_string(row) + " has the wrong dimension");
    out.add(key, Complex(parse_double(cells[5]), parse_double(cells[6])));
  }
  return out;
}

ordered_json to_json(const NormalForm& nf) {
  ordered_json rows = ordered_json::array();
  for (const auto& [key, c] : nf.poly.terms())
    rows.push_back({{"r", key.r}, {"s", key.s}, {"k", key.k}, {"coeff", c}});
  return {{"route", route_name(nf.route)}, {"dim", nf.dim()}, {"terms", rows}};
}

NormalForm normal_form_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  RadialSymbol poly(dim);
  for (const auto& r : j.at("terms")) {
    MultiIndex idx = r.at("r").get<MultiIndex>();
    if (static_cast<int>(idx.size()) != dim) throw DimensionMismatch("normal-form row has the wrong dimension");
    poly.add({idx, r.value("s", 0), r.value("k", 0)}, r.at("coeff").get<double>());
  }
  return NormalForm(poly, route_from_name(j.value("route", std::string("classical"))));
}

void write_csv(std::ostream& os, const NormalForm& nf) {
  os << "route,r,s,k,coeff\n";
  for (const auto& [key, c] : nf.poly.terms())
    os << route_name(nf.route) << ',' << join(key.r) << ',' << key.s << ',' << key.k << ',' << format_double(c) << '\n';
}

NormalForm normal_form_from_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "route,r,s,k,coeff") throw InvalidInput("missing normal-form CSV header");
  std::vector<std::pair<NFKey, double>> rows;
  Route route = Route::Classical;
  int dim = -1;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != 5) throw InvalidInput("normal-form CSV row " + std::to_string(row) + " needs 5 cells");
    route = route_from_name(cells[0]);
    NFKey key{split_index(cells[1]), parse_int(cells[2]), parse_int(cells[3])};
    if (dim < 0) dim = static_cast<int>(key.r.size());
    if (static_cast<int>(key.r.size()) != dim) throw DimensionMismatch("normal-form CSV rows disagree in dimension");
    rows.emplace_back(key, parse_double(cells[4]));
  }
  if (dim < 0) throw InvalidInput("empty normal-form CSV");
  RadialSymbol poly(dim);
  for (const auto& [k, c] : rows) poly.add(k, c);
  return NormalForm(poly, route);
}

ordered_json to_json(const TraceExpansion& tr) {
  ordered_json entries = ordered_json::array();
  for (const auto& [lm, d] : tr.entries)
    entries.push_back({{"l", lm.first}, {"m", lm.second}, {"re", d.real()}, {"im", d.imag()}});
  ordered_json jets = ordered_json::array();
  for (const auto& [l, jet] : tr.jets) {
    ordered_json re = ordered_json::array(), im = ordered_json::array();
    for (const auto& c : jet.derivs) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    jets.push_back({{"l", l}, {"id", jet.id}, {"re", re}, {"im", im}});
  }
  return {{"M", tr.M}, {"theta", tr.theta.theta}, {"hbar_shift", tr.hbar_shift}, {"jets", jets}, {"entries", entries}};
}

TraceExpansion trace_from_json(const json& j) {
  TraceExpansion tr;
  tr.M = j.at("M").get<int>();
  tr.theta.theta = j.at("theta").get<std::vector<double>>();
  tr.hbar_shift = j.value("hbar_shift", 0.0);
  for (const auto& jj : j.at("jets")) {
    TestFunctionJet jet;
    jet.l = jj.at("l").get<int>();
    jet.id = jj.value("id", std::string());
    const auto re = jj.at("re").get<std::vector<double>>();
    const auto im = jj.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw InvalidInput("jet real and imaginary parts differ in length");
    for (std::size_t i = 0; i < re.size(); ++i) jet.derivs.emplace_back(re[i], im[i]);
    tr.jets[jet.l] = jet;
  }
  for (const auto& e : j.at("entries"))
    tr.entries[{e.at("l").get<int>(), e.at("m").get<int>()}] = Complex(e.at("re").get<double>(), e.at("im").get<double>());
  return tr;
}

void write_csv(std::ostream& os, const TraceExpansion& tr) {
  os << "l,m,re,im,jet_id\n";
  for (const auto& [lm, d] : tr.entries) {
    auto it = tr.jets.find(lm.first);
    os << lm.first << ',' << lm.second << ',' << format_double(d.real()) << ',' << format_double(d.imag()) << ','
       << (it == tr.jets.end() ? std::string() : it->second.id) << '\n';
  }
}

}  // namespace bnf
