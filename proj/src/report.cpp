#include "bnf/report.hpp"

#include "bnf/errors.hpp"
#include "bnf/serialization.hpp"

#include <cmath>
#include <sstream>

namespace bnf {

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (c.gating && !c.pass) return false;
  return true;
}

std::string Report::to_text() const {
  std::ostringstream os;
  if (!title.empty()) os << title << "\n";
  for (const auto& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << (c.gating ? " " : " (supplementary) ") << c.id << ": " << c.name;
    if (!c.metric.empty()) os << " | " << c.metric << "=" << format_double(c.value);
    if (!c.tolerance.empty()) os << " (" << c.tolerance << ")";
    if (c.has_slope) os << " | slope=" << format_double(c.slope);
    if (timings) os << " | " << format_double(std::round(c.seconds * 1000.0) / 1000.0) << "s";
    os << "\n";
  }
  for (const auto& c : checks) {
    if (c.fields.empty() && c.convergence.empty() && c.detail.empty()) continue;
    os << "\n[" << c.id << "]\n";
    for (const auto& [k, v] : c.fields) os << "  " << k << " = " << format_double(v) << "\n";
    for (const auto& [h, e] : c.convergence) os << "  hbar=" << format_double(h) << " error=" << format_double(e) << "\n";
    if (!c.detail.empty()) os << "  " << c.detail << "\n";
  }
  return os.str();
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json fields = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.fields) fields[k] = v;
    nlohmann::ordered_json conv = nlohmann::ordered_json::array();
    for (const auto& [h, e] : c.convergence) conv.push_back({{"hbar", h}, {"error", e}});
    nlohmann::ordered_json j = {{"id", c.id},         {"name", c.name},       {"pass", c.pass},
                                {"gating", c.gating}, {"metric", c.metric},   {"value", c.value},
                                {"tolerance", c.tolerance}, {"fields", fields}, {"convergence", conv}};
    j["slope"] = c.has_slope ? nlohmann::ordered_json(c.slope) : nlohmann::ordered_json(nullptr);
    if (timings) j["seconds"] = c.seconds;
    j["detail"] = c.detail;
    arr.push_back(j);
  }
  return {{"title", title}, {"all_pass", all_pass()}, {"checks", arr}};
}

std::string Report::convergence_csv() const {
  std::ostringstream os;
  os << "id,hbar,error\n";
  for (const auto& c : checks)
    for (const auto& [h, e] : c.convergence) os << c.id << ',' << format_double(h) << ',' << format_double(e) << '\n';
  return os.str();
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw InvalidInput("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, e] : points) {
    if (!(h > 0) || !(e > 0)) throw InvalidInput("slope fit needs positive hbar and error");
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(points.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InvalidInput("slope fit needs distinct hbar values");
  return (n * sxy - sx * sy) / den;
}

}  // namespace bnf
