#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace bnf {

struct CheckResult {
  std::string id;
  std::string name;
  bool pass = false;
  /// Supplementary checks are reported but do not decide the exit status.
  bool gating = true;
  std::string metric;
  double value = 0.0;
  std::string tolerance;
  /// Extra named quantities (condition numbers, drifts, ...).
  std::vector<std::pair<std::string, double>> fields;
  /// (hbar, error) pairs of an hbar-convergence study.
  std::vector<std::pair<double, double>> convergence;
  bool has_slope = false;
  double slope = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct Report {
  std::string title;
  std::vector<CheckResult> checks;
  /// Wall-clock seconds are left out of written files so reruns are byte-identical.
  bool timings = true;

  bool all_pass() const;
  /// One PASS/FAIL line per check, then detail lines.
  std::string to_text() const;
  nlohmann::ordered_json to_json() const;
  /// Plot-ready rows id,hbar,error.
  std::string convergence_csv() const;
};

/// Least-squares slope of log(error) against log(hbar).
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace bnf
