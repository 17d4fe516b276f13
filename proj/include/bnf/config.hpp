#pragma once

#include "bnf/classical_bnf.hpp"
#include "bnf/core_series.hpp"
#include "bnf/normal_form.hpp"
#include "bnf/rotation.hpp"
#include "bnf/trace_invariants.hpp"
#include "bnf/word_algebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bnf {

struct OracleSpec {
  int hermite_cut = 60;
  int fourier_cut = 0;
  std::size_t budget = 4000;
  /// Energy window; unset means the lowest `count` safe states.
  std::optional<std::pair<double, double>> window;
  int count = 10;
};

/// Problem description loaded from a JSON config. The Hamiltonian is
/// H0(theta, E) plus the listed terms, given as symbol records, word
/// records, or both.
struct ProblemConfig {
  int n = 1;
  std::vector<double> theta;
  double E = 0.0;
  std::optional<FTSeries> series_terms;
  std::optional<WordPoly> word_terms;

  int weight = 6;
  int hbar_order = 2;
  int L = 6;
  int M = 4;
  int k_max = 0;
  double resonance_threshold = kDefaultResonanceThreshold;
  TauPolicy tau_policy = TauPolicy::Sweep;

  std::vector<double> hbar_grid;
  GaussianBump bump;
  std::vector<int> periods;
  OracleSpec oracle;

  /// Normal form used by trace-forward instead of the quantum route.
  std::optional<NormalForm> trace_normal_form;
  /// Trace data read by trace-invert.
  std::string trace_input;

  std::uint64_t seed = 1;
  std::string source;
  RotationData rot;

  /// Full symbol H0 + terms (the word terms are mapped through weyl_symbol if no symbol terms are given).
  FTSeries hamiltonian_series() const;
  /// Full operator H0 + terms; requires word terms.
  WordPoly hamiltonian_words() const;
};

/// Parses and validates; errors carry the config line where possible.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

/// Line of the value at a '/'-separated path (object keys or array indices); 0 if not found.
int config_line(const std::string& text, const std::string& path);

using ToleranceOverrides = std::map<std::string, double>;
ToleranceOverrides load_tolerance_overrides(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace bnf
