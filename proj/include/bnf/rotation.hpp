#pragma once

#include "bnf/core_series.hpp"

#include <vector>

namespace bnf {

/// Rotation angles and the smallest divisor |theta.kappa + m| seen in a scan.
struct RotationData {
  std::vector<double> theta;
  int resonance_order = 0;
  double margin = 0.0;
  MultiIndex worst_kappa;
  int worst_m = 0;

  int dim() const { return static_cast<int>(theta.size()); }
};

inline constexpr double kDefaultResonanceThreshold = 1e-9;

/// Scans 0 < |kappa| <= order and |m| <= order * max(1, ceil(max theta)) + 1
/// (kappa signed) and records the minimal |theta.kappa + m|.
/// Throws ResonanceError when the margin is below the threshold.
RotationData nonresonance_margin(const std::vector<double>& theta, int order,
                                 double threshold = kDefaultResonanceThreshold);

/// Same scan without the threshold check.
RotationData scan_margin(const std::vector<double>& theta, int order);

}  // namespace bnf
