#include "bnf/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bnf {

RotationData scan_margin(const std::vector<double>& theta, int order) {
  if (order < 1) throw InvalidInput("resonance order must be at least 1");
  if (theta.empty()) throw InvalidInput("empty rotation vector");
  const int n = static_cast<int>(theta.size());
  double tmax = 0.0;
  for (double t : theta) {
    if (!std::isfinite(t)) throw InvalidInput("rotation angle is not finite");
    tmax = std::max(tmax, std::abs(t));
  }
  const int mmax = order * std::max(1, static_cast<int>(std::ceil(tmax))) + 1;

  RotationData out;
  out.theta = theta;
  out.resonance_order = order;
  out.margin = std::numeric_limits<double>::infinity();

  MultiIndex kappa(static_cast<std::size_t>(n), -order);
  while (true) {
    int norm = 0;
    double dot = 0.0;
    for (int i = 0; i < n; ++i) {
      norm += std::abs(kappa[static_cast<std::size_t>(i)]);
      dot += theta[static_cast<std::size_t>(i)] * kappa[static_cast<std::size_t>(i)];
    }
    if (norm > 0 && norm <= order) {
      for (int m = -mmax; m <= mmax; ++m) {
        double d = std::abs(dot + m);
        if (d < out.margin) {
          out.margin = d;
          // Report the representative whose first nonzero entry is positive.
          const auto lead = std::find_if(kappa.begin(), kappa.end(), [](int v) { return v != 0; });
          const int sign = *lead < 0 ? -1 : 1;
          out.worst_kappa = kappa;
          for (auto& v : out.worst_kappa) v *= sign;
          out.worst_m = sign * m;
        }
      }
    }
    int i = 0;
    for (; i < n; ++i) {
      auto& v = kappa[static_cast<std::size_t>(i)];
      if (v < order) {
        ++v;
        break;
      }
      v = -order;
    }
    if (i == n) break;
  }
  return out;
}

RotationData nonresonance_margin(const std::vector<double>& theta, int order, double threshold) {
  RotationData out = scan_margin(theta, order);
  if (out.margin < threshold)
    throw ResonanceError("resonance of order " + std::to_string(order) + ": |theta.kappa + m| = " +
                             std::to_string(out.margin) + " at kappa=" + to_string(out.worst_kappa) +
                             ", m=" + std::to_string(out.worst_m),
                         out.worst_kappa, out.worst_m, out.margin);
  return out;
}

}  // namespace bnf
