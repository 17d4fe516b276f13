#pragma once

#include "bnf/config.hpp"
#include "bnf/report.hpp"
#include "bnf/word_algebra.hpp"

#include <cstdint>

namespace bnf {

struct VerifyOptions {
  std::uint64_t seed = 20261015;
  /// Named tolerance overrides (keys listed in the README).
  ToleranceOverrides tolerances;
  bool supplementary = true;
  /// Worker threads for independent hbar-grid points.
  int threads = 1;
};

/// H = theta (a+ a + hbar/2) + D_t + eps (a + a+)^power, n = 1, theta = sqrt2 - 1.
WordPoly anharmonic_word(double eps, int power);
FTSeries anharmonic_symbol(double eps, int power);

CheckResult check_homological_residuals(const VerifyOptions& opts);
CheckResult check_quantum_vs_oracle(const VerifyOptions& opts);
CheckResult check_weyl_calculus(const VerifyOptions& opts);
CheckResult check_route_equivalence(const VerifyOptions& opts);
CheckResult check_trace_round_trip(const VerifyOptions& opts);
CheckResult check_trace_regression(const VerifyOptions& opts);
CheckResult check_algebra_invariants(const VerifyOptions& opts);

/// Non-gating companions: the oracle comparison on a confining quartic, the
/// forward trace against the exact normal-form spectrum, and the coherent-state identities.
std::vector<CheckResult> supplementary_checks(const VerifyOptions& opts);

/// The seven acceptance checks, plus the supplementary ones if requested.
Report run_all(const VerifyOptions& opts = {});

}  // namespace bnf
