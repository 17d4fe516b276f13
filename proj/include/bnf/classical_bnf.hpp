#pragma once

#include "bnf/core_series.hpp"
#include "bnf/normal_form.hpp"
#include "bnf/rotation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bnf {

/// Which bracket drives the conjugation: Poisson (classical) or Moyal
/// truncated at an hbar order (semiclassical).
struct Bracket {
  enum class Kind { Poisson, Moyal };
  Kind kind = Kind::Poisson;
  int hbar_order = 0;

  static Bracket poisson() { return {Kind::Poisson, 0}; }
  static Bracket moyal(int hbar_order) { return {Kind::Moyal, hbar_order}; }
};

FTSeries apply_bracket(const FTSeries& a, const FTSeries& b, const Bracket& br);

/// E + tau + sum theta_i p_i (E defaults to 0; constants do not affect brackets).
FTSeries quadratic_hamiltonian(const RotationData& rot, double energy = 0.0, int max_weight = kUnboundedWeight);

struct HomologicalResult {
  FTSeries F;
  /// Minus the resonant part of G, so that {H0,F} = G + G1.
  FTSeries G1;
  ActionPoly G1_action;
  double min_divisor = 0.0;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  double threshold = kDefaultResonanceThreshold;
  /// Divisors below this (but above threshold) are reported as warnings.
  double warn_below = 1e-6;
};

/// Solves bracket(H0, F) = G + G1 monomial by monomial. Each divisor is read
/// off from bracket(H0, monomial), so no eigenvalue formula is hardcoded.
HomologicalResult solve_homological_classical(const FTSeries& G, const RotationData& rot, const Bracket& br,
                                              const SolveOptions& opts = {});

/// sum_k (1/k!) ad_F^k H with ad_F X = bracket(F, X), truncated at max_weight.
FTSeries lie_conjugate(const FTSeries& H, const FTSeries& F, const Bracket& br, int max_weight);

struct GeneratorEntry {
  int kappa = 0;
  FTSeries F;
};
using GeneratorLog = std::vector<GeneratorEntry>;

/// Treatment of pure tau^j terms (j >= 2) in the input.
enum class TauPolicy {
  Sweep,            ///< kept as resonant terms of the normal form
  RequireFlattened  ///< rejected: input must already have h(tau) = tau
};

struct BnfOptions {
  SolveOptions solve;
  TauPolicy tau_policy = TauPolicy::Sweep;
  /// Weight through which conjugations are carried; the remainder is exact
  /// up to it. Defaults to order + 2.
  int work_weight = -1;
  /// Solve and conjugate one monomial at a time in a seeded shuffled order.
  bool split_monomials = false;
  std::uint64_t shuffle_seed = 0;
};

struct BnfResult {
  NormalForm nf;
  GeneratorLog generators;
  FTSeries remainder;
  std::vector<std::string> warnings;
};

/// Classical normal form through weight `order` of the hbar-free slice of H.
BnfResult birkhoff_classical(const FTSeries& H, const RotationData& rot, int order, const BnfOptions& opts = {});

/// Semiclassical normal form: Moyal conjugation, hbar powers <= hbar_order.
BnfResult birkhoff_semiclassical(const FTSeries& H, const RotationData& rot, int order, int hbar_order,
                                 const BnfOptions& opts = {});

/// Replays the generator log on H (same bracket), for audits.
FTSeries replay_generators(const FTSeries& H, const GeneratorLog& log, const Bracket& br, int max_weight);

}  // namespace bnf
