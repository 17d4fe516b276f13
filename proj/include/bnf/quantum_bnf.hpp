#pragma once

#include "bnf/classical_bnf.hpp"
#include "bnf/rotation.hpp"
#include "bnf/word_algebra.hpp"

#include <vector>

namespace bnf {

struct QuantumHomologicalResult {
  WordPoly F;
  /// Minus the diagonal part of G as a word, so [H0,F]/(i hbar) = G + G1_word.
  WordPoly G1_word;
  ActionPoly G1;
  double min_divisor = 0.0;
  std::vector<std::string> warnings;
};

/// Solves [H0, F]/(i hbar) = G + G1. Divisors come from commuting H0 against
/// each monomial word.
QuantumHomologicalResult solve_homological_quantum(const WordPoly& G, const RotationData& rot,
                                                   const SolveOptions& opts = {});

/// sum_k (1/k!) ([F, .]/(i hbar))^k H, truncated at max_grade.
WordPoly exp_conjugate(const WordPoly& H, const WordPoly& F, int max_grade);

struct QuantumBnfOptions {
  SolveOptions solve;
  /// Grade through which conjugations are carried; defaults to L + 2.
  int work_grade = -1;
  double symmetry_tolerance = 1e-12;
};

struct QuantumBnfResult {
  NormalForm h;
  std::vector<WordPoly> generators;
  /// Conjugated H minus h-as-word, through the work grade.
  WordPoly remainder;
  std::vector<std::string> warnings;
};

/// Quantum normal form through grade L: every grade 3..L is made diagonal.
QuantumBnfResult birkhoff_quantum(const WordPoly& H, const RotationData& rot, int L,
                                  const QuantumBnfOptions& opts = {});

/// Replays generator conjugations in order.
WordPoly replay_quantum_generators(const WordPoly& H, const std::vector<WordPoly>& gens, int max_grade);

}  // namespace bnf
