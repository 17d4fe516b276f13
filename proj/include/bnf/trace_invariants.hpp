#pragma once

#include "bnf/normal_form.hpp"
#include "bnf/rotation.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bnf {

/// Derivatives phi_hat^{(k)}(2 pi l), k = 0..K.
struct TestFunctionJet {
  int l = 1;
  std::vector<Complex> derivs;
  std::string id;

  double base_point() const;
  int depth() const { return static_cast<int>(derivs.size()) - 1; }
};

/// phi_hat(t) = exp(-(u - offset)^2 / (2 sigma^2)) chi(u), u = t - 2 pi l,
/// with chi a C-infinity cutoff equal to 1 on |u| <= flat and 0 on |u| >= support.
struct GaussianBump {
  double sigma = 0.4;
  double offset = 0.3;
  double flat = 2.2;
  double support = 2.9;
  /// Trapezoid nodes used for phi on [2 pi l - support, 2 pi l + support].
  int nodes = 4096;

  void validate() const;
  double cutoff(double u) const;
  double profile(double u) const;
  /// Jet of phi_hat at 2 pi l. The cutoff is flat there, so only the Gaussian contributes.
  TestFunctionJet jet(int l, int depth) const;
  /// phi(x) = (1/2 pi) int phi_hat(t) e^{itx} dt by the trapezoid rule.
  Complex phi(double x, int l) const;
  /// Quadrature description for reports.
  std::string describe() const;
};

/// Sum over mu of e^{i w (mu + 1/2)} = (i/2) csc(w/2); Taylor coefficients at w0.
std::vector<Complex> csc_kernel_taylor(double w0, int count);

/// d_t^S [ phi_hat(t) t^b e^{i t phase} prod_i F^{(R_i)}(t theta_i) ] at t = 2 pi l,
/// with F(w) = (i/2) csc(w/2).
Complex trace_kernel(const MultiIndex& R, int S, int b, const TestFunctionJet& jet, const std::vector<double>& theta,
                     double phase = 0.0, double threshold = kDefaultResonanceThreshold);

/// (-i d/(t d theta))^r (-i d/dt)^s [ e^{it sum theta/2} / prod(1 - e^{it theta_i}) t phi_hat(t) ]
/// at t = 2 pi l. Each theta derivative is taken before dividing by t; the
/// t derivatives act on the result.
Complex g_function(const MultiIndex& r, int s, const TestFunctionJet& jet, const RotationData& rot,
                   double threshold = kDefaultResonanceThreshold);

struct TraceExpansion {
  /// (l, m) -> d_l^m.
  std::map<std::pair<int, int>, Complex> entries;
  std::map<int, TestFunctionJet> jets;
  RotationData theta;
  /// Coefficient of the bare hbar term, carried exactly as a phase e^{it c}.
  /// The inversion only uses it to pick the branch of the recovered value.
  double hbar_shift = 0.0;
  int M = 0;
};

/// d_l^m for m < M from the exponential-of-derivations expansion. A
/// coefficient c_{r,s,k} enters first at m = |r|+s+k-1.
TraceExpansion forward_trace_expansion(const NormalForm& nf, const std::vector<TestFunctionJet>& jets, int M);

struct InversionOrderReport {
  int m = 0;
  int unknowns = 0;
  int rows = 0;
  double condition = 0.0;
  double residual = 0.0;
};

struct InversionOptions {
  /// Largest hbar power allowed inside an unknown coefficient.
  int k_max = 0;
  double condition_threshold = 1e10;
  double residual_tolerance = 1e-8;
};

struct InversionResult {
  NormalForm nf;
  /// Bare hbar coefficient read off the phase of d^0 (branch nearest the data's hint).
  double hbar_shift = 0.0;
  std::vector<InversionOrderReport> reports;
};

/// Recovers c_{r,s,k} with |r|+s+k <= M order by order in m, subtracting
/// the forward prediction of the lower orders before each solve. The
/// m = 0 report covers the bare hbar coefficient.
InversionResult invert_trace_expansion(const TraceExpansion& tr, const RotationData& rot, int M,
                                       const InversionOptions& opts = {});

}  // namespace bnf
