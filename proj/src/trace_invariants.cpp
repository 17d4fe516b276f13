#include "bnf/trace_invariants.hpp"

#include "bnf/power_series.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace bnf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex ipow_c(Complex base, int e) {
  Complex out{1.0, 0.0};
  for (int q = 0; q < e; ++q) out *= base;
  return out;
}

double smooth_step(double s) {
  // 0 for s <= 0, 1 for s >= 1, C-infinity in between.
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

}  // namespace

double TestFunctionJet::base_point() const { return kTwoPi * l; }

void GaussianBump::validate() const {
  if (!(sigma > 0)) throw InvalidInput("bump sigma must be positive");
  if (!(flat > 0) || !(support > flat)) throw InvalidInput("bump needs 0 < flat < support");
  if (support >= std::numbers::pi) throw InvalidInput("bump support must stay within one period (support < pi)");
  if (std::abs(offset) >= flat) throw InvalidInput("bump offset must lie inside the flat region");
  if (nodes < 16) throw InvalidInput("bump quadrature needs at least 16 nodes");
}

double GaussianBump::cutoff(double u) const {
  const double a = std::abs(u);
  return smooth_step((support - a) / (support - flat));
}

double GaussianBump::profile(double u) const {
  const double v = (u - offset) / sigma;
  return std::exp(-0.5 * v * v) * cutoff(u);
}

TestFunctionJet GaussianBump::jet(int l, int depth) const {
  validate();
  if (depth < 0) throw JetDepthError("negative jet depth");
  const std::size_t len = static_cast<std::size_t>(depth) + 1;
  // exp(-(u-d)^2/(2 s^2)) = exp(-d^2/(2 s^2)) exp(u d / s^2 - u^2 / (2 s^2)).
  ps::Series<Complex> q(len, Complex{});
  if (len > 1) q[1] = offset / (sigma * sigma);
  if (len > 2) q[2] = -0.5 / (sigma * sigma);
  ps::Series<Complex> e = ps::exp_nilpotent(q, len);
  const double c0 = std::exp(-0.5 * offset * offset / (sigma * sigma));
  TestFunctionJet out;
  out.l = l;
  double fact = 1.0;
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    out.derivs.push_back(c0 * e[k] * fact);
  }
  std::ostringstream id;
  id << "gauss sigma=" << sigma << " offset=" << offset << " l=" << l;
  out.id = id.str();
  return out;
}

Complex GaussianBump::phi(double x, int l) const {
  const double h = 2.0 * support / nodes;
  Complex sum{};
  // Endpoints vanish (cutoff), so the plain sum is the trapezoid rule.
  for (int q = 1; q < nodes; ++q) {
    const double u = -support + q * h;
    const double w = profile(u);
    if (w == 0.0) continue;
    const double t = kTwoPi * l + u;
    sum += w * std::exp(Complex(0.0, t * x));
  }
  return sum * h / kTwoPi;
}

std::string GaussianBump::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "trapezoid nodes=" << nodes << " on [2 pi l - " << support << ", 2 pi l + " << support << "], sigma=" << sigma
     << ", offset=" << offset << ", flat=" << flat;
  return os.str();
}

std::vector<Complex> csc_kernel_taylor(double w0, int count) {
  const std::size_t len = static_cast<std::size_t>(count);
  const double x0 = 0.5 * w0;
  const double sx = std::sin(x0), cx = std::cos(x0);
  ps::Series<Complex> s(len);
  double scale = 1.0;
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) scale /= 2.0 * static_cast<double>(k);
    double d = 0.0;
    switch (k % 4) {
      case 0: d = sx; break;
      case 1: d = cx; break;
      case 2: d = -sx; break;
      default: d = -cx; break;
    }
    s[k] = d * scale;
  }
  ps::Series<Complex> r = ps::reciprocal(s, len);
  for (auto& v : r) v *= 0.5 * kI;
  return r;
}

Complex trace_kernel(const MultiIndex& R, int S, int b, const TestFunctionJet& jet, const std::vector<double>& theta,
                     double phase, double threshold) {
  if (R.size() != theta.size()) throw DimensionMismatch("derivative multi-index and theta differ in length");
  if (S < 0 || b < 0) throw InvalidInput("negative derivative order");
  if (jet.depth() < S)
    throw JetDepthError("jet at l=" + std::to_string(jet.l) + " has depth " + std::to_string(jet.depth()) +
                        ", need " + std::to_string(S));
  const std::size_t len = static_cast<std::size_t>(S) + 1;
  const double t0 = jet.base_point();

  ps::Series<Complex> acc(len, Complex{});
  double fact = 1.0;
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    acc[k] = jet.derivs[k] / fact;
  }
  // t^b = (t0 + u)^b
  ps::Series<Complex> tb(len, Complex{});
  for (std::size_t k = 0; k < len && static_cast<int>(k) <= b; ++k)
    tb[k] = static_cast<double>(binomial(b, static_cast<int>(k))) * std::pow(t0, b - static_cast<int>(k));
  acc = ps::mul(acc, tb, len);
  if (phase != 0.0) {
    ps::Series<Complex> ph(len, Complex{});
    Complex term = std::exp(Complex(0.0, phase * t0));
    for (std::size_t k = 0; k < len; ++k) {
      if (k > 0) term *= Complex(0.0, phase) / static_cast<double>(k);
      ph[k] = term;
    }
    acc = ps::mul(acc, ph, len);
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double th = theta[i];
    const double gap = std::abs(1.0 - std::exp(Complex(0.0, t0 * th)));
    if (gap < threshold)
      throw ResonanceError("|1 - e^{2 pi i l theta}| = " + std::to_string(gap) + " at l=" + std::to_string(jet.l),
                           std::vector<int>(theta.size(), 0), jet.l, gap);
    const int r = R[i];
    const std::vector<Complex> f = csc_kernel_taylor(t0 * th, r + static_cast<int>(len));
    ps::Series<Complex> fr(len, Complex{});
    for (std::size_t k = 0; k < len; ++k) {
      // F^{(r)}(w0 + theta u): coefficient of u^k.
      fr[k] = f[k + static_cast<std::size_t>(r)] * (static_cast<double>(falling(static_cast<int>(k) + r, r)) *
                                                   std::pow(th, static_cast<int>(k)));
    }
    acc = ps::mul(acc, fr, len);
  }
  return acc[len - 1] * static_cast<double>(factorial(S));
}

Complex g_function(const MultiIndex& r, int s, const TestFunctionJet& jet, const RotationData& rot, double threshold) {
  return ipow_c(-kI, total(r) + s) * trace_kernel(r, s, 1, jet, rot.theta, 0.0, threshold);
}

namespace {

struct QTerm {
  int a;  // hbar exponent |r|+s+k-1
  MultiIndex r;
  int s;
  double c;
};

struct FreePart {
  std::vector<double> theta;
  double hbar_shift = 0.0;
  std::vector<QTerm> q;
};

FreePart split_normal_form(const NormalForm& nf) {
  FreePart out;
  const int n = nf.dim();
  out.theta = nf.theta();
  if (std::abs(nf.tau_coefficient() - 1.0) > 1e-12) throw InvalidInput("normal form must have tau coefficient 1");
  for (const auto& [key, c] : nf.poly.terms()) {
    const int g = key.degree() + key.k;
    if (g == 0) continue;  // E drops out of phi((lambda - E)/hbar)
    if (g == 1) {
      if (key.k == 1) out.hbar_shift = c;
      continue;  // theta and tau are the free part
    }
    if (key.r.size() != static_cast<std::size_t>(n)) throw DimensionMismatch("bad normal-form key");
    out.q.push_back({g - 1, key.r, key.s, c});
  }
  return out;
}

using ZKey = std::tuple<int, MultiIndex, int>;  // (a, R, S)

// Coefficients of (Q/hbar)^K for K = 0..M-1 as polynomials in hbar^a X^R nu^S, a <= M-1.
std::vector<std::map<ZKey, Complex>> q_powers(const FreePart& fp, int n, int M) {
  std::vector<std::map<ZKey, Complex>> powers;
  std::map<ZKey, Complex> cur;
  cur[{0, zero_index(n), 0}] = 1.0;
  powers.push_back(cur);
  for (int K = 1; K < M; ++K) {
    std::map<ZKey, Complex> next;
    for (const auto& [key, c] : cur)
      for (const auto& q : fp.q) {
        const int a = std::get<0>(key) + q.a;
        if (a > M - 1) continue;
        next[{a, std::get<1>(key) + q.r, std::get<2>(key) + q.s}] += c * q.c;
      }
    powers.push_back(next);
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return powers;
}

Complex linear_kernel(const MultiIndex& r, int s, const TestFunctionJet& jet, const std::vector<double>& theta,
                      double phase) {
  return kI * ipow_c(-kI, total(r)) * ipow_c(kI, s) * trace_kernel(r, s, 1, jet, theta, phase);
}

}  // namespace

TraceExpansion forward_trace_expansion(const NormalForm& nf, const std::vector<TestFunctionJet>& jets, int M) {
  if (M < 1) throw InvalidInput("trace expansion order M must be at least 1");
  const FreePart fp = split_normal_form(nf);
  const int n = nf.dim();
  TraceExpansion out;
  out.theta = scan_margin(fp.theta, 1);
  out.hbar_shift = fp.hbar_shift;
  out.M = M;
  const auto powers = q_powers(fp, n, M);
  for (const auto& jet : jets) {
    out.jets[jet.l] = jet;
    std::vector<Complex> d(static_cast<std::size_t>(M), Complex{});
    double inv_fact = 1.0;
    for (std::size_t K = 0; K < powers.size(); ++K) {
      if (K > 0) inv_fact /= static_cast<double>(K);
      const Complex pref = ipow_c(kI, static_cast<int>(K)) * inv_fact;
      for (const auto& [key, c] : powers[K]) {
        const auto& [a, R, S] = key;
        const Complex kern = trace_kernel(R, S, static_cast<int>(K), jet, fp.theta, fp.hbar_shift);
        d[static_cast<std::size_t>(a)] += pref * c * ipow_c(-kI, total(R)) * ipow_c(kI, S) * kern;
      }
    }
    for (int m = 0; m < M; ++m) out.entries[{jet.l, m}] = d[static_cast<std::size_t>(m)];
  }
  return out;
}

namespace {

// All (r, s, k) with |r| + s + k = g and k <= k_max, in a fixed order.
std::vector<NFKey> unknowns_of_total(int n, int g, int k_max) {
  std::vector<NFKey> out;
  for (int k = 0; k <= std::min(k_max, g); ++k)
    for (int s = g - k; s >= 0; --s) {
      const int deg = g - k - s;
      // compositions of deg into n parts
      MultiIndex r(static_cast<std::size_t>(n), 0);
      std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n - 1) {
          r[static_cast<std::size_t>(i)] = left;
          out.push_back({r, s, k});
          return;
        }
        for (int v = left; v >= 0; --v) {
          r[static_cast<std::size_t>(i)] = v;
          rec(i + 1, left - v);
        }
      };
      rec(0, deg);
    }
  return out;
}

}  // namespace

InversionResult invert_trace_expansion(const TraceExpansion& tr, const RotationData& rot, int M,
                                       const InversionOptions& opts) {
  if (M < 1) throw InvalidInput("inversion order M must be at least 1");
  const int n = rot.dim();
  if (tr.jets.empty()) throw InvalidInput("trace data has no periods");
  RadialSymbol known(n);
  for (int i = 0; i < n; ++i) known.add(nf_key(n, unit_index(n, i)), rot.theta[static_cast<std::size_t>(i)]);
  known.add(nf_key(n, {}, 1, 0), 1.0);

  std::vector<TestFunctionJet> jets;
  for (const auto& kv : tr.jets) jets.push_back(kv.second);

  InversionResult result;
  // The bare hbar coefficient c only rotates d^0 by e^{2 pi i l c}.
  {
    const TraceExpansion free = forward_trace_expansion(NormalForm(known, Route::Trace), jets, 1);
    std::vector<Complex> ratio;
    for (const auto& jet : jets) {
      auto it = tr.entries.find({jet.l, 0});
      if (it == tr.entries.end()) throw InvalidInput("missing d_l^0 for l=" + std::to_string(jet.l));
      const Complex f = free.entries.at({jet.l, 0});
      if (std::abs(f) < 1e-300) throw IllConditionedError("free trace term vanishes", std::numeric_limits<double>::infinity());
      ratio.push_back(it->second / f);
    }
    const int l0 = jets.front().l;
    const double base = std::arg(ratio.front()) / (kTwoPi * l0);
    const double q = std::round((tr.hbar_shift - base) * l0);
    const double c = base + q / l0;
    InversionOrderReport rep;
    rep.m = 0;
    rep.unknowns = 1;
    rep.rows = static_cast<int>(2 * jets.size());
    rep.condition = 1.0;
    for (std::size_t li = 0; li < jets.size(); ++li)
      rep.residual = std::max(rep.residual, std::abs(ratio[li] - std::exp(Complex(0.0, kTwoPi * jets[li].l * c))));
    if (rep.residual > opts.residual_tolerance)
      throw InconsistentDataError("order m=0: d^0 is not the free term times a phase (residual " +
                                      std::to_string(rep.residual) + ")",
                                  rep.residual);
    known.add(nf_key(n, {}, 0, 1), c);
    result.hbar_shift = c;
    result.reports.push_back(rep);
  }
  for (int m = 1; m < M; ++m) {
    const std::vector<NFKey> unk = unknowns_of_total(n, m + 1, opts.k_max);
    const int nu = static_cast<int>(unk.size());
    const int rows = 2 * static_cast<int>(jets.size());
    InversionOrderReport rep;
    rep.m = m;
    rep.unknowns = nu;
    rep.rows = rows;
    if (rows < nu)
      throw IllConditionedError("order m=" + std::to_string(m) + ": " + std::to_string(rows) +
                                    " real equations for " + std::to_string(nu) + " unknowns",
                                std::numeric_limits<double>::infinity());
    const TraceExpansion pred = forward_trace_expansion(NormalForm(known, Route::Trace), jets, m + 1);
    const double shift = result.hbar_shift;
    Eigen::MatrixXd A(rows, nu);
    Eigen::VectorXd b(rows);
    for (std::size_t li = 0; li < jets.size(); ++li) {
      const auto& jet = jets[li];
      auto it = tr.entries.find({jet.l, m});
      if (it == tr.entries.end())
        throw InvalidInput("missing d_l^m for l=" + std::to_string(jet.l) + ", m=" + std::to_string(m));
      const Complex rhs = it->second - pred.entries.at({jet.l, m});
      b(2 * static_cast<Eigen::Index>(li)) = rhs.real();
      b(2 * static_cast<Eigen::Index>(li) + 1) = rhs.imag();
      for (int u = 0; u < nu; ++u) {
        const Complex k = linear_kernel(unk[static_cast<std::size_t>(u)].r, unk[static_cast<std::size_t>(u)].s, jet,
                                        rot.theta, shift);
        A(2 * static_cast<Eigen::Index>(li), u) = k.real();
        A(2 * static_cast<Eigen::Index>(li) + 1, u) = k.imag();
      }
    }
    Eigen::VectorXd colnorm = A.colwise().norm().transpose();
    for (int u = 0; u < nu; ++u) {
      if (colnorm(u) == 0.0)
        throw IllConditionedError("order m=" + std::to_string(m) + ": unknown has a vanishing kernel column",
                                  std::numeric_limits<double>::infinity());
      A.col(u) /= colnorm(u);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    rep.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (rep.condition > opts.condition_threshold)
      throw IllConditionedError("order m=" + std::to_string(m) + ": condition number " + std::to_string(rep.condition) +
                                    " exceeds " + std::to_string(opts.condition_threshold),
                                rep.condition);
    Eigen::VectorXd x = svd.solve(b);
    const double bn = b.norm();
    const double rn = (A * x - b).norm();
    rep.residual = bn > 0 ? rn / bn : rn;
    if (rep.residual > opts.residual_tolerance)
      throw InconsistentDataError("order m=" + std::to_string(m) + ": least-squares residual " +
                                      std::to_string(rep.residual) + " exceeds tolerance",
                                  rep.residual);
    for (int u = 0; u < nu; ++u) known.add(unk[static_cast<std::size_t>(u)], x(u) / colnorm(u));
    result.reports.push_back(rep);
  }
  result.nf = NormalForm(known, Route::Trace);
  return result;
}

}  // namespace bnf
