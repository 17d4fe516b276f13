#include "bnf/runner.hpp"

#include "bnf/classical_bnf.hpp"
#include "bnf/config.hpp"
#include "bnf/quantum_bnf.hpp"
#include "bnf/serialization.hpp"
#include "bnf/spectral_oracle.hpp"
#include "bnf/symbol_bridge.hpp"
#include "bnf/trace_invariants.hpp"
#include "bnf/verification.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>
#include <openssl/opensslv.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef BNF_VERSION
#define BNF_VERSION "0.0.0"
#endif

namespace bnf {

using nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"bnf-classical", "bnf-semiclassical", "bnf-quantum",     "weyl-of-h",
                                                 "trace-forward", "trace-invert",      "oracle-spectrum", "verify"};
  return names;
}

namespace {

class Artifacts {
 public:
  explicit Artifacts(std::string dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(std::filesystem::path(dir_) / name, std::ios::binary);
    if (!f) throw Error("cannot write '" + name + "' in " + dir_);
    f << content;
    if (!f) throw Error("write failed for '" + name + "'");
    files_.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
  }

  template <class T>
  void csv(const std::string& name, const T& value) {
    std::ostringstream os;
    write_csv(os, value);
    write(name, os.str());
  }

  void json(const std::string& name, const ordered_json& j) { write(name, j.dump(2) + "\n"); }

  const ordered_json& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  ordered_json files_ = ordered_json::array();
};

class Timings {
 public:
  template <class F>
  auto time(const std::string& stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = f();
    entries_[stage] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  const ordered_json& json() const { return entries_; }

 private:
  ordered_json entries_ = ordered_json::object();
};

ordered_json versions() {
  return {{"bnf", BNF_VERSION},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"openssl", OPENSSL_VERSION_TEXT}};
}

ordered_json generators_json(const GeneratorLog& log) {
  ordered_json arr = ordered_json::array();
  for (const auto& g : log) arr.push_back({{"weight", g.kappa}, {"terms", to_json(g.F)}});
  return arr;
}

ordered_json generators_json(const std::vector<WordPoly>& gens) {
  ordered_json arr = ordered_json::array();
  for (const auto& g : gens) arr.push_back({{"grade", wlg_grade(g)}, {"terms", to_json(g)}});
  return arr;
}

BnfOptions bnf_options(const ProblemConfig& cfg) {
  BnfOptions o;
  o.solve.threshold = cfg.resonance_threshold;
  o.tau_policy = cfg.tau_policy;
  return o;
}

QuantumBnfOptions quantum_options(const ProblemConfig& cfg) {
  QuantumBnfOptions o;
  o.solve.threshold = cfg.resonance_threshold;
  return o;
}

std::vector<TestFunctionJet> jets_for(const ProblemConfig& cfg) {
  if (cfg.periods.empty()) throw ConfigError("'periods' must list at least one period l");
  std::vector<TestFunctionJet> jets;
  for (int l : cfg.periods) jets.push_back(cfg.bump.jet(l, 2 * cfg.M + 2));
  return jets;
}

void write_classical(Artifacts& art, const BnfResult& r) {
  art.csv("normal_form.csv", r.nf);
  art.json("normal_form.json", to_json(r.nf));
  art.json("generators.json", generators_json(r.generators));
  art.csv("remainder.csv", r.remainder);
}

int run_subcommand(const std::string& sub, const RunOptions& opts, std::ostream& out, ordered_json& manifest) {
  Timings timings;
  std::optional<ProblemConfig> cfg;
  std::string config_text;
  if (!opts.config_path.empty()) {
    config_text = read_file(opts.config_path);
    cfg = timings.time("load_config", [&] { return parse_config(config_text); });
  } else if (sub != "verify") {
    throw ConfigError("subcommand '" + sub + "' needs --config");
  }
  ToleranceOverrides overrides;
  std::string overrides_text;
  if (!opts.tolerance_overrides.empty()) {
    overrides_text = read_file(opts.tolerance_overrides);
    overrides = load_tolerance_overrides(opts.tolerance_overrides);
  }

  Artifacts art(opts.out_dir);
  int status = kExitOk;

  if (sub == "bnf-classical") {
    const BnfResult r =
        timings.time("birkhoff", [&] { return birkhoff_classical(cfg->hamiltonian_series(), cfg->rot, cfg->weight, bnf_options(*cfg)); });
    write_classical(art, r);
    out << "classical normal form: " << r.nf.poly.size() << " terms, " << r.generators.size() << " generators\n";
  } else if (sub == "bnf-semiclassical") {
    const BnfResult r = timings.time("birkhoff", [&] {
      return birkhoff_semiclassical(cfg->hamiltonian_series(), cfg->rot, cfg->weight, cfg->hbar_order, bnf_options(*cfg));
    });
    write_classical(art, r);
    out << "semiclassical normal form: " << r.nf.poly.size() << " terms, " << r.generators.size() << " generators\n";
  } else if (sub == "bnf-quantum" || sub == "weyl-of-h") {
    const QuantumBnfResult r =
        timings.time("birkhoff", [&] { return birkhoff_quantum(cfg->hamiltonian_words(), cfg->rot, cfg->L, quantum_options(*cfg)); });
    if (sub == "bnf-quantum") {
      art.csv("normal_form.csv", r.h);
      art.json("normal_form.json", to_json(r.h));
      art.json("generators.json", generators_json(r.generators));
      art.csv("remainder.csv", r.remainder);
      out << "quantum normal form: " << r.h.poly.size() << " terms, " << r.generators.size() << " generators\n";
    } else {
      const NormalForm w = timings.time("weyl", [&] { return weyl_of_functional_calculus(r.h, cfg->hbar_order); });
      art.csv("weyl_of_h.csv", w);
      art.json("weyl_of_h.json", to_json(w));
      out << "Weyl symbol of h: " << w.poly.size() << " terms\n";
    }
  } else if (sub == "trace-forward") {
    NormalForm nf;
    if (cfg->trace_normal_form) {
      nf = *cfg->trace_normal_form;
    } else {
      nf = timings.time("birkhoff", [&] { return birkhoff_quantum(cfg->hamiltonian_words(), cfg->rot, cfg->L, quantum_options(*cfg)).h; });
    }
    const TraceExpansion tr = timings.time("forward", [&] { return forward_trace_expansion(nf, jets_for(*cfg), cfg->M); });
    art.json("trace.json", to_json(tr));
    art.csv("trace.csv", tr);
    art.csv("normal_form.csv", nf);
    out << "trace expansion: " << tr.entries.size() << " coefficients d_l^m\n";
  } else if (sub == "trace-invert") {
    if (cfg->trace_input.empty()) throw ConfigError("trace-invert needs 'trace/input'", config_line(config_text, "/trace"));
    std::filesystem::path in(cfg->trace_input);
    if (in.is_relative()) in = std::filesystem::path(opts.config_path).parent_path() / in;
    const TraceExpansion tr = trace_from_json(nlohmann::json::parse(read_file(in.string())));
    InversionOptions io;
    io.k_max = cfg->k_max;
    const InversionResult inv = timings.time("invert", [&] { return invert_trace_expansion(tr, cfg->rot, cfg->M, io); });
    art.csv("normal_form.csv", inv.nf);
    art.json("normal_form.json", to_json(inv.nf));
    std::ostringstream os;
    os << "m,unknowns,rows,condition,residual\n";
    for (const auto& r : inv.reports)
      os << r.m << ',' << r.unknowns << ',' << r.rows << ',' << format_double(r.condition) << ','
         << format_double(r.residual) << '\n';
    art.write("inversion.csv", os.str());
    out << "recovered " << inv.nf.poly.size() << " coefficients\n";
  } else if (sub == "oracle-spectrum") {
    if (cfg->hbar_grid.empty()) throw ConfigError("oracle-spectrum needs 'hbar_grid'", config_line(config_text, ""));
    const WordPoly H = cfg->hamiltonian_words();
    const NormalForm h = timings.time("birkhoff", [&] { return birkhoff_quantum(H, cfg->rot, cfg->L, quantum_options(*cfg)).h; });
    auto one = [&](std::size_t i) {
      BasisWindow w;
      w.dim = cfg->n;
      w.hermite_cut = cfg->oracle.hermite_cut;
      w.fourier_cut = cfg->oracle.fourier_cut;
      w.budget = cfg->oracle.budget;
      w.hbar = cfg->hbar_grid[i];
      const double lo = cfg->oracle.window ? cfg->oracle.window->first : -std::numeric_limits<double>::max();
      const double hi = cfg->oracle.window ? cfg->oracle.window->second : std::numeric_limits<double>::max();
      SpectrumOptions so;
      so.strict = cfg->oracle.window.has_value();
      auto ev = quasi_eigenpairs(H, w, lo, hi, so);
      std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
      if (!cfg->oracle.window && static_cast<int>(ev.size()) > cfg->oracle.count)
        ev.resize(static_cast<std::size_t>(cfg->oracle.count));
      std::ostringstream os;
      for (const auto& q : ev) {
        std::string mu;
        for (std::size_t k = 0; k < q.label.mu.size(); ++k) mu += (k ? ";" : "") + std::to_string(q.label.mu[k]);
        os << format_double(w.hbar) << ',' << mu << ',' << q.label.nu << ',' << format_double(q.value) << ','
           << format_double(h.eigenvalue(q.label.mu, q.label.nu, w.hbar)) << ',' << format_double(q.drift) << '\n';
      }
      return os.str();
    };
    std::vector<std::string> rows(cfg->hbar_grid.size());
    timings.time("spectra", [&] {
      const int threads = std::max(1, opts.threads);
      for (std::size_t start = 0; start < rows.size(); start += static_cast<std::size_t>(threads)) {
        std::vector<std::future<std::string>> jobs;
        for (std::size_t i = start; i < std::min(rows.size(), start + static_cast<std::size_t>(threads)); ++i)
          jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, one, i));
        for (std::size_t q = 0; q < jobs.size(); ++q) rows[start + q] = jobs[q].get();
      }
      return 0;
    });
    std::string csv = "hbar,mu,nu,value,predicted,drift\n";
    for (const auto& r : rows) csv += r;
    art.write("spectrum.csv", csv);
    out << "spectra written for " << rows.size() << " values of hbar\n";
  } else if (sub == "verify") {
    VerifyOptions vo;
    if (cfg) vo.seed = cfg->seed;
    vo.tolerances = overrides;
    vo.threads = std::max(1, opts.threads);
    Report rep = timings.time("acceptance", [&] { return run_all(vo); });
    ordered_json check_times = ordered_json::object();
    for (const auto& c : rep.checks) check_times[c.id] = c.seconds * 1000.0;
    manifest["check_timings_ms"] = check_times;
    out << rep.to_text();
    rep.timings = false;
    art.write("report.txt", rep.to_text());
    art.json("report.json", rep.to_json());
    art.write("convergence.csv", rep.convergence_csv());
    status = rep.all_pass() ? kExitOk : kExitFailure;
  } else {
    throw InvalidInput("unknown subcommand '" + sub + "'");
  }

  manifest["config_path"] = opts.config_path;
  manifest["config_sha256"] = config_text.empty() ? "" : sha256_hex(config_text);
  manifest["tolerance_overrides_sha256"] = overrides_text.empty() ? "" : sha256_hex(overrides_text);
  manifest["outputs"] = art.files();
  manifest["timings_ms"] = timings.json();
  manifest["exit_code"] = status;
  art.json("manifest.json", manifest);
  return status;
}

}  // namespace

int run(const std::string& subcommand, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  ordered_json manifest = {{"tool", "bnf"},
                           {"subcommand", subcommand},
                           {"command_line", opts.command_line},
                           {"threads", opts.threads},
                           {"versions", versions()},
                           {"conventions", {{"action", "p=(x^2+xi^2)/2"}, {"t_period", "2pi"}, {"hbar_weight", 2}}}};
  try {
    return run_subcommand(subcommand, opts, out, manifest);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const std::string hint = e.hint();
    if (!hint.empty()) err << "hint: " << hint << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace bnf
