#include "bnf/config.hpp"

#include "bnf/serialization.hpp"
#include "bnf/symbol_bridge.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace bnf {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Maps '/'-separated value paths to the line where each value starts.
std::map<std::string, int> locate_paths(const std::string& text) {
  struct Frame {
    bool object;
    int index = 0;
    std::string key;
    bool expect_key = true;
  };
  std::map<std::string, int> out;
  std::vector<Frame> stack;
  int line = 1;
  auto path = [&] {
    std::string p;
    for (const auto& f : stack) p += "/" + (f.object ? f.key : std::to_string(f.index));
    return p;
  };
  auto value_start = [&] { out.emplace(path(), line); };
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    switch (c) {
      case '{':
        value_start();
        stack.push_back({true, 0, {}, true});
        ++i;
        continue;
      case '[':
        value_start();
        stack.push_back({false, 0, {}, true});
        ++i;
        continue;
      case '}':
      case ']':
        if (!stack.empty()) stack.pop_back();
        ++i;
        continue;
      case ',':
        if (!stack.empty()) {
          if (stack.back().object)
            stack.back().expect_key = true;
          else
            ++stack.back().index;
        }
        ++i;
        continue;
      case ':':
        if (!stack.empty()) stack.back().expect_key = false;
        ++i;
        continue;
      case '"': {
        std::string s;
        const int start_line = line;
        ++i;
        while (i < text.size() && text[i] != '"') {
          if (text[i] == '\\' && i + 1 < text.size()) ++i;
          if (text[i] == '\n') ++line;
          s += text[i++];
        }
        ++i;
        if (!stack.empty() && stack.back().object && stack.back().expect_key) {
          stack.back().key = s;
        } else {
          out.emplace(path(), start_line);
        }
        continue;
      }
      default:
        value_start();
        while (i < text.size() && std::string(",]}\n \t\r").find(text[i]) == std::string::npos) ++i;
        continue;
    }
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : lines_(locate_paths(text)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    auto it = lines_.find(path);
    throw ConfigError(msg + " (at " + (path.empty() ? "/" : path) + ")", it == lines_.end() ? 0 : it->second);
  }

  void only_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) fail(path + "/" + k, "unknown key '" + k + "'");
  }

  int integer(const json& v, const std::string& path, int lo) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > (1LL << 30)) fail(path, "integer out of range (minimum " + std::to_string(lo) + ")");
    return static_cast<int>(x);
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  double positive(const json& v, const std::string& path) const {
    const double x = number(v, path);
    if (!(x > 0)) fail(path, "expected a positive number");
    return x;
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  // Runs a parser on a sub-document and re-addresses its InvalidInput errors.
  template <class F>
  auto wrapped(const std::string& path, F&& f) const {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const InvalidInput& e) {
      fail(path, e.what());
    } catch (const json::exception& e) {
      fail(path, e.what());
    }
  }

 private:
  std::map<std::string, int> lines_;
};

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

int config_line(const std::string& text, const std::string& path) {
  const auto lines = locate_paths(text);
  auto it = lines.find(path);
  return it == lines.end() ? 0 : it->second;
}

ProblemConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line_of_byte(text, e.byte));
  }
  const Reader rd(text);
  rd.only_keys(doc, "", {"conventions", "n", "theta", "E", "hamiltonian", "orders", "resonance_threshold",
                         "tau_policy", "hbar_grid", "bump", "periods", "oracle", "trace", "seed", "comment"});

  if (!doc.contains("conventions")) rd.fail("", "missing 'conventions' block");
  const json& conv = doc["conventions"];
  rd.only_keys(conv, "/conventions", {"action", "t_period", "hbar_weight"});
  if (!conv.contains("action") || rd.string(conv["action"], "/conventions/action") != "p=(x^2+xi^2)/2")
    rd.fail("/conventions/action", "action convention must be \"p=(x^2+xi^2)/2\"");
  if (!conv.contains("t_period") || rd.string(conv["t_period"], "/conventions/t_period") != "2pi")
    rd.fail("/conventions/t_period", "t_period must be \"2pi\"");
  if (!conv.contains("hbar_weight") || rd.integer(conv["hbar_weight"], "/conventions/hbar_weight", 0) != 2)
    rd.fail("/conventions/hbar_weight", "hbar_weight must be 2");

  ProblemConfig cfg;
  cfg.source = text;
  if (!doc.contains("n")) rd.fail("", "missing 'n'");
  cfg.n = rd.integer(doc["n"], "/n", 1);
  if (!doc.contains("theta") || !doc["theta"].is_array()) rd.fail("/theta", "'theta' must be an array");
  for (std::size_t i = 0; i < doc["theta"].size(); ++i)
    cfg.theta.push_back(rd.number(doc["theta"][i], "/theta/" + std::to_string(i)));
  if (static_cast<int>(cfg.theta.size()) != cfg.n)
    rd.fail("/theta", "theta has " + std::to_string(cfg.theta.size()) + " entries but n = " + std::to_string(cfg.n));
  if (doc.contains("E")) cfg.E = rd.number(doc["E"], "/E");

  if (doc.contains("orders")) {
    const json& o = doc["orders"];
    rd.only_keys(o, "/orders", {"weight", "hbar", "L", "M", "k_max"});
    if (o.contains("weight")) cfg.weight = rd.integer(o["weight"], "/orders/weight", 2);
    if (o.contains("hbar")) cfg.hbar_order = rd.integer(o["hbar"], "/orders/hbar", 0);
    if (o.contains("L")) cfg.L = rd.integer(o["L"], "/orders/L", 2);
    if (o.contains("M")) cfg.M = rd.integer(o["M"], "/orders/M", 1);
    if (o.contains("k_max")) cfg.k_max = rd.integer(o["k_max"], "/orders/k_max", 0);
  }
  if (doc.contains("resonance_threshold"))
    cfg.resonance_threshold = rd.positive(doc["resonance_threshold"], "/resonance_threshold");
  if (doc.contains("tau_policy")) {
    const std::string p = rd.string(doc["tau_policy"], "/tau_policy");
    if (p == "sweep")
      cfg.tau_policy = TauPolicy::Sweep;
    else if (p == "require_flattened")
      cfg.tau_policy = TauPolicy::RequireFlattened;
    else
      rd.fail("/tau_policy", "tau_policy must be \"sweep\" or \"require_flattened\"");
  }

  if (doc.contains("hamiltonian")) {
    const json& h = doc["hamiltonian"];
    rd.only_keys(h, "/hamiltonian", {"symbol", "words"});
    if (h.contains("symbol"))
      cfg.series_terms = rd.wrapped("/hamiltonian/symbol", [&] { return series_from_json(h["symbol"], cfg.n); });
    if (h.contains("words"))
      cfg.word_terms = rd.wrapped("/hamiltonian/words", [&] { return words_from_json(h["words"], cfg.n); });
  }

  if (doc.contains("hbar_grid")) {
    if (!doc["hbar_grid"].is_array()) rd.fail("/hbar_grid", "'hbar_grid' must be an array");
    for (std::size_t i = 0; i < doc["hbar_grid"].size(); ++i)
      cfg.hbar_grid.push_back(rd.positive(doc["hbar_grid"][i], "/hbar_grid/" + std::to_string(i)));
  }
  if (doc.contains("bump")) {
    const json& b = doc["bump"];
    rd.only_keys(b, "/bump", {"sigma", "offset", "flat", "support", "nodes"});
    if (b.contains("sigma")) cfg.bump.sigma = rd.positive(b["sigma"], "/bump/sigma");
    if (b.contains("offset")) cfg.bump.offset = rd.number(b["offset"], "/bump/offset");
    if (b.contains("flat")) cfg.bump.flat = rd.positive(b["flat"], "/bump/flat");
    if (b.contains("support")) cfg.bump.support = rd.positive(b["support"], "/bump/support");
    if (b.contains("nodes")) cfg.bump.nodes = rd.integer(b["nodes"], "/bump/nodes", 16);
    rd.wrapped("/bump", [&] {
      cfg.bump.validate();
      return 0;
    });
  }
  if (doc.contains("periods")) {
    if (!doc["periods"].is_array()) rd.fail("/periods", "'periods' must be an array");
    std::set<int> seen;
    for (std::size_t i = 0; i < doc["periods"].size(); ++i) {
      const int l = rd.integer(doc["periods"][i], "/periods/" + std::to_string(i), 1);
      if (!seen.insert(l).second) rd.fail("/periods/" + std::to_string(i), "duplicate period");
      cfg.periods.push_back(l);
    }
  }
  if (doc.contains("oracle")) {
    const json& o = doc["oracle"];
    rd.only_keys(o, "/oracle", {"hermite_cut", "fourier_cut", "budget", "window", "count"});
    if (o.contains("hermite_cut")) cfg.oracle.hermite_cut = rd.integer(o["hermite_cut"], "/oracle/hermite_cut", 1);
    if (o.contains("fourier_cut")) cfg.oracle.fourier_cut = rd.integer(o["fourier_cut"], "/oracle/fourier_cut", 0);
    if (o.contains("budget"))
      cfg.oracle.budget = static_cast<std::size_t>(rd.integer(o["budget"], "/oracle/budget", 1));
    if (o.contains("count")) cfg.oracle.count = rd.integer(o["count"], "/oracle/count", 1);
    if (o.contains("window")) {
      const json& w = o["window"];
      if (!w.is_array() || w.size() != 2) rd.fail("/oracle/window", "window must be [lo, hi]");
      const double lo = rd.number(w[0], "/oracle/window/0"), hi = rd.number(w[1], "/oracle/window/1");
      if (!(lo < hi)) rd.fail("/oracle/window", "window needs lo < hi");
      cfg.oracle.window = std::make_pair(lo, hi);
    }
  }
  if (doc.contains("trace")) {
    const json& t = doc["trace"];
    rd.only_keys(t, "/trace", {"normal_form", "input"});
    if (t.contains("normal_form")) {
      cfg.trace_normal_form = rd.wrapped("/trace/normal_form", [&] { return normal_form_from_json(t["normal_form"]); });
      if (cfg.trace_normal_form->dim() != cfg.n) rd.fail("/trace/normal_form", "normal form dimension differs from n");
    }
    if (t.contains("input")) cfg.trace_input = rd.string(t["input"], "/trace/input");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) rd.fail("/seed", "seed must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  cfg.rot = nonresonance_margin(cfg.theta, std::max(cfg.weight, cfg.L), cfg.resonance_threshold);
  return cfg;
}

ProblemConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

FTSeries ProblemConfig::hamiltonian_series() const {
  FTSeries h = quadratic_hamiltonian(rot, E);
  if (series_terms)
    h += *series_terms;
  else if (word_terms)
    h += weyl_symbol(*word_terms);
  return h;
}

WordPoly ProblemConfig::hamiltonian_words() const {
  if (!word_terms && series_terms) throw ConfigError("the quantum route needs 'hamiltonian/words' records");
  WordPoly h = quadratic_word(theta, E);
  if (word_terms) h += *word_terms;
  return h;
}

ToleranceOverrides load_tolerance_overrides(const std::string& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed tolerance overrides: ") + e.what(), line_of_byte(text, e.byte));
  }
  if (!doc.is_object()) throw ConfigError("tolerance overrides must be an object", 1);
  ToleranceOverrides out;
  for (const auto& [k, v] : doc.items()) {
    if (!v.is_number() || !(v.get<double>() > 0))
      throw ConfigError("tolerance '" + k + "' must be a positive number", config_line(text, "/" + k));
    out[k] = v.get<double>();
  }
  return out;
}

}  // namespace bnf
