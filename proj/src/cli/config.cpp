#include "berwald/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "berwald/expression.hpp"

namespace berwald::cli {

namespace {

const std::vector<std::string> kStateVariables = {"t",    "r",    "theta",    "phi",
                                                  "tdot", "rdot", "thetadot", "phidot"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(int line, const std::string& message, std::size_t column = 0) const {
    std::string where = source_ + ":" + std::to_string(line);
    if (column > 0) where += ":" + std::to_string(column);
    throw ConfigError(where + ": " + message);
  }

  double number(int line, const std::string& text) const {
    double x = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) fail(line, "expected a number, got '" + text + "'");
    return x;
  }

  std::vector<double> numbers(int line, const std::string& text, std::size_t n) const {
    std::string spaced = text;
    for (char& c : spaced) {
      if (c == ',') c = ' ';
    }
    std::istringstream is(spaced);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(number(line, tok));
    if (out.size() != n) {
      fail(line, "expected " + std::to_string(n) + " numbers, got " + std::to_string(out.size()));
    }
    return out;
  }

  // Parses an expression and checks its identifiers against the allowed
  // variables and the bound parameters.
  void expression(int line, std::size_t column, const std::string& text,
                  const std::vector<std::string>& variables, const ParamMap& params) const {
    try {
      const Expression e = parse(text);
      for (const auto& id : e.identifiers()) {
        bool known = params.count(id) > 0;
        for (const auto& v : variables) known = known || v == id;
        if (!known) fail(line, "unbound identifier '" + id + "' in '" + text + "'", column);
      }
    } catch (const SyntaxError& e) {
      fail(line, e.what(), column + e.position());
    }
  }

 private:
  std::string source_;
};

struct Entry {
  std::string section, key, value;
  int line = 0;
  std::size_t value_column = 0;  // 1-based
};

}  // namespace

void Tolerances::set(const std::string& name, double value) {
  if (!(value > 0.0)) throw UsageError("tolerance " + name + " must be positive");
  std::map<std::string, double*> slots = {{"classifier.zero", &classifier.zero},
                                          {"classifier.nonzero", &classifier.nonzero},
                                          {"classifier.rank", &classifier.rank},
                                          {"classifier.ricci", &classifier.ricci},
                                          {"horizontal", &verifier.horizontal},
                                          {"det_min", &verifier.det_min},
                                          {"levi_civita", &verifier.levi_civita},
                                          {"berwald", &verifier.berwald},
                                          {"geodesic", &verifier.geodesic},
                                          {"drift", &verifier.drift},
                                          {"quadratic_fit", &verifier.quadratic_fit},
                                          {"closedness", &closedness},
                                          {"lambda", &lambda}};
  const auto it = slots.find(name);
  if (it == slots.end()) throw UsageError("unknown tolerance '" + name + "'");
  *it->second = value;
}

std::map<std::string, double> Tolerances::values() const {
  return {{"classifier.zero", classifier.zero},
          {"classifier.nonzero", classifier.nonzero},
          {"classifier.rank", classifier.rank},
          {"classifier.ricci", classifier.ricci},
          {"horizontal", verifier.horizontal},
          {"det_min", verifier.det_min},
          {"levi_civita", verifier.levi_civita},
          {"berwald", verifier.berwald},
          {"geodesic", verifier.geodesic},
          {"drift", verifier.drift},
          {"quadratic_fit", verifier.quadratic_fit},
          {"closedness", closedness},
          {"lambda", lambda}};
}

ConnectionProfile JobConfig::connection_profile() const {
  return ConnectionProfile(connection, params);
}

SampleOptions JobConfig::sample_options(std::function<bool(const TangentPoint&)> extra) const {
  SampleOptions s;
  s.box = grid.box;
  s.count = sample_count;
  s.seed = seed;
  std::shared_ptr<const Program> pred;
  if (!domain.empty()) pred = std::make_shared<Program>(parse(domain), kStateVariables, params);
  if (!pred && !extra) return s;
  s.accept = [pred, extra](const TangentPoint& p) {
    if (pred) {
      const double v[8] = {p.t, p.r, p.theta, p.phi, p.tdot, p.rdot, p.thetadot, p.phidot};
      try {
        if (!(pred->evaluate(v) > 0.0)) return false;
      } catch (const DomainError&) {
        return false;
      }
    }
    return !extra || extra(p);
  };
  return s;
}

MetrizeOptions JobConfig::metrize_options(const Tolerances& tol) const {
  MetrizeOptions o;
  o.signature = task.signature;
  o.C1 = task.C1;
  o.C2 = task.C2;
  if (task.theta == "identity") {
    o.theta = Theta::identity();
  } else if (task.theta == "square") {
    o.theta = Theta::square();
  } else {
    o.theta = Theta::expression(task.theta, params);
  }
  o.closedness_tol = tol.closedness;
  o.lambda_tol = tol.lambda;
  return o;
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto x = text.find('x');
  int n = 0, m = 0;
  if (x == std::string::npos) throw UsageError("expected NxM, got '" + text + "'");
  const char* b = text.data();
  const auto r1 = std::from_chars(b, b + x, n);
  const auto r2 = std::from_chars(b + x + 1, b + text.size(), m);
  if (r1.ec != std::errc() || r1.ptr != b + x || r2.ec != std::errc() ||
      r2.ptr != b + text.size() || n < 2 || m < 2) {
    throw UsageError("expected NxM with N, M >= 2, got '" + text + "'");
  }
  return {n, m};
}

TangentPoint parse_state(const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(spaced);
  std::vector<double> v;
  std::string tok;
  while (is >> tok) {
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw UsageError("bad number '" + tok + "' in state");
    }
    v.push_back(x);
  }
  if (v.size() != 8) throw UsageError("a state has 8 components, got " + std::to_string(v.size()));
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

JobConfig parse_config(std::istream& in, const std::string& source_name) {
  const Reader rd(source_name);
  std::vector<Entry> entries;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') rd.fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "connection" && section != "params" && section != "grid" &&
          section != "samples" && section != "task") {
        rd.fail(line, "unknown section [" + section + "]");
      }
      continue;
    }
    if (section.empty()) rd.fail(line, "key outside of any section");
    const auto eq = raw.find('=');
    if (eq == std::string::npos) rd.fail(line, "expected key = value");
    Entry e;
    e.section = section;
    e.key = trim(raw.substr(0, eq));
    e.line = line;
    const auto vstart = raw.find_first_not_of(" \t", eq + 1);
    e.value_column = vstart == std::string::npos ? raw.size() + 1 : vstart + 1;
    e.value = trim(raw.substr(eq + 1));
    if (e.key.empty()) rd.fail(line, "empty key");
    if (e.value.empty()) rd.fail(line, "empty value for '" + e.key + "'");
    entries.push_back(std::move(e));
  }

  JobConfig cfg;
  cfg.source_name = source_name;
  for (const auto& e : entries) {
    const std::string id = e.section + "." + e.key;
    if (cfg.lines.count(id)) rd.fail(e.line, "duplicate key '" + e.key + "'");
    cfg.lines[id] = e.line;
  }

  // Parameters first: every expression is checked against them.
  for (const auto& e : entries) {
    if (e.section == "params") cfg.params[e.key] = rd.number(e.line, e.value);
  }

  for (const auto& e : entries) {
    if (e.section == "connection") {
      bool ok = e.key.size() >= 2 && e.key[0] == 'k';
      int idx = 0;
      if (ok) {
        const auto res = std::from_chars(e.key.data() + 1, e.key.data() + e.key.size(), idx);
        ok = res.ec == std::errc() && res.ptr == e.key.data() + e.key.size() && idx >= 1 &&
             idx <= 12;
      }
      if (!ok) rd.fail(e.line, "unknown connection coefficient '" + e.key + "' (k1..k12)");
      rd.expression(e.line, e.value_column, e.value, {"t", "r"}, cfg.params);
      cfg.connection[e.key] = e.value;
    } else if (e.section == "grid") {
      if (e.key == "t" || e.key == "r") {
        const auto v = rd.numbers(e.line, e.value, 2);
        if (!(v[0] < v[1])) rd.fail(e.line, "empty range for " + e.key);
        if (e.key == "t") {
          cfg.grid.box.t0 = v[0];
          cfg.grid.box.t1 = v[1];
        } else {
          if (!(v[0] > 0.0)) rd.fail(e.line, "r range must be positive");
          cfg.grid.box.r0 = v[0];
          cfg.grid.box.r1 = v[1];
        }
      } else if (e.key == "resolution") {
        try {
          std::tie(cfg.grid.nt, cfg.grid.nr) = parse_resolution(e.value);
        } catch (const UsageError& err) {
          rd.fail(e.line, err.what());
        }
      } else {
        rd.fail(e.line, "unknown grid key '" + e.key + "' (t, r, resolution)");
      }
    } else if (e.section == "samples") {
      if (e.key == "count") {
        const double n = rd.number(e.line, e.value);
        if (!(n >= 1) || n != static_cast<double>(static_cast<std::size_t>(n))) {
          rd.fail(e.line, "count must be a positive integer");
        }
        cfg.sample_count = static_cast<std::size_t>(n);
      } else if (e.key == "seed") {
        std::uint64_t s = 0;
        const auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), s);
        if (res.ec != std::errc() || res.ptr != e.value.data() + e.value.size()) {
          rd.fail(e.line, "seed must be a non-negative integer");
        }
        cfg.seed = s;
      } else if (e.key == "domain") {
        rd.expression(e.line, e.value_column, e.value, kStateVariables, cfg.params);
        cfg.domain = e.value;
      } else {
        rd.fail(e.line, "unknown samples key '" + e.key + "' (count, seed, domain)");
      }
    } else if (e.section == "task") {
      TaskOptions& t = cfg.task;
      if (e.key == "class") {
        if (e.value == "auto") {
          t.class_override = 0;
        } else {
          const double c = rd.number(e.line, e.value);
          if (c != 1 && c != 2 && c != 3 && c != 4 && c != 5) rd.fail(e.line, "class is auto or 1..5");
          t.class_override = static_cast<int>(c);
        }
      } else if (e.key == "signature") {
        if (e.value == "lorentzian") {
          t.signature = Signature::kLorentzian;
        } else if (e.value == "euclidean") {
          t.signature = Signature::kEuclidean;
        } else {
          rd.fail(e.line, "signature is lorentzian or euclidean");
        }
      } else if (e.key == "C1") {
        t.C1 = rd.number(e.line, e.value);
      } else if (e.key == "C2") {
        t.C2 = rd.number(e.line, e.value);
      } else if (e.key == "theta") {
        if (e.value != "identity" && e.value != "square") {
          rd.expression(e.line, e.value_column, e.value, {"s"}, cfg.params);
        }
        t.theta = e.value;
      } else if (e.key == "L") {
        rd.expression(e.line, e.value_column, e.value, kStateVariables, cfg.params);
        t.L = e.value;
      } else if (e.key == "initial") {
        try {
          t.initial = parse_state(e.value);
        } catch (const UsageError& err) {
          rd.fail(e.line, err.what());
        }
      } else if (e.key == "T") {
        t.T = rd.number(e.line, e.value);
        if (!(t.T > 0.0)) rd.fail(e.line, "T must be positive");
      } else if (e.key == "n_out") {
        const double n = rd.number(e.line, e.value);
        if (!(n >= 2) || n != static_cast<double>(static_cast<int>(n))) {
          rd.fail(e.line, "n_out must be an integer >= 2");
        }
        t.n_out = static_cast<int>(n);
      } else {
        rd.fail(e.line,
                "unknown task key '" + e.key +
                    "' (class, signature, C1, C2, theta, L, initial, T, n_out)");
      }
    }
  }
  return cfg;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace berwald::cli
