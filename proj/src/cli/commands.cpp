#include "berwald/cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "berwald/geodesic.hpp"

namespace berwald::cli {

using nlohmann::json;

namespace {

const char* class_description(int label) {
  switch (label) {
    case 1:
      return "power law";
    case 2:
      return "exponential law";
    case 3:
      return "[dt,dr] = 0, dw != 0";
    case 4:
      return "[dt,dr] = 0, dw = 0";
    case 5:
      return "[dt,dr] != 0, dw = 0";
    default:
      return "no class";
  }
}

const char* status_name(int code) {
  switch (code) {
    case kExitOk:
      return "ok";
    case kExitUndetermined:
      return "undetermined";
    default:
      return "fail";
  }
}

json residual_json(const Residual& r) {
  return {{"name", r.name},         {"value", r.value},     {"tolerance", r.tolerance},
          {"pass", r.pass()},       {"where", r.where},     {"samples", r.samples},
          {"skipped", r.skipped}};
}

json quantity_json(const GridQuantity& q) {
  return {{"name", q.name},
          {"max_abs", q.max_abs},
          {"max_scaled", q.max_scaled},
          {"where", q.where},
          {"zero_nodes", q.zero_nodes},
          {"nonzero_nodes", q.nonzero_nodes},
          {"undetermined_nodes", q.undetermined_nodes},
          {"status", to_string(q.status())}};
}

json point_json(const TangentPoint& p) {
  return {p.t, p.r, p.theta, p.phi, p.tdot, p.rdot, p.thetadot, p.phidot};
}

json skeleton(const std::string& command, const JobConfig& cfg, const Tolerances& tol) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = cfg.source_name;
  j["seed"] = cfg.seed;
  j["grid"] = {{"t", {cfg.grid.box.t0, cfg.grid.box.t1}},
               {"r", {cfg.grid.box.r0, cfg.grid.box.r1}},
               {"nt", cfg.grid.nt},
               {"nr", cfg.grid.nr}};
  j["samples"] = {{"count", cfg.sample_count}, {"seed", cfg.seed}, {"domain", cfg.domain}};
  j["tolerances"] = tol.values();
  return j;
}

void finish(CommandResult& res) {
  res.report["exit_status"] = res.exit_code;
  res.report["status"] = res.report.contains("error") && res.exit_code != kExitUndetermined
                             ? "error"
                             : status_name(res.exit_code);
}

void set_error(CommandResult& res, const std::string& kind, const std::string& message,
               int code = kExitFail) {
  res.report["error"] = {{"kind", kind}, {"message", message}};
  res.exit_code = code;
}

// what() without the leading "Kind: ".
std::string message_of(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = e.kind() + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

// Runs body and turns library errors into an error entry.
CommandResult guarded(json report, const std::function<void(CommandResult&)>& body) {
  CommandResult res;
  res.report = std::move(report);
  try {
    body(res);
  } catch (const Error& e) {
    set_error(res, e.kind(), message_of(e));
  }
  finish(res);
  return res;
}

json classification_json(const ClassificationReport& rep, const ConnectionProfile& conn,
                         const JobConfig& cfg, const Tolerances& tol) {
  json c;
  c["finsler"] = to_string(rep.finsler);
  c["class"] = rep.class_label;
  c["class_description"] = class_description(rep.class_label);
  c["riemann"] = to_string(rep.riemann);
  c["riemann_note"] = rep.riemann_note;
  c["ricci_asymmetry"] = rep.ricci_asymmetry;
  c["holonomy_rank"] = {{"rank", rep.holonomy.rank},
                        {"raw_rank", rep.holonomy.raw_rank},
                        {"tolerance", rep.holonomy.tolerance}};
  c["evidence"] = json::array();
  for (const auto& q : rep.evidence) c["evidence"].push_back(quantity_json(q));
  c["notes"] = rep.notes;
  if (rep.riemann == Verdict::kNo && rep.finsler == Verdict::kYes) {
    const Box& b = cfg.grid.box;
    std::vector<std::array<double, 3>> pts;
    for (double f : {0.3, 0.7}) {
      pts.push_back({b.t0 + f * (b.t1 - b.t0), b.r0 + f * (b.r1 - b.r0), 1.0});
    }
    QuadraticFit fit = quadratic_fit(conn, pts, 40, cfg.seed);
    fit.threshold = tol.verifier.quadratic_fit;
    c["quadratic_fit"] = {{"residual", fit.residual},
                          {"threshold", fit.threshold},
                          {"rules_out", fit.rules_out()},
                          {"null_dim", fit.null_dim},
                          {"nondegenerate_solution", fit.nondegenerate_solution},
                          {"where", fit.where},
                          {"rows", fit.rows}};
  }
  return c;
}

bool determinate(const ClassificationReport& rep) {
  return rep.finsler != Verdict::kUndetermined && rep.riemann != Verdict::kUndetermined;
}

// Classifies unless the class is forced; returns 0 after recording an
// error or an undetermined verdict.
int resolve_class(CommandResult& res, const JobConfig& cfg, const ConnectionProfile& conn,
                  const Tolerances& tol) {
  if (cfg.task.class_override != 0) {
    res.report["class_override"] = cfg.task.class_override;
    return cfg.task.class_override;
  }
  const ClassificationReport rep = classify(conn, cfg.grid, cfg.sample_options(), tol.classifier);
  res.report["classification"] = classification_json(rep, conn, cfg, tol);
  if (rep.finsler == Verdict::kUndetermined) {
    set_error(res, "Undetermined", "Finsler metrizability is undetermined on this grid",
              kExitUndetermined);
    return 0;
  }
  if (rep.finsler == Verdict::kNo) {
    set_error(res, "NotMetrizable", "the connection is not Finsler metrizable");
    return 0;
  }
  if (rep.class_label == 0) {
    set_error(res, "NotMetrizable", "no class applies");
    return 0;
  }
  return rep.class_label;
}

struct Checks {
  json list = json::array();
  std::vector<std::string> failed;

  void add(const Residual& r) {
    list.push_back(residual_json(r));
    if (!r.pass()) failed.push_back(r.name);
  }
  void add(const std::string& name, const HessianReport& h) {
    list.push_back({{"name", name},
                    {"min_abs_det", h.min_abs_det},
                    {"det_min", h.det_min},
                    {"signature", h.signature},
                    {"signature_constant", h.signature_constant},
                    {"where", h.where},
                    {"samples", h.samples},
                    {"skipped", h.skipped},
                    {"pass", h.pass()}});
    if (!h.pass()) failed.push_back(name);
  }
  void fail(const std::string& name, const Error& e) {
    list.push_back({{"name", name}, {"pass", false}, {"error", e.what()}});
    failed.push_back(name);
  }
};

std::vector<TangentPoint> samples_for(const JobConfig& cfg, const FinslerFunction& F) {
  return sample_tangent_points(cfg.sample_options([&F](const TangentPoint& p) {
    return F.in_domain(p);
  }));
}

// Horizontal constancy, Hessian and Berwald checks of L; prefix names them.
void check_finsler(Checks& checks, const std::string& prefix, const FinslerFunction& L,
                   const ConnectionProfile& conn, const JobConfig& cfg, const Tolerances& tol) {
  const auto pts = samples_for(cfg, L);
  Residual h = check_horizontal_constancy(L, conn, pts, tol.verifier.horizontal);
  h.name = prefix + ".horizontal";
  checks.add(h);
  try {
    checks.add(prefix + ".hessian", check_hessian(L, pts, tol.verifier.det_min));
  } catch (const Degenerate& e) {
    checks.fail(prefix + ".hessian", e);
  }
  Residual b = berwald_check(L, pts, tol.verifier.berwald);
  b.name = prefix + ".berwald";
  checks.add(b);
}

Checks verify_metrization(const Metrization& m, const ConnectionProfile& conn,
                          const JobConfig& cfg, const Tolerances& tol) {
  Checks checks;
  for (const auto& c : m.certificates) checks.add(c);
  if (m.finsler) check_finsler(checks, "L", *m.finsler, conn, cfg, tol);
  if (m.riemann) {
    check_finsler(checks, "A", *m.riemann, conn, cfg, tol);
    Residual lc =
        levi_civita_roundtrip(*m.riemann, conn, samples_for(cfg, *m.riemann), tol.verifier.levi_civita);
    lc.name = "A.levi_civita";
    checks.add(lc);
  }
  return checks;
}

json tables_json(const Metrization& m) {
  json tables = json::array();
  for (const auto& p : m.potentials) {
    const Grid& g = p.grid();
    json t = json::array(), r = json::array(), values = json::array();
    for (int i = 0; i < g.nt; ++i) t.push_back(g.t(i));
    for (int j = 0; j < g.nr; ++j) r.push_back(g.r(j));
    for (int i = 0; i < g.nt; ++i) {
      json row = json::array();
      for (int j = 0; j < g.nr; ++j) row.push_back(p.node(i, j));
      values.push_back(row);
    }
    tables.push_back({{"name", p.name()}, {"t", t}, {"r", r}, {"values", values}});
  }
  return tables;
}

void fail_checks(CommandResult& res, const Checks& checks) {
  std::string names;
  for (const auto& n : checks.failed) names += (names.empty() ? "" : ", ") + n;
  set_error(res, "CheckFailed", "failed: " + names);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt_json(const json& v) {
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "nan";
  if (v.is_array()) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_json(v[i]);
    return s + ")";
  }
  return v.dump();
}

void write_trajectory(const Trajectory& tr, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  tr.write(os);
}

json trajectory_summary(const Trajectory& tr) {
  return {{"points", tr.states.size()},
          {"s_end", tr.s.empty() ? 0.0 : tr.s.back()},
          {"end", point_json(tr.states.back())},
          {"steps", tr.stats.steps},
          {"chart_exit", tr.chart_exit}};
}

}  // namespace

Tolerances apply_globals(const GlobalOptions& g, JobConfig& cfg) {
  if (g.grid) std::tie(cfg.grid.nt, cfg.grid.nr) = *g.grid;
  if (g.seed) cfg.seed = *g.seed;
  Tolerances tol;
  for (const auto& item : g.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol-override expects name=value");
    const std::string value = item.substr(eq + 1);
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw UsageError("bad tolerance value '" + value + "'");
    tol.set(item.substr(0, eq), x);
  }
  return tol;
}

CommandResult cmd_classify(const JobConfig& cfg, const Tolerances& tol) {
  return guarded(skeleton("classify", cfg, tol), [&](CommandResult& res) {
    const ConnectionProfile conn = cfg.connection_profile();
    const ClassificationReport rep =
        classify(conn, cfg.grid, cfg.sample_options(), tol.classifier);
    res.report["classification"] = classification_json(rep, conn, cfg, tol);
    res.exit_code = determinate(rep) ? kExitOk : kExitUndetermined;
  });
}

CommandResult cmd_metrize(const JobConfig& cfg, const Tolerances& tol) {
  return guarded(skeleton("metrize", cfg, tol), [&](CommandResult& res) {
    const ConnectionProfile conn = cfg.connection_profile();
    const int label = resolve_class(res, cfg, conn, tol);
    if (label == 0) return;
    const Metrization m = metrize(conn, cfg.grid, label, cfg.metrize_options(tol));
    const Checks checks = verify_metrization(m, conn, cfg, tol);
    res.report["checks"] = checks.list;
    if (!checks.failed.empty()) return fail_checks(res, checks);
    json forms;
    forms["class"] = m.class_label;
    if (m.finsler) forms["finsler"] = m.finsler->formula();
    if (m.riemann) forms["riemann"] = m.riemann->formula();
    forms["constants"] = m.constants;
    res.report["forms"] = forms;
    res.report["tables"] = tables_json(m);
  });
}

CommandResult cmd_verify(const JobConfig& cfg, const Tolerances& tol) {
  return guarded(skeleton("verify", cfg, tol), [&](CommandResult& res) {
    const ConnectionProfile conn = cfg.connection_profile();
    Checks checks;
    std::shared_ptr<const FinslerFunction> L;
    Metrization m;
    if (!cfg.task.L.empty()) {
      L = std::make_shared<ExpressionFinsler>(cfg.task.L, cfg.params);
      res.report["L"] = cfg.task.L;
      check_finsler(checks, "L", *L, conn, cfg, tol);
    } else {
      const int label = resolve_class(res, cfg, conn, tol);
      if (label == 0) return;
      m = metrize(conn, cfg.grid, label, cfg.metrize_options(tol));
      checks = verify_metrization(m, conn, cfg, tol);
      L = m.finsler ? m.finsler : m.riemann;
    }
    if (cfg.task.initial) {
      try {
        const auto ga = geodesic_agreement(*L, conn, *cfg.task.initial, cfg.task.T,
                                           tol.verifier.geodesic, tol.verifier.drift,
                                           cfg.task.n_out);
        checks.add(ga.discrepancy);
        checks.add(ga.drift);
      } catch (const ChartExit& e) {
        checks.fail("geodesic_discrepancy", e);
      }
    }
    res.report["checks"] = checks.list;
    if (!checks.failed.empty()) fail_checks(res, checks);
  });
}

CommandResult cmd_geodesic(const JobConfig& cfg, const Tolerances& tol, const GeodesicArgs& args) {
  const auto p0 = args.initial ? args.initial : cfg.task.initial;
  if (!p0) throw UsageError("geodesic needs --initial or [task] initial");
  const double T = args.T.value_or(cfg.task.T);
  const int n_out = args.n_out.value_or(cfg.task.n_out);
  json report = skeleton("geodesic", cfg, tol);
  report["initial"] = point_json(*p0);
  report["T"] = T;
  report["n_out"] = n_out;
  return guarded(std::move(report), [&](CommandResult& res) {
    const ConnectionProfile conn = cfg.connection_profile();
    const Trajectory tr = integrate_spray(conn, *p0, T, n_out);
    if (!args.out.empty()) write_trajectory(tr, args.out);
    res.report["autoparallel"] = trajectory_summary(tr);
    tr.require_complete();
    if (!args.compare && args.finsler_out.empty()) return;

    std::shared_ptr<const FinslerFunction> L;
    if (!cfg.task.L.empty()) {
      L = std::make_shared<ExpressionFinsler>(cfg.task.L, cfg.params);
    } else {
      const int label = resolve_class(res, cfg, conn, tol);
      if (label == 0) return;
      const Metrization m = metrize(conn, cfg.grid, label, cfg.metrize_options(tol));
      L = m.finsler ? m.finsler : m.riemann;
    }
    res.report["L"] = L->formula();
    if (!L->in_domain(*p0)) throw DomainError("initial state is outside the domain of L");
    const auto ga = geodesic_agreement(*L, conn, *p0, T, tol.verifier.geodesic,
                                       tol.verifier.drift, n_out);
    if (!args.finsler_out.empty()) write_trajectory(ga.finsler, args.finsler_out);
    res.report["finsler"] = trajectory_summary(ga.finsler);
    Checks checks;
    checks.add(ga.discrepancy);
    checks.add(ga.drift);
    res.report["checks"] = checks.list;
    if (!checks.failed.empty()) fail_checks(res, checks);
  });
}

std::string render_human(const json& rep) {
  std::ostringstream os;
  auto get = [&rep](const char* key) { return rep.contains(key) ? fmt_json(rep[key]) : ""; };
  os << "berwald " << get("command") << "  config " << get("config") << "  seed " << get("seed")
     << "\n";
  if (rep.contains("grid")) {
    const json& g = rep["grid"];
    os << "grid " << g["nt"].get<int>() << "x" << g["nr"].get<int>() << " on t in "
       << fmt_json(g["t"]) << ", r in " << fmt_json(g["r"]) << "\n";
  }
  if (rep.contains("classification")) {
    const json& c = rep["classification"];
    os << "\nclassification\n";
    os << "  finsler metrizable  " << fmt_json(c["finsler"]) << "\n";
    os << "  class               " << c["class"].get<int>() << " ("
       << fmt_json(c["class_description"]) << ")\n";
    os << "  riemann metrizable  " << fmt_json(c["riemann"]);
    if (!c["riemann_note"].get<std::string>().empty()) os << "  [" << fmt_json(c["riemann_note"]) << "]";
    os << "\n";
    os << "  ricci asymmetry     " << fmt_json(c["ricci_asymmetry"]) << "\n";
    os << "  holonomy rank       " << c["holonomy_rank"]["rank"].get<int>() << "\n";
    if (c.contains("quadratic_fit")) {
      os << "  quadratic fit       residual " << fmt_json(c["quadratic_fit"]["residual"])
         << (c["quadratic_fit"]["rules_out"].get<bool>() ? "  (no quadratic metric)" : "") << "\n";
    }
    if (!c["evidence"].empty()) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-20s %12s %12s  %s\n", "evidence", "max |x|", "scaled",
                    "status");
      os << line;
      for (const auto& q : c["evidence"]) {
        std::snprintf(line, sizeof line, "  %-20s %12s %12s  %s\n",
                      q["name"].get<std::string>().c_str(), fmt_json(q["max_abs"]).c_str(),
                      fmt_json(q["max_scaled"]).c_str(), q["status"].get<std::string>().c_str());
        os << line;
      }
    }
    for (const auto& n : c["notes"]) os << "  note: " << n.get<std::string>() << "\n";
  }
  if (rep.contains("class_override")) os << "\nclass forced to " << get("class_override") << "\n";
  for (const char* key : {"autoparallel", "finsler"}) {
    if (!rep.contains(key) || !rep[key].is_object()) continue;
    const json& t = rep[key];
    os << "\n" << key << ": " << t["points"].get<std::size_t>() << " points to s = "
       << fmt_json(t["s_end"]) << ", end state " << fmt_json(t["end"])
       << (t["chart_exit"].get<bool>() ? "  (chart exit)" : "") << "\n";
  }
  if (rep.contains("checks")) {
    os << "\nchecks\n";
    char line[200];
    for (const auto& c : rep["checks"]) {
      const std::string verdict = c["pass"].get<bool>() ? "PASS" : "FAIL";
      if (c.contains("value")) {
        std::snprintf(line, sizeof line, "  %-28s %12s  <= %-10s %s\n",
                      c["name"].get<std::string>().c_str(), fmt_json(c["value"]).c_str(),
                      fmt_json(c["tolerance"]).c_str(), verdict.c_str());
      } else if (c.contains("min_abs_det")) {
        std::snprintf(line, sizeof line, "  %-28s %12s  >  %-10s %s  signature %s\n",
                      c["name"].get<std::string>().c_str(), fmt_json(c["min_abs_det"]).c_str(),
                      fmt_json(c["det_min"]).c_str(), verdict.c_str(),
                      c["signature"].get<std::string>().c_str());
      } else {
        std::snprintf(line, sizeof line, "  %-28s %s  %s\n", c["name"].get<std::string>().c_str(),
                      verdict.c_str(), fmt_json(c.value("error", json(""))).c_str());
      }
      os << line;
    }
  }
  if (rep.contains("forms")) {
    const json& f = rep["forms"];
    os << "\nforms (class " << f["class"].get<int>() << ")\n";
    if (f.contains("finsler")) os << "  L = " << f["finsler"].get<std::string>() << "\n";
    if (f.contains("riemann")) os << "  A = " << f["riemann"].get<std::string>() << "\n";
    for (const auto& [k, v] : f["constants"].items()) os << "  " << k << " = " << fmt_json(v) << "\n";
  }
  if (rep.contains("tables")) {
    os << "\ntables:";
    for (const auto& t : rep["tables"]) os << " " << t["name"].get<std::string>();
    os << " (grid values in the JSON report)\n";
  }
  if (rep.contains("error")) {
    os << "\nerror: " << rep["error"]["kind"].get<std::string>() << ": "
       << rep["error"]["message"].get<std::string>() << "\n";
  }
  os << "\nstatus " << get("status") << " (exit " << get("exit_status") << ")\n";
  return os.str();
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finsler and Riemann metrizability of spherically symmetric connections"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  std::string grid_text;
  std::uint64_t seed = 0;
  app.add_option("--grid", grid_text, "grid resolution NxM");
  auto* seed_opt = app.add_option("--seed", seed, "sampling seed");
  app.add_option("--tol-override", g.tol_overrides, "name=value, repeatable");
  app.add_option("--json", g.json_path, "write the JSON report to PATH");
  app.add_flag("--quiet", g.quiet, "no human-readable output");

  std::string config_path;
  auto* classify_cmd = app.add_subcommand("classify", "classify a connection");
  auto* metrize_cmd = app.add_subcommand("metrize", "build and certify L and/or A");
  auto* verify_cmd = app.add_subcommand("verify", "check [task] L, or the built forms");
  auto* geodesic_cmd = app.add_subcommand("geodesic", "integrate autoparallels");
  auto* report_cmd = app.add_subcommand("report", "print a saved JSON report");
  for (auto* sub : {classify_cmd, metrize_cmd, verify_cmd, geodesic_cmd}) {
    sub->add_option("config", config_path, "job config")->required()->check(CLI::ExistingFile);
  }
  std::string report_path;
  report_cmd->add_option("report", report_path, "JSON report")->required()->check(CLI::ExistingFile);

  GeodesicArgs geo;
  std::string initial_text;
  double T = 0.0;
  int n_out = 0;
  auto* initial_opt = geodesic_cmd->add_option("--initial", initial_text,
                                               "t r theta phi tdot rdot thetadot phidot");
  auto* T_opt = geodesic_cmd->add_option("-T,--length", T, "affine length");
  auto* n_opt = geodesic_cmd->add_option("--n-out", n_out, "output points")->check(CLI::Range(2, 1000000));
  geodesic_cmd->add_option("--out", geo.out, "autoparallel trajectory file");
  geodesic_cmd->add_option("--finsler-out", geo.finsler_out, "Finsler geodesic trajectory file");
  geodesic_cmd->add_flag("--compare", geo.compare, "integrate the Finsler geodesic too");

  try {
    app.parse(argc, argv);
    if (!grid_text.empty()) g.grid = parse_resolution(grid_text);
    if (seed_opt->count() > 0) g.seed = seed;
    if (initial_opt->count() > 0) geo.initial = parse_state(initial_text);
    if (T_opt->count() > 0) {
      if (!(T > 0.0)) throw UsageError("-T must be positive");
      geo.T = T;
    }
    if (n_opt->count() > 0) geo.n_out = n_out;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << message_of(e) << "\n";
    return kExitUsage;
  }

  if (report_cmd->parsed()) {
    std::ifstream in(report_path);
    try {
      const json rep = json::parse(in);
      if (!g.quiet) out << render_human(rep);
      return kExitOk;
    } catch (const json::exception& e) {
      err << "error: " << report_path << ": " << e.what() << "\n";
      return kExitFail;
    }
  }

  CommandResult res;
  try {
    JobConfig cfg = load_config(config_path);
    const Tolerances tol = apply_globals(g, cfg);
    if (classify_cmd->parsed()) {
      res = cmd_classify(cfg, tol);
    } else if (metrize_cmd->parsed()) {
      res = cmd_metrize(cfg, tol);
    } else if (verify_cmd->parsed()) {
      res = cmd_verify(cfg, tol);
    } else {
      res = cmd_geodesic(cfg, tol, geo);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << message_of(e) << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }

  if (!g.json_path.empty()) {
    std::ofstream js(g.json_path);
    if (!js) {
      err << "error: cannot write '" << g.json_path << "'\n";
      return kExitFail;
    }
    js << res.report.dump(2) << "\n";
  }
  if (!g.quiet) out << render_human(res.report);
  if (res.report.contains("error")) {
    err << "error: " << res.report["error"]["kind"].get<std::string>() << ": "
        << res.report["error"]["message"].get<std::string>() << "\n";
  }
  return res.exit_code;
}

}  // namespace berwald::cli
