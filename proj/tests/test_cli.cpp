#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "berwald/cli/commands.hpp"
#include "berwald/cli/config.hpp"

namespace berwald::cli {
namespace {

namespace fs = std::filesystem;

std::string config_path(const std::string& name) {
  return std::string(BERWALD_CONFIG_DIR) + "/" + name + ".cfg";
}

JobConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "job.cfg");
}

std::string config_error(const std::string& text) {
  try {
    parse_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "berwald");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& suffix) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  return (fs::temp_directory_path() / (std::string("berwald_") + info->name() + suffix)).string();
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

TEST(Config, ParsesAllSections) {
  const JobConfig cfg = parse_text(
      "# comment\n"
      "[connection]\n"
      "k1 = 2*r*(alpha-2)\n"
      "k4 = 4*alpha*r^3*(alpha - 1)\n"
      "[params]\n"
      "alpha = 3\n"
      "[grid]\n"
      "t = 0.5 2.5\n"
      "r = 1, 2\n"
      "resolution = 5x7\n"
      "[samples]\n"
      "count = 12\n"
      "seed = 99\n"
      "domain = tdot - 0.5\n"
      "[task]\n"
      "class = 3\n"
      "signature = euclidean\n"
      "C2 = -2.5\n"
      "theta = s^2 + s\n"
      "initial = 1 2 1.5 0 1 0 0 0\n"
      "T = 0.25\n"
      "n_out = 7\n");
  EXPECT_EQ(cfg.connection.at("k4"), "4*alpha*r^3*(alpha - 1)");
  EXPECT_EQ(cfg.params.at("alpha"), 3.0);
  EXPECT_EQ(cfg.grid.box.r0, 1.0);
  EXPECT_EQ(cfg.grid.box.r1, 2.0);
  EXPECT_EQ(cfg.grid.nt, 5);
  EXPECT_EQ(cfg.grid.nr, 7);
  EXPECT_EQ(cfg.sample_count, 12u);
  EXPECT_EQ(cfg.seed, 99u);
  EXPECT_EQ(cfg.task.class_override, 3);
  EXPECT_EQ(cfg.task.signature, Signature::kEuclidean);
  EXPECT_EQ(cfg.task.C2, -2.5);
  EXPECT_EQ(cfg.task.theta, "s^2 + s");
  ASSERT_TRUE(cfg.task.initial.has_value());
  EXPECT_EQ(cfg.task.initial->r, 2.0);
  EXPECT_EQ(cfg.task.n_out, 7);
  EXPECT_EQ(cfg.lines.at("connection.k4"), 4);
  const auto k = cfg.connection_profile().values(1.0, 1.5);
  EXPECT_DOUBLE_EQ(k[3], 4 * 3 * std::pow(1.5, 3) * 2);
}

TEST(Config, SyntaxErrorHasLineAndColumn) {
  const std::string msg = config_error("[connection]\n\nk1 =  r +* 2\n");
  EXPECT_NE(msg.find("job.cfg:3:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("SyntaxError"), std::string::npos) << msg;
}

TEST(Config, UnboundParameterNamed) {
  const std::string msg = config_error("[connection]\nk1 = beta*r\n");
  EXPECT_NE(msg.find("job.cfg:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'beta'"), std::string::npos) << msg;
  // Velocities are not allowed in a connection coefficient.
  EXPECT_NE(config_error("[connection]\nk1 = tdot\n").find("'tdot'"), std::string::npos);
}

TEST(Config, Rejections) {
  EXPECT_NE(config_error("[nope]\n").find("unknown section"), std::string::npos);
  EXPECT_NE(config_error("k1 = 1\n").find("outside of any section"), std::string::npos);
  EXPECT_NE(config_error("[connection]\nk13 = 1\n").find("k1..k12"), std::string::npos);
  EXPECT_NE(config_error("[connection]\nk1 = 1\nk1 = 2\n").find("duplicate"), std::string::npos);
  EXPECT_NE(config_error("[grid]\nt = 2 1\n").find("empty range"), std::string::npos);
  EXPECT_NE(config_error("[grid]\nr = -1 1\n").find("positive"), std::string::npos);
  EXPECT_NE(config_error("[params]\nalpha = three\n").find("expected a number"),
            std::string::npos);
  EXPECT_NE(config_error("[task]\nclass = 6\n").find("1..5"), std::string::npos);
  EXPECT_NE(config_error("[task]\ninitial = 1 2\n").find("8 components"), std::string::npos);
  EXPECT_NE(config_error("[samples]\ncount = 2.5\n").find("positive integer"),
            std::string::npos);
  EXPECT_NE(config_error("[task]\nL = \n").find("empty value"), std::string::npos);
}

TEST(Config, DomainPredicateFiltersSamples) {
  const JobConfig cfg = parse_text("[samples]\ncount = 40\ndomain = rdot - 0.5\n");
  for (const auto& p : sample_tangent_points(cfg.sample_options())) EXPECT_GT(p.rdot, 0.5);
}

TEST(Config, ResolutionAndTolerances) {
  EXPECT_EQ(parse_resolution("12x3"), std::make_pair(12, 3));
  EXPECT_THROW(parse_resolution("12"), UsageError);
  EXPECT_THROW(parse_resolution("1x5"), UsageError);
  EXPECT_THROW(parse_resolution("4x5x"), UsageError);
  Tolerances tol;
  tol.set("horizontal", 1e-3);
  tol.set("classifier.rank", 1e-6);
  EXPECT_EQ(tol.verifier.horizontal, 1e-3);
  EXPECT_EQ(tol.classifier.rank, 1e-6);
  EXPECT_THROW(tol.set("bogus", 1.0), UsageError);
  EXPECT_THROW(tol.set("drift", -1.0), UsageError);
}

TEST(Cli, ClassifyExample1) {
  const std::string js = temp_file(".json");
  const CliRun r = run({"--quiet", "--json", js, "classify", config_path("example1")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto rep = read_json(js);
  EXPECT_EQ(rep["schema_version"], 1);
  EXPECT_EQ(rep["seed"], 1);
  EXPECT_EQ(rep["classification"]["class"], 1);
  EXPECT_EQ(rep["classification"]["riemann"], "no");
  EXPECT_EQ(rep["classification"]["holonomy_rank"]["rank"], 3);
  EXPECT_NEAR(rep["classification"]["ricci_asymmetry"].get<double>(), -8.0, 1e-10);
  EXPECT_TRUE(rep["classification"]["quadratic_fit"]["rules_out"].get<bool>());
}

TEST(Cli, ClassifyFlat) {
  const std::string js = temp_file(".json");
  const CliRun r = run({"classify", "--json", js, config_path("flat")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("class               4"), std::string::npos) << r.out;
  const auto rep = read_json(js);
  EXPECT_EQ(rep["classification"]["class"], 4);
  EXPECT_EQ(rep["classification"]["riemann"], "yes");
  EXPECT_EQ(rep["classification"]["holonomy_rank"]["rank"], 1);
}

TEST(Cli, UnsupportedConnection) {
  const CliRun r = run({"classify", config_path("unsupported")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("UnsupportedConnection"), std::string::npos) << r.err;
}

TEST(Cli, UndeterminedExitsTwo) {
  // Absurdly wide zero/nonzero bands leave every test undetermined.
  const CliRun r = run({"--tol-override", "classifier.zero=1e-30", "--tol-override",
                     "classifier.nonzero=1e3", "classify", config_path("example1")});
  EXPECT_EQ(r.code, 2) << r.out << r.err;
}

TEST(Cli, MetrizeExample2) {
  const std::string js = temp_file(".json");
  const CliRun r = run({"--quiet", "--json", js, "metrize", config_path("example2")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_json(js);
  EXPECT_NEAR(rep["forms"]["constants"]["lambda"].get<double>(), 0.75, 1e-12);
  for (const auto& c : rep["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
  ASSERT_EQ(rep["tables"].size(), 1u);
  EXPECT_EQ(rep["tables"][0]["values"].size(), 9u);
  EXPECT_EQ(rep["tables"][0]["values"][0][0], 0.0);
}

TEST(Cli, MetrizeFlatGivesQuadratic) {
  const std::string js = temp_file(".json");
  const CliRun r = run({"--quiet", "--json", js, "metrize", config_path("flat")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_json(js);
  EXPECT_TRUE(rep["forms"].contains("riemann"));
  EXPECT_FALSE(rep["forms"].contains("finsler"));
  bool saw_lc = false;
  for (const auto& c : rep["checks"]) {
    if (c["name"] == "A.levi_civita") {
      saw_lc = true;
      EXPECT_LT(c["value"].get<double>(), 1e-10);
    }
  }
  EXPECT_TRUE(saw_lc);
}

TEST(Cli, MetrizeAsymmetricClass5Refuses) {
  const std::string js = temp_file(".json");
  const CliRun r = run({"--json", js, "metrize", config_path("class5_asymmetric")});
  EXPECT_EQ(r.code, 1);
  const auto rep = read_json(js);
  EXPECT_EQ(rep["error"]["kind"], "NotRiemannMetrizable");
  EXPECT_FALSE(rep.contains("forms"));
}

TEST(Cli, UncertifiedFormsAreWithheld) {
  // A horizontal tolerance of 1e-300 cannot be met; metrize must name the check.
  const std::string js = temp_file(".json");
  const CliRun r =
      run({"--tol-override", "horizontal=1e-300", "--json", js, "metrize", config_path("example1")});
  EXPECT_EQ(r.code, 1);
  const auto rep = read_json(js);
  EXPECT_FALSE(rep.contains("forms"));
  EXPECT_NE(rep["error"]["message"].get<std::string>().find("L.horizontal"), std::string::npos);
}

TEST(Cli, VerifyUserL) {
  const std::string cfg = temp_file(".cfg");
  {
    std::ifstream in(config_path("flat"));
    std::ofstream out(cfg);
    out << in.rdbuf() << "L = tdot^2 - rdot^2 - thetadot^2 - sin(theta)^2*phidot^2\n";
  }
  const CliRun good = run({"verify", cfg});
  EXPECT_EQ(good.code, 0) << good.out << good.err;
  {
    std::ifstream in(config_path("flat"));
    std::ofstream out(cfg);
    out << in.rdbuf() << "L = tdot^2 - rdot^2 - 2*thetadot^2 - sin(theta)*phidot^2\n";
  }
  const CliRun bad = run({"verify", cfg});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("L.horizontal"), std::string::npos) << bad.err;
}

TEST(Cli, GeodesicFlatEndpoint) {
  const std::string dat = temp_file(".dat");
  const CliRun r = run({"--quiet", "geodesic", config_path("flat"), "--initial",
                     "1 1 1.2 0.3 1 1 0 0", "-T", "1", "--n-out", "11", "--out", dat});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dat);
  std::string header, line, last;
  std::getline(in, header);
  EXPECT_EQ(header, "s t r theta phi tdot rdot thetadot phidot");
  int rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 11);
  std::istringstream ls(last);
  double s, t, rr;
  ls >> s >> t >> rr;
  EXPECT_NEAR(t, 2.0, 1e-10);
  EXPECT_NEAR(rr, 2.0, 1e-10);
}

TEST(Cli, GeodesicComparesIntegrators) {
  const std::string js = temp_file(".json");
  const CliRun r = run({"--quiet", "--json", js, "geodesic", config_path("example1"), "--compare"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_json(js);
  ASSERT_EQ(rep["checks"].size(), 2u);
  EXPECT_LT(rep["checks"][0]["value"].get<double>(), 1e-6);
  EXPECT_LT(rep["checks"][1]["value"].get<double>(), 1e-8);
}

TEST(Cli, GeodesicChartExitReportsLastState) {
  const CliRun r = run({"--quiet", "geodesic", config_path("example1"), "--initial",
                     "1 2 1.5707963267948966 0 1 0.1 0.05 0.02"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ChartExit"), std::string::npos);
  EXPECT_NE(r.err.find("last good state"), std::string::npos);
}

TEST(Cli, UsageErrorsExit64) {
  EXPECT_EQ(run({"geodesic", config_path("flat"), "--initial", "1 2 3"}).code, 64);
  EXPECT_EQ(run({"geodesic", config_path("flat"), "--bogus"}).code, 64);
  EXPECT_EQ(run({"--grid", "3y3", "classify", config_path("flat")}).code, 64);
  EXPECT_EQ(run({"--tol-override", "nope=1", "classify", config_path("flat")}).code, 64);
  EXPECT_EQ(run({"classify"}).code, 64);
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"geodesic", config_path("example2")}).code, 64);  // no initial state
}

TEST(Cli, BadConfigExitsOne) {
  const std::string cfg = temp_file(".cfg");
  std::ofstream(cfg) << "[connection]\nk1 = r +\n";
  const CliRun r = run({"classify", cfg});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST(Cli, ReportsAreByteIdentical) {
  const std::string a = temp_file("_a.json"), b = temp_file("_b.json");
  for (const auto& path : {a, b}) {
    ASSERT_EQ(run({"--quiet", "--seed", "7", "--grid", "7x7", "--json", path, "metrize",
                   config_path("example1")})
                  .code,
              0);
  }
  std::ifstream ia(a), ib(b);
  std::stringstream sa, sb;
  sa << ia.rdbuf();
  sb << ib.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  const auto rep = read_json(a);
  EXPECT_EQ(rep["seed"], 7);
  EXPECT_EQ(rep["samples"]["seed"], 7);
  EXPECT_EQ(rep["grid"]["nt"], 7);
}

TEST(Cli, ReportRendersSavedJson) {
  const std::string js = temp_file(".json");
  ASSERT_EQ(run({"--quiet", "--json", js, "classify", config_path("class5_symmetric")}).code, 0);
  const CliRun r = run({"report", js});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("class               5"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("status ok (exit 0)"), std::string::npos);
}

}  // namespace
}  // namespace berwald::cli
