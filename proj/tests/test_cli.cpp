#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli_app.hpp"

using namespace avt;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "avt_cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(split_csv_line(line));
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("avt_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(CliCurve, GridAndRoundTrip) {
  const auto r = run({"curve", "--i-min", "0", "--i-max", "100", "--steps", "101"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 102u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"I", "classical", "avt1", "avt2"}));
  EXPECT_EQ(parse_double(rows[1][0]), 0.0);
  EXPECT_NEAR(parse_double(rows[1][1]), 1 / (std::numbers::pi * std::numbers::pi), 1e-15);
  EXPECT_EQ(parse_double(rows[1][2]), 1.0);
  EXPECT_NEAR(parse_double(rows[1][3]), 1.0, 1e-9);
  EXPECT_NEAR(parse_double(rows[10][1]), 1 / (9 + std::numbers::pi * std::numbers::pi), 1e-15);
  EXPECT_EQ(parse_double(rows[10][2]), 0.0625);
  // Shortest round-trip formatting reproduces the in-memory doubles exactly.
  const auto s = bound_suite(37.0);
  EXPECT_EQ(parse_double(rows[38][1]), s.classical_opt);
  EXPECT_EQ(parse_double(rows[38][3]), s.avt2);
}

TEST(CliCurve, Errors) {
  EXPECT_EQ(run({"curve", "--steps", "1"}).code, 1);
  EXPECT_EQ(run({"curve", "--i-min", "5", "--i-max", "2"}).code, 1);
  EXPECT_EQ(run({"curve", "--out", "/nonexistent-dir/x.csv"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliCurve, JsonRecord) {
  const auto r = run({"curve", "--steps", "3", "--i-max", "2", "--format", "json", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["command"], "curve");
  EXPECT_EQ(j["version"], cli::kVersion);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["outputs"]["I"].size(), 3u);
  EXPECT_EQ(j["outputs"]["avt1"][2].get<double>(), avt1_bound(2.0).value);
}

TEST(CliPrior, Families) {
  auto r = run({"prior"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1026u);
  EXPECT_NEAR(parse_double(rows[1][1]), 0.0, 1e-15);
  EXPECT_NEAR(parse_double(rows[513][1]), 1.0, 1e-15);
  EXPECT_NEAR(parse_double(rows[1025][1]), 0.0, 1e-15);

  r = run({"prior", "--family", "power", "--m", "1", "--fisher", "0", "--nodes", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (std::size_t i = 1; i < 10; ++i) EXPECT_NEAR(parse_double(csv_rows(r.out)[i][1]), 0.5, 1e-12);

  // Subfamily information of the lower-bound construction; AVT2 optimum.
  r = run({"prior", "--family", "power", "--fisher", "1", "--nodes", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  rows = csv_rows(r.out);
  EXPECT_GT(parse_double(rows[1][1]), 0.0);
  EXPECT_GT(parse_double(rows[9][1]), 0.0);

  EXPECT_EQ(run({"prior", "--family", "gaussian"}).code, 1);
  EXPECT_EQ(run({"prior", "--fisher", "-1"}).code, 1);
}

TEST(CliHolder, Constants) {
  auto r = run({"holder", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out)["outputs"];
  EXPECT_NEAR(j["constant"].get<double>(), std::pow(3.0, 0.8) / (4 * std::pow(5.0, 0.2)), 1e-15);
  EXPECT_GE(j["A"].get<double>(), 0.729927);
  EXPECT_LE(j["lower_bound"].get<double>(), j["upper_bound"].get<double>());
  EXPECT_LE(j["finite_lower_bound"].get<double>(), j["lower_bound"].get<double>());
  for (const char* k : {"A_lower", "highdim_constant"}) EXPECT_TRUE(j.contains(k));

  r = run({"holder", "--beta", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["outputs"]["constant"].get<double>(), 0.693361, 1e-6);

  EXPECT_EQ(run({"holder", "--n", "2"}).code, 1);
  EXPECT_EQ(run({"holder", "--beta", "2.5"}).code, 1);
  r = run({"holder"});
  EXPECT_EQ(r.out.rfind("key,value\nconstant,", 0), 0u);
}

TEST(CliSimulate, SummaryAndDeterminism) {
  const auto cfg = temp_file("sim.cfg");
  std::ofstream(cfg) << "# small run\nn = 200\nreps = 300\nseed = 3\nrecords = true\nt_nodes = 9\n";
  const auto a = temp_file("a.jsonl"), b = temp_file("b.jsonl");
  auto r = run({"simulate", "--config", cfg.string(), "--out", a.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"simulate", cfg.string(), "--out", b.string(), "--threads", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));

  std::istringstream in(text);
  std::string line;
  std::size_t records = 0;
  json summary;
  while (std::getline(in, line)) {
    const auto j = json::parse(line);
    if (j.contains("summary")) {
      summary = j;
    } else {
      ++records;
      EXPECT_NEAR(j["sq_error"].get<double>(),
                  std::pow(j["estimate"].get<double>() - j["t"].get<double>(), 2), 1e-12);
    }
  }
  EXPECT_EQ(records, 300u * 9u);
  EXPECT_TRUE(summary["pass"].get<bool>());
  EXPECT_NEAR(summary["bound"].get<double>(), avt2_bound(1.0).value, 1e-10);
  EXPECT_GE(summary["bayes_risk"].get<double>(), summary["bound"].get<double>() - 3 * summary["se"].get<double>());

  r = run({"simulate", cfg.string(), "--seed", "4"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out, text);
}

TEST(CliSimulate, Errors) {
  EXPECT_EQ(run({"simulate", "/nonexistent-dir/none.cfg"}).code, 2);
  const auto bad = temp_file("bad.cfg");
  std::ofstream(bad) << "reps = 10\nwhatever = 1\n";
  EXPECT_EQ(run({"simulate", bad.string()}).code, 1);
  const auto cfg = temp_file("ok.cfg");
  std::ofstream(cfg) << "n = 100\nreps = 50\n";
  EXPECT_EQ(run({"simulate", cfg.string(), "--format", "csv"}).code, 1);
  EXPECT_EQ(run({"simulate"}).code, 1);
}

TEST(CliChecks, GvtAndLp) {
  auto r = run({"gvt-check", "--fisher", "4", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["outputs"]["matches"].get<bool>());

  r = run({"lp-bound", "--p", "2", "--fisher", "3", "--family", "power", "--param", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const double ref = augmented_minimax_bound(FisherPath::constant(Interval(-1, 1), 3.0), Augmentation::power(2)).value;
  EXPECT_NEAR(json::parse(r.out)["outputs"]["value"].get<double>(), ref, 1e-6 * ref);
  EXPECT_EQ(run({"lp-bound", "--p", "1"}).code, 1);
}
