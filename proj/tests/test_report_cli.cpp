#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "orbit_isom/acceptance.hpp"
#include "orbit_isom/fixtures.hpp"
#include "orbit_isom/report_io.hpp"

using namespace orbit_isom;

namespace {

const std::string kCli = ORBIT_ISOM_CLI;
const std::string kFixtures = ORBIT_ISOM_FIXTURES;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + kCli + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(ReportJson, SchemaAndRoundTrip) {
  for (const auto& fx : finite_fixtures()) {
    const auto doc = report_to_json(quotient_isometry_group(fx.spec, {kDefaultDensity, fx.name}));
    const auto reparsed = nlohmann::json::parse(doc.dump());
    EXPECT_EQ(validate_report_json(reparsed), "") << fx.name;
  }
  auto doc = report_to_json(quotient_isometry_group(make_catalog_spec(kHopfId)));
  EXPECT_EQ(validate_report_json(doc), "");
  doc["kernel"].erase("finiteOrder");
  EXPECT_NE(validate_report_json(doc), "");
  doc = report_to_json(quotient_isometry_group(make_catalog_spec(kHopfId)));
  doc["theoremC"] = "maybe";
  EXPECT_NE(validate_report_json(doc), "");
}

TEST(ReportJson, ContractFieldValues) {
  const auto doc = report_to_json(quotient_isometry_group(find_fixture("c5")->spec));
  EXPECT_EQ(doc["euclideanFactorDim"], 0);
  EXPECT_EQ(doc["compactFactors"][0]["name"], "U(1)");
  EXPECT_EQ(doc["compactFactors"][0]["type"], "complex");
  EXPECT_EQ(doc["compactFactors"][0]["multiplicity"], 1);
  EXPECT_EQ(doc["kernel"]["finiteOrder"], 5);
  EXPECT_EQ(doc["kernel"]["circleDirections"], 0);
  EXPECT_EQ(doc["kernel"]["containsCenterOfG"], true);
  EXPECT_EQ(doc["boundary"], false);
  EXPECT_EQ(doc["formulaApplied"], "proposition-4.1b");
  EXPECT_EQ(doc["rank"], 1);
  EXPECT_EQ(doc["theoremB"], "pass");
  EXPECT_EQ(doc["theoremC"], "pass");
  EXPECT_EQ(doc["seed"], kDefaultSeed);
  EXPECT_EQ(doc["method"], "commutant-center split");
  EXPECT_EQ(doc["rng"], "mt19937_64");
}

TEST(ReportJson, BitIdenticalAcrossRuns) {
  EXPECT_EQ(serialized_reports(kDefaultSeed), serialized_reports(kDefaultSeed));
}

TEST(Cli, AnalyzeFixture) {
  const auto r = run("analyze " + kFixtures + "/c5.json");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(validate_report_json(doc), "");
  EXPECT_EQ(doc["compactFactors"][0]["name"], "U(1)");
}

TEST(Cli, AnalyzeHopfCatalog) {
  const auto r = run("analyze --input catalog:hopf-u1-r4");
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["identifiedAs"], "SO(3)");
  EXPECT_EQ(doc["rank"], 1);
  EXPECT_EQ(run("analyze " + kFixtures + "/hopf.json").code, 0);
}

TEST(Cli, ErrorsAndExitCodes) {
  EXPECT_EQ(run("analyze missing.json").code, 1);
  EXPECT_EQ(run("analyze " + kFixtures + "/shear_r2.json").code, 1);
  EXPECT_EQ(run("analyze " + kFixtures + "/irrational_rotation_r2.json").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("analyze --format yaml " + kFixtures + "/c5.json").code, 1);
}

TEST(Cli, AmbiguityExitsTwo) {
  // A rotation by 5e-8 lands inside the dedup guard band.
  const std::string path = testing::TempDir() + "/tiny_rotation.json";
  std::ofstream(path) << R"({"dimension": 2, "kind": "finite", "generators": [[["0.99999999999999878", "-5e-8"], ["5e-8", "0.99999999999999878"]]]})";
  EXPECT_EQ(run("analyze " + path).code, 2);
}

TEST(Cli, SeedPrecedence) {
  const auto with_flag = nlohmann::json::parse(run("analyze --seed 7 " + kFixtures + "/c5.json").out);
  EXPECT_EQ(with_flag["seed"], 7);
  const auto with_env = nlohmann::json::parse(run("analyze " + kFixtures + "/c5.json", "ORBIT_ISOM_SEED=11").out);
  EXPECT_EQ(with_env["seed"], 11);
  const auto both = nlohmann::json::parse(run("analyze --seed 7 " + kFixtures + "/c5.json", "ORBIT_ISOM_SEED=11").out);
  EXPECT_EQ(both["seed"], 7);
}

TEST(Cli, OutputFileAndTextFormat) {
  const std::string path = testing::TempDir() + "/q8_report.json";
  ASSERT_EQ(run("analyze --output " + path + " " + kFixtures + "/q8.json").code, 0);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(buf.str())["identifiedAs"], "SO(3)");
  const auto text = run("analyze --format text " + kFixtures + "/q8.json");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("Sp(1)"), std::string::npos);
}

TEST(Cli, Metric) {
  const auto r = run("metric --input " + kFixtures + "/c5.json 1,0 0,1");
  ASSERT_EQ(r.code, 0);
  // images of (0,1) sit at 18° + 72°k; the nearest is 18° away, chord 2·sin 9°.
  const double d = nlohmann::json::parse(r.out)["distance"];
  double ref = 1e9;
  for (int k = 0; k < 5; ++k) {
    const double t = 2 * std::numbers::pi * k / 5;
    ref = std::min(ref, std::hypot(1 + std::sin(t), -std::cos(t)));
  }
  EXPECT_NEAR(d, ref, 1e-12);
  EXPECT_NEAR(d, 2 * std::sin(std::numbers::pi / 20), 1e-12);
  // -I is not in C5: nearest image of (-1,0) is 36° away.
  const double opposite = nlohmann::json::parse(run("metric --input " + kFixtures + "/c5.json 1,0 -1,0").out)["distance"];
  EXPECT_NEAR(opposite, 2 * std::sin(std::numbers::pi / 10), 1e-12);
  EXPECT_NEAR(nlohmann::json::parse(run("metric --input " + kFixtures + "/c5.json 1,0 1,0").out)["distance"].get<double>(),
              0.0, 1e-15);
  EXPECT_EQ(run("metric --input " + kFixtures + "/c5.json 1,0,0 0,1").code, 1);
}

TEST(Cli, CatalogAndLift) {
  const auto cat = run("catalog");
  ASSERT_EQ(cat.code, 0);
  const auto list = nlohmann::json::parse(cat.out);
  ASSERT_GE(list.size(), 3u);
  EXPECT_EQ(list[0]["id"], "hopf-u1-r4");
  EXPECT_EQ(list[1]["id"], "so2xso3-r5");
  EXPECT_EQ(list[2]["id"], "so2-tensor-so3-r6");

  const auto lift = run("lift --samples 20");
  ASSERT_EQ(lift.code, 0);
  EXPECT_LE(nlohmann::json::parse(lift.out)["maxLiftResidual"].get<double>(), 1e-8);
  const auto demo = run("lift --samples 500 so2xso3-r5");
  ASSERT_EQ(demo.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(demo.out)["sectorAngle"].get<double>(), std::numbers::pi / 2, 0.01);
  EXPECT_EQ(run("lift nope").code, 1);
}

TEST(Cli, VerifySubsetAndSeedRobustness) {
  const auto a = run("verify --only hopf --seed 7");
  const auto b = run("verify --only hopf --seed 9");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0);
  auto verdicts = [](const std::string& s) {
    std::string v;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) v += line.substr(0, 4);
    return v;
  };
  EXPECT_EQ(verdicts(a.out), verdicts(b.out));
  EXPECT_NE(a.out.find("[1]"), std::string::npos);
  EXPECT_EQ(a.out.find("[4]"), std::string::npos);
}
