#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ladderlab/cli.hpp"
#include "ladderlab/errors.hpp"

using namespace ladderlab;
using namespace ladderlab::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ladderlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string scenario(const std::string& name) { return std::string(LADDERLAB_SCENARIO_DIR) + "/" + name; }

Scenario parse_text(const std::string& text) { return parse_scenario(Json::parse(text), LADDERLAB_SCENARIO_DIR); }

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("0.5"), Complex(0.5, 0.0));
  EXPECT_EQ(parse_complex("i"), Complex(0.0, 1.0));
  EXPECT_EQ(parse_complex("-2i"), Complex(0.0, -2.0));
  EXPECT_EQ(parse_complex("0.3-1.2i"), Complex(0.3, -1.2));
  EXPECT_EQ(parse_complex("0.7+0.6i"), Complex(0.7, 0.6));
  EXPECT_EQ(parse_complex("1e-3+2e-1i"), Complex(1e-3, 0.2));
  EXPECT_THROW(parse_complex(""), ConfigError);
  EXPECT_THROW(parse_complex("abc"), ConfigError);
  EXPECT_THROW(parse_complex("1+"), ConfigError);
}

TEST(Scenario, StrictSchema) {
  const auto s = parse_text(R"({"model": "quon", "dim": 12, "quon": {"q": {"re": 0.3, "im": 0.4}},
                               "dressing": {"kind": "random", "cond": 10}})");
  EXPECT_EQ(s.dim, 12);
  EXPECT_EQ(s.q, Complex(0.3, 0.4));
  EXPECT_EQ(s.dressing, DressingKind::random);
  EXPECT_THROW(parse_text(R"({"modle": "quon"})"), ConfigError);
  EXPECT_THROW(parse_text(R"({"dim": "16"})"), ConfigError);
  EXPECT_THROW(parse_text(R"({"dim": 16.5})"), ConfigError);
  EXPECT_THROW(parse_text(R"({"model": "boson"})"), ConfigError);
  EXPECT_THROW(parse_text(R"({"model": "imported", "imported": {"H": "nope.json"}})"), ConfigError);
  EXPECT_THROW(load_scenario(scenario("unknown_key.json")), ConfigError);
}

TEST(Scenario, EchoedDeterministically) {
  const auto s = load_scenario(scenario("imported_clean.json"));
  const Json j = to_json(s);
  EXPECT_EQ(j["imported"]["H"], "quon_h.json");
  EXPECT_EQ(j["model"], "imported");
}

TEST(ExitCodes, Contract) {
  EXPECT_EQ(run_cli({"classify", "--scenario", scenario("quon_classify.json"), "--no-timestamp"}).code, 0);
  EXPECT_EQ(run_cli({"classify", "--scenario", scenario("imported_clean.json"), "--no-timestamp"}).code, 0);
  EXPECT_EQ(run_cli({"classify", "--scenario", scenario("imported_perturbed.json"), "--no-timestamp"}).code, 1);
  EXPECT_EQ(run_cli({"classify", "--scenario", scenario("missing_file.json")}).code, 2);
  EXPECT_EQ(run_cli({"classify", "--scenario", scenario("unknown_key.json")}).code, 2);
  EXPECT_EQ(run_cli({"classify", "--dim", "2"}).code, 2);
  EXPECT_EQ(run_cli({"classify", "--cond", "1e7"}).code, 2);
  EXPECT_EQ(run_cli({"classify", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  // The q = 1/2 levels crowd below the degeneracy gap past n = 28.
  const auto r = run_cli({"spectrum", "--q", "0.5", "--dim", "40", "--n-max", "38", "--no-timestamp"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(Json::parse(r.out)["status"], "numerical_failure");
}

TEST(Reports, DeterministicWithoutTimestamp) {
  for (const char* name : {"quon_classify.json", "dgha_dressed.json", "graphene.json"}) {
    const std::string cmd = std::string(name).starts_with("dgha") ? "dgha"
                            : std::string(name).starts_with("graphene") ? "graphene"
                                                                         : "spectrum";
    const auto a = run_cli({cmd, "--scenario", scenario(name), "--no-timestamp"});
    const auto b = run_cli({cmd, "--scenario", scenario(name), "--no-timestamp"});
    EXPECT_EQ(a.code, 0) << name << a.err;
    EXPECT_EQ(a.out, b.out) << name;
    EXPECT_FALSE(Json::parse(a.out).contains("generated_at"));
  }
  const auto t = run_cli({"graphene", "--ncut", "4"});
  EXPECT_TRUE(Json::parse(t.out).contains("generated_at"));
}

TEST(Reports, Layout) {
  const auto r = run_cli({"spectrum", "--scenario", scenario("dgha_spectrum.json"), "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["command"], "spectrum");
  EXPECT_EQ(j["status"], "pass");
  EXPECT_TRUE(j["tolerance"].contains("cond_bound"));
  EXPECT_FALSE(j["checks"].empty());
  EXPECT_FALSE(j["table"]["columns"].empty());
  EXPECT_FALSE(j["table"]["rows"].empty());
}

TEST(Reports, CsvAndHuman) {
  const auto csv = run_cli({"dgha", "--f", "x+3", "--dim", "8", "--format", "csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  std::istringstream lines(csv.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_NE(header.find(','), std::string::npos);
  EXPECT_EQ(csv.out.find('{'), std::string::npos);
  const auto human = run_cli({"dgha", "--f", "x+3", "--dim", "8", "--format", "human"});
  EXPECT_NE(human.out.find("status:  pass"), std::string::npos);
  EXPECT_EQ(run_cli({"dgha", "--format", "yaml"}).code, 2);
}

TEST(Reports, OutOfRadiusRowsAreFlagged) {
  const auto r = run_cli({"bicoherent", "--scenario", scenario("quon_bicoherent_radius.json"), "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  int nulls = 0;
  for (const auto& row : j["table"]["rows"]) {
    for (const auto& cell : row) nulls += cell.is_null() ? 1 : 0;
  }
  EXPECT_GT(nulls, 0);
}

TEST(Reports, WrittenToFile) {
  const fs::path path = fs::temp_directory_path() / "ladderlab_cli_test_report.json";
  fs::remove(path);
  const auto r = run_cli({"graphene", "--ncut", "4", "--no-timestamp", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["command"], "graphene");
  fs::remove(path);
}

TEST(Checks, SelectionAndUnknownNames) {
  const fs::path path = fs::temp_directory_path() / "ladderlab_cli_checks.json";
  {
    std::ofstream o(path);
    o << R"({"model": "graphene", "graphene": {"ncut": 4}, "checks": ["hermitian"]})";
  }
  const auto r = run_cli({"graphene", "--scenario", path.string(), "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  int counted = 0;
  const Json report = Json::parse(r.out);
  for (const auto& c : report["checks"]) counted += c["counted"].get<bool>() ? 1 : 0;
  EXPECT_EQ(counted, 1);
  {
    std::ofstream o(path);
    o << R"({"model": "graphene", "graphene": {"ncut": 4}, "checks": ["nonsense"]})";
  }
  EXPECT_EQ(run_cli({"graphene", "--scenario", path.string()}).code, 2);
  fs::remove(path);
}

TEST(ImportMatrix, CanonicalExport) {
  const fs::path path = fs::temp_directory_path() / "ladderlab_cli_export.json";
  fs::remove(path);
  const auto r = run_cli({"import-matrix", "--matrix", scenario("quon_h.json"), "--export", path.string(),
                          "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path));
  EXPECT_EQ(run_cli({"import-matrix", "--matrix", scenario("absent.json")}).code, 2);
  fs::remove(path);
}
