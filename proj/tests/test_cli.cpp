#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "run.hpp"
#include "run_config.hpp"

using namespace pseudofrac::cli;
namespace fs = std::filesystem;

namespace {

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "pseudofrac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_config(static_cast<int>(argv.size()), argv.data());
}

struct Outcome {
  int code = 0;
  nlohmann::json summary;
  std::string diag;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pseudofrac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream summary, diag;
  Outcome o;
  o.code = main_entry(static_cast<int>(argv.size()), argv.data(), summary, diag);
  if (!summary.str().empty()) o.summary = nlohmann::json::parse(summary.str());
  o.diag = diag.str();
  return o;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pseudofrac_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t lines_in(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST(ParseConfig, Defaults) {
  const RunConfig c = parse({"eig"});
  EXPECT_EQ(c.command, "eig");
  EXPECT_EQ(c.domain, "ball:1");
  EXPECT_EQ(c.s, 0.5);
  EXPECT_EQ(c.p, 2.0);
  EXPECT_FALSE(c.h.has_value());
  EXPECT_EQ(c.format, Format::csv);
}

TEST(ParseConfig, Flags) {
  const RunConfig c = parse({"sweep-p", "--domain", "rect:1,0.5", "--s", "0.7", "--p-list", "2,4,8",
                             "--h", "0.05", "--seed", "9", "--format", "json", "--no-timing"});
  EXPECT_EQ(c.domain, "rect:1,0.5");
  EXPECT_EQ(c.s, 0.7);
  EXPECT_EQ(c.p_list, (std::vector<double>{2, 4, 8}));
  EXPECT_EQ(c.h, 0.05);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.format, Format::json);
  EXPECT_FALSE(c.record_timing);
}

TEST(ParseConfig, RejectsBadValues) {
  try {
    parse({"eig", "--s", "1.5"});
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("--s"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse({"eig", "--p", "1"}), UsageError);
  EXPECT_THROW(parse({"frobnicate"}), UsageError);
  EXPECT_THROW(parse({"check", "--suite", "nope"}), UsageError);
  EXPECT_THROW(parse({"eig", "--bogus"}), UsageError);
  EXPECT_THROW(parse({"--help"}), HelpRequested);
}

TEST(ParseConfig, FileThenFlags) {
  const fs::path dir = scratch("config");
  const fs::path file = dir / "run.json";
  std::ofstream(file) << R"({"command": "eig", "s": 0.3, "p": 4, "domain": "ball:2"})";
  const RunConfig c = parse({"--config", file.string(), "--p", "3"});
  EXPECT_EQ(c.command, "eig");
  EXPECT_EQ(c.s, 0.3);
  EXPECT_EQ(c.p, 3.0);
  EXPECT_EQ(c.domain, "ball:2");
  fs::remove_all(dir);
}

TEST(ConfigJson, RejectsUnknownKeysAndTypes) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"command":"eig","sigma":1})")), UsageError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"command":"eig","s":"half"})")), UsageError);
}

TEST(ConfigJson, RoundTrip) {
  RunConfig c;
  c.command = "sweep-s";
  c.s_list = {0.25, 0.75};
  c.h = 0.125;
  c.format = Format::json;
  c.local = true;
  EXPECT_EQ(config_from_json(nlohmann::json::parse(serialize(c))), c);
}

TEST(Run, GeomRectangle) {
  const fs::path dir = scratch("geom");
  const Outcome o = invoke({"geom", "--domain", "rect:1,0.5", "--out", dir.string()});
  EXPECT_EQ(o.code, kOk) << o.diag;
  EXPECT_NEAR(o.summary["lambda_infinity"].get<double>(), 1.41421, 1e-2);
  EXPECT_TRUE(fs::exists(dir / "geom.json"));
  fs::remove_all(dir);
}

TEST(Run, EigWritesArtifacts) {
  const fs::path dir = scratch("eig");
  const Outcome o = invoke({"eig", "--h", "0.25", "--out", dir.string()});
  EXPECT_EQ(o.code, kOk) << o.diag;
  EXPECT_GT(o.summary["lambda"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(dir / "eig.json"));
  EXPECT_TRUE(fs::exists(dir / "eig_u.csv"));
  fs::remove_all(dir);
}

TEST(Run, CheckSuite) {
  const fs::path dir = scratch("check");
  const Outcome o = invoke({"check", "--seed", "7", "--out", dir.string()});
  EXPECT_EQ(o.code, kOk) << o.diag;
  EXPECT_EQ(lines_in(dir / "checks.csv"), 801u);
  fs::remove_all(dir);
}

TEST(Run, EmptyGridIsUsageError) {
  const fs::path dir = scratch("empty");
  const Outcome o = invoke({"eig", "--domain", "ball:0.1", "--h", "0.5", "--out", dir.string()});
  EXPECT_EQ(o.code, kUsage);
  EXPECT_FALSE(o.diag.empty());
  fs::remove_all(dir);
}

TEST(Run, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, kOk); }

TEST(Run, BadFlagExitsTwo) { EXPECT_EQ(invoke({"eig", "--s", "1.5"}).code, kUsage); }
