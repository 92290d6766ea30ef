#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "pseudofrac/io.hpp"

using namespace pseudofrac;
namespace fs = std::filesystem;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pseudofrac_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
    EXPECT_EQ(std::strtod(format_number(v).c_str(), nullptr), v) << v;
  }
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(WriteAtomic, ReplacesWithoutLeftovers) {
  const fs::path dir = scratch_dir("atomic");
  const fs::path target = dir / "out.csv";
  write_atomic(target, "old\n");
  write_atomic(target, "new\n");
  EXPECT_EQ(slurp(target), "new\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  fs::remove_all(dir);
}

TEST(WriteAtomic, MissingDirectoryThrows) {
  EXPECT_ANY_THROW(write_atomic(fs::temp_directory_path() / "pseudofrac_no_such_dir" / "x.csv", "x"));
}

TEST(GridFunctionIo, CsvAndJson) {
  const auto g = std::make_shared<const Grid>(build_grid(DomainSpec::rectangle(1.0, 0.5), 0.5, 0.01));
  GridFunction u = GridFunction::constant(g, 0.25);
  const std::string csv = grid_function_csv(u);
  EXPECT_EQ(first_line(csv), "ix,iy,x,y,value");
  EXPECT_EQ(line_count(csv), g->size() + 1);
  const auto j = nlohmann::json::parse(grid_function_json(u));
  EXPECT_EQ(j["nodes"].get<std::size_t>(), g->size());
  EXPECT_EQ(j["values"].size(), g->size());
  EXPECT_EQ(j["values"][0].get<double>(), 0.25);
}

TEST(SweepIo, HeaderAndNonFinite) {
  SweepRecord ok;
  ok.s = 0.5;
  ok.p = 2.0;
  ok.lambda = 4.0;
  ok.converged = true;
  SweepRecord bad = ok;
  bad.lambda = std::numeric_limits<double>::quiet_NaN();
  bad.converged = false;
  const std::string csv = sweep_csv({ok, bad});
  EXPECT_EQ(first_line(csv), "s,p,lambda,lambda_scaled,reference,gap,grid_h,converged,wall_time_ms");
  EXPECT_EQ(line_count(csv), 3u);
  EXPECT_NE(csv.find("nan"), std::string::npos);
}

TEST(EigenIo, JsonParsesAndNullsNonFinite) {
  const auto g = std::make_shared<const Grid>(build_grid(DomainSpec::ball(1.0), 0.5, 0.01));
  EigenResult r;
  r.u = GridFunction::constant(g, 1.0);
  r.lambda = std::numeric_limits<double>::infinity();
  const auto j = nlohmann::json::parse(eigen_result_json(r, "eig_u.csv"));
  EXPECT_EQ(j["kind"], "nonlocal");
  EXPECT_TRUE(j["lambda"].is_null());
  EXPECT_EQ(j["eigenfunction_csv"], "eig_u.csv");
  LocalEigenResult l;
  l.u = r.u;
  l.lambda_local = 2.0;
  EXPECT_EQ(nlohmann::json::parse(eigen_result_json(l, "x.csv"))["kind"], "local");
}

TEST(ChecksIo, Header) {
  CheckRecord rec{"poincare", "u=0;s=0.5", {1.0, 2.0, 1.0}, true};
  const std::string csv = checks_csv({rec});
  EXPECT_EQ(first_line(csv), "check_name,param_summary,margin,pass");
  EXPECT_EQ(line_count(csv), 2u);
}

TEST(DiagramIo, Fields) {
  DiagramReport d;
  d.corner_sp = d.corner_1p = d.corner_sinf = d.corner_inf = 1.0;
  d.edges = {{"geometric", "corner_sinf", "corner_inf", 0.0}};
  const auto j = nlohmann::json::parse(diagram_json(d));
  for (const char* key : {"corner_sp", "corner_1p", "corner_sinf", "corner_inf", "edges", "bbm_constant"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}
