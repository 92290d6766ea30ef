#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pseudofrac/errors.hpp"
#include "pseudofrac/geometry.hpp"

namespace pseudofrac::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {
    "command", "domain",   "s",         "p",        "p_list", "s_list", "h",
    "boundary_spacing",    "seed",      "restarts", "grad_tol", "max_iters", "out",
    "format",  "suite",    "local",     "record_timing"};

bool one_of(const std::string& value, const auto& options) {
  return std::find(std::begin(options), std::end(options), value) != std::end(options);
}

Format parse_format(const std::string& text, const std::string& flag) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw UsageError(flag + ": format must be csv or json, got '" + text + "'");
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

void check_ascending(const std::vector<double>& v, const std::string& flag) {
  if (v.empty()) throw UsageError(flag + " must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw UsageError(flag + " must be strictly ascending");
  }
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.command.empty()) throw UsageError("command: missing command");
  if (!one_of(c.command, kCommands)) throw UsageError("command: unknown command '" + c.command + "'");
  try {
    (void)parse_domain(c.domain);
  } catch (const Error& e) {
    throw UsageError(std::string("--domain: ") + e.what());
  }
  if (!(c.s > 0.0 && c.s < 1.0)) throw UsageError("--s: s must lie in (0,1)");
  if (!(c.p > 1.0) || !std::isfinite(c.p)) throw UsageError("--p: p must lie in (1,inf)");
  check_ascending(c.p_list, "--p-list");
  for (double p : c.p_list) {
    if (!(p > 1.0) || !std::isfinite(p)) throw UsageError("--p-list: every p must lie in (1,inf)");
  }
  check_ascending(c.s_list, "--s-list");
  for (double s : c.s_list) {
    if (!(s > 0.0 && s < 1.0)) throw UsageError("--s-list: every s must lie in (0,1)");
  }
  if (c.h && !(*c.h > 0.0 && std::isfinite(*c.h))) throw UsageError("--h: h must be positive");
  if (!(c.boundary_spacing > 0.0)) throw UsageError("--boundary-spacing: must be positive");
  if (c.restarts < 1) throw UsageError("--restarts: must be at least 1");
  if (!(c.grad_tol >= 0.0)) throw UsageError("--grad-tol: must be non-negative");
  if (c.max_iters < 1) throw UsageError("--max-iters: must be at least 1");
  if (!one_of(c.suite, kSuites)) throw UsageError("--suite: unknown suite '" + c.suite + "'");
  if (c.out.empty()) throw UsageError("--out: empty path");
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  for (const auto& item : j.items()) {
    if (!kKeys.count(item.key())) throw UsageError("config: unknown key '" + item.key() + "'");
  }
  RunConfig c;
  if (j.contains("command")) c.command = get<std::string>(j, "command");
  if (j.contains("domain")) c.domain = get<std::string>(j, "domain");
  if (j.contains("s")) c.s = get<double>(j, "s");
  if (j.contains("p")) c.p = get<double>(j, "p");
  if (j.contains("p_list")) c.p_list = get<std::vector<double>>(j, "p_list");
  if (j.contains("s_list")) c.s_list = get<std::vector<double>>(j, "s_list");
  if (j.contains("h") && !j.at("h").is_null()) c.h = get<double>(j, "h");
  if (j.contains("boundary_spacing")) c.boundary_spacing = get<double>(j, "boundary_spacing");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("restarts")) c.restarts = get<int>(j, "restarts");
  if (j.contains("grad_tol")) c.grad_tol = get<double>(j, "grad_tol");
  if (j.contains("max_iters")) c.max_iters = get<int>(j, "max_iters");
  if (j.contains("out")) c.out = get<std::string>(j, "out");
  if (j.contains("format")) c.format = parse_format(get<std::string>(j, "format"), "format");
  if (j.contains("suite")) c.suite = get<std::string>(j, "suite");
  if (j.contains("local")) c.local = get<bool>(j, "local");
  if (j.contains("record_timing")) c.record_timing = get<bool>(j, "record_timing");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["domain"] = c.domain;
  j["s"] = c.s;
  j["p"] = c.p;
  j["p_list"] = c.p_list;
  j["s_list"] = c.s_list;
  j["h"] = c.h ? json(*c.h) : json(nullptr);
  j["boundary_spacing"] = c.boundary_spacing;
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["grad_tol"] = c.grad_tol;
  j["max_iters"] = c.max_iters;
  j["out"] = c.out;
  j["format"] = c.format == Format::csv ? "csv" : "json";
  j["suite"] = c.suite;
  j["local"] = c.local;
  j["record_timing"] = c.record_timing;
  return j;
}

std::string serialize(const RunConfig& c) { return config_to_json(c).dump(2); }

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"First eigenvalue of the nonlocal pseudo p-Laplacian on planar domains", "pseudofrac"};
  app.set_help_flag("--help", "Print the full grammar and exit");
  app.footer(
      "Commands:\n"
      "  eig        lambda_1(s,p) and its eigenfunction (--local: local limit problem)\n"
      "  sweep-p    p-sweep at fixed s against Lambda_inf(s)\n"
      "  sweep-s    s-sweep at fixed p against the local eigenvalue\n"
      "  geom       R_s and Lambda_inf(s)\n"
      "  diagram    four corners of the limit diagram at (s, p) = (--s, --p)\n"
      "  check      run a suite (inequalities | oracle)\n"
      "  viscosity  pointwise residual of the limit equation\n"
      "Domains: ball:R[:cx,cy]  rect:hx,hy[:cx,cy]  rectunion:hx,hy,cx,cy;...\n"
      "Exit codes: 0 ok, 1 check failed, 2 usage error, 3 no convergence.\n"
      "PSEUDOFRAC_THREADS caps the data-parallel width (0 = auto).");

  std::optional<std::string> command, domain, out, format, suite, config_path;
  std::optional<double> s, p, h, spacing, grad_tol;
  std::optional<std::vector<double>> p_list, s_list;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts, max_iters;
  bool local = false, no_timing = false;

  app.add_option("command", command, "One of the commands below");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--domain", domain, "Domain string");
  app.add_option("--s", s, "Fractional order in (0,1)");
  app.add_option("--p", p, "Exponent in (1,inf)");
  app.add_option("--p-list", p_list, "Ascending exponents for sweep-p")->delimiter(',');
  app.add_option("--s-list", s_list, "Ascending orders for sweep-s")->delimiter(',');
  app.add_option("--h", h, "Grid spacing (default diameter/24, geom diameter/240)");
  app.add_option("--boundary-spacing", spacing, "Spacing of boundary samples");
  app.add_option("--seed", seed, "Seed of the random starts and suites");
  app.add_option("--restarts", restarts, "Random restarts per solve");
  app.add_option("--grad-tol", grad_tol, "Stationarity tolerance");
  app.add_option("--max-iters", max_iters, "Iteration cap per solve");
  app.add_option("--out", out, "Output directory");
  app.add_option("--format", format, "csv or json");
  app.add_option("--suite", suite, "Suite for check");
  app.add_flag("--local", local, "eig: local problem with the limit constant");
  app.add_flag("--no-timing", no_timing, "Write wall_time_ms as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw HelpRequested{};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig c;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw UsageError("--config: cannot read " + *config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
    c = config_from_json(j);
  }
  if (command) c.command = *command;
  if (domain) c.domain = *domain;
  if (s) c.s = *s;
  if (p) c.p = *p;
  if (p_list) c.p_list = *p_list;
  if (s_list) c.s_list = *s_list;
  if (h) c.h = *h;
  if (spacing) c.boundary_spacing = *spacing;
  if (seed) c.seed = *seed;
  if (restarts) c.restarts = *restarts;
  if (grad_tol) c.grad_tol = *grad_tol;
  if (max_iters) c.max_iters = *max_iters;
  if (out) c.out = *out;
  if (format) c.format = parse_format(*format, "--format");
  if (suite) c.suite = *suite;
  if (local) c.local = true;
  if (no_timing) c.record_timing = false;
  validate(c);
  return c;
}

}  // namespace pseudofrac::cli
