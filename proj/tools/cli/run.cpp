#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "pseudofrac/analysis.hpp"
#include "pseudofrac/eigensolver.hpp"
#include "pseudofrac/errors.hpp"
#include "pseudofrac/geometry.hpp"
#include "pseudofrac/harness.hpp"
#include "pseudofrac/io.hpp"
#include "pseudofrac/local_limit.hpp"

namespace pseudofrac::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kOracleRelTol = 1e-6;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Context {
  const RunConfig& cfg;
  DomainSpec domain;
  std::shared_ptr<const Grid> grid;
  SolverConfig solver;
  fs::path dir;
  json summary;
};

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig s;
  s.rng_seed = c.seed;
  s.restarts = c.restarts;
  s.grad_tol = c.grad_tol;
  s.max_iters = c.max_iters;
  return s;
}

// geom is O(nodes), so it gets a finer default lattice than the solvers.
std::shared_ptr<const Grid> make_grid(const RunConfig& c, const DomainSpec& domain) {
  const double cells = c.command == "geom" ? 240.0 : 24.0;
  const double h = c.h.value_or(domain.diameter() / cells);
  return std::make_shared<const Grid>(build_grid(domain, h, c.boundary_spacing));
}

std::string write(Context& ctx, const std::string& name, const std::string& content) {
  const fs::path path = ctx.dir / name;
  write_atomic(path, content);
  return path.string();
}

std::string write_function(Context& ctx, const std::string& stem, const GridFunction& u) {
  if (ctx.cfg.format == Format::json) return write(ctx, stem + ".json", grid_function_json(u));
  return write(ctx, stem + ".csv", grid_function_csv(u));
}

std::string write_rows(Context& ctx, const std::string& stem, const std::vector<SweepRecord>& rows) {
  if (ctx.cfg.format == Format::csv) return write(ctx, stem + ".csv", sweep_csv(rows));
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"s", r.s},
                   {"p", r.p},
                   {"lambda", number(r.lambda)},
                   {"lambda_scaled", number(r.lambda_scaled)},
                   {"reference", number(r.reference)},
                   {"gap", number(r.gap)},
                   {"grid_h", r.grid_h},
                   {"converged", r.converged},
                   {"wall_time_ms", r.wall_time_ms}});
  }
  return write(ctx, stem + ".json", arr.dump(2) + "\n");
}

int cmd_eig(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.local) {
    const BBMConstant k = bbm_constant(1, c.p);
    const LocalEigenResult r = minimize_local_rayleigh(ctx.grid, c.p, k.value, k.value, ctx.solver);
    const std::string u_path = write_function(ctx, "eig_local_u", r.u);
    const std::string path = write(ctx, "eig_local.json", eigen_result_json(r, u_path));
    ctx.summary["kind"] = "local";
    ctx.summary["lambda"] = number(r.lambda_local);
    ctx.summary["bbm_constant"] = k.value;
    ctx.summary["converged"] = r.converged;
    ctx.summary["iterations"] = r.iterations;
    ctx.summary["artifact"] = path;
    return r.converged ? kOk : kNotConverged;
  }
  const EigenResult r = minimize_rayleigh(ctx.grid, FracParams(c.s, c.p), ctx.solver);
  const std::string u_path = write_function(ctx, "eig_u", r.u);
  const std::string path = write(ctx, "eig.json", eigen_result_json(r, u_path));
  ctx.summary["lambda"] = number(r.lambda);
  ctx.summary["log_lambda_over_p"] = number(r.log_lambda_over_p);
  ctx.summary["converged"] = r.converged;
  ctx.summary["iterations"] = r.iterations;
  ctx.summary["residual"] = number(r.residual);
  ctx.summary["artifact"] = path;
  return r.converged ? kOk : kNotConverged;
}

int sweep_exit(const std::vector<SweepRecord>& rows, std::ostream& diag) {
  int code = kOk;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      diag << "row s=" << r.s << " p=" << r.p << " failed: " << r.error << "\n";
      code = kNotConverged;
    } else if (!r.converged) {
      diag << "row s=" << r.s << " p=" << r.p << " did not converge\n";
      code = kNotConverged;
    }
  }
  return code;
}

int cmd_sweep_p(Context& ctx, std::ostream& diag) {
  const SweepOptions opts{true, ctx.cfg.record_timing};
  const SweepResult r = sweep_p(ctx.domain, ctx.cfg.s, ctx.cfg.p_list, ctx.grid, ctx.solver, opts);
  ctx.summary["artifact"] = write_rows(ctx, "sweep_p", r.rows);
  ctx.summary["rows"] = r.rows.size();
  ctx.summary["reference"] = number(r.rows.front().reference);
  ctx.summary["final_gap"] = number(r.rows.back().gap);
  ctx.summary["holder_seminorm"] = number(r.last_holder);
  return sweep_exit(r.rows, diag);
}

int cmd_sweep_s(Context& ctx, std::ostream& diag) {
  const SweepOptions opts{true, ctx.cfg.record_timing};
  const SweepResult r = sweep_s(ctx.domain, ctx.cfg.p, ctx.cfg.s_list, ctx.grid, ctx.solver, opts);
  ctx.summary["artifact"] = write_rows(ctx, "sweep_s", r.rows);
  ctx.summary["rows"] = r.rows.size();
  ctx.summary["local_lambda"] = number(r.local_lambda);
  ctx.summary["bbm_constant"] = r.bbm.value;
  ctx.summary["bbm_provenance"] = std::string(to_string(r.bbm.provenance));
  ctx.summary["final_gap"] = number(r.rows.back().gap);
  return sweep_exit(r.rows, diag);
}

int cmd_geom(Context& ctx) {
  const GeoResult g = compute_Rs(ctx.domain, ctx.cfg.s, *ctx.grid);
  json j;
  j["domain"] = format_domain(ctx.domain);
  j["s"] = ctx.cfg.s;
  j["R_s"] = g.R_s;
  j["lambda_infinity"] = 1.0 / g.R_s;
  j["argmax"] = {g.argmax_point.x, g.argmax_point.y};
  j["nodes"] = ctx.grid->size();
  ctx.summary["R_s"] = g.R_s;
  ctx.summary["lambda_infinity"] = 1.0 / g.R_s;
  ctx.summary["argmax"] = j["argmax"];
  ctx.summary["artifact"] = write(ctx, "geom.json", j.dump(2) + "\n");
  return kOk;
}

int cmd_diagram(Context& ctx, std::ostream& diag) {
  const DiagramReport d = diagram_check(ctx.domain, ctx.grid, ctx.cfg.s, ctx.cfg.p, ctx.solver);
  ctx.summary["artifact"] = write(ctx, "diagram.json", diagram_json(d));
  ctx.summary["corner_sp"] = number(d.corner_sp);
  ctx.summary["corner_1p"] = number(d.corner_1p);
  ctx.summary["corner_sinf"] = number(d.corner_sinf);
  ctx.summary["corner_inf"] = number(d.corner_inf);
  ctx.summary["well_formed"] = d.well_formed();
  if (!d.well_formed()) {
    diag << "diagram report is not well formed\n";
    return kCheckFailed;
  }
  if (!d.nonlocal_converged || !d.local_converged) {
    diag << "a corner solve did not converge\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_check(Context& ctx, std::ostream& diag) {
  std::vector<CheckRecord> records;
  if (ctx.cfg.suite == "inequalities") {
    records = inequality_suite(ctx.cfg.seed);
  } else {
    // p = 2 solver against the dense oracle on the configured grid.
    const DenseOracleResult oracle = dense_p2_oracle(ctx.grid, ctx.cfg.s);
    const EigenResult r = minimize_rayleigh(ctx.grid, FracParams(ctx.cfg.s, 2.0), ctx.solver);
    const double rel = std::abs(r.lambda - oracle.lambda) / oracle.lambda;
    CheckRecord rec;
    rec.check_name = "oracle_lambda";
    rec.param_summary = "s=" + format_number(ctx.cfg.s) + ";p=2";
    rec.margin = {rel, kOracleRelTol, kOracleRelTol - rel};
    rec.pass = rel <= kOracleRelTol;
    records.push_back(rec);
    ctx.summary["lambda"] = r.lambda;
    ctx.summary["oracle_lambda"] = oracle.lambda;
    if (!r.converged) diag << "solver did not converge\n";
  }
  const std::size_t failed =
      std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; });
  std::string path;
  if (ctx.cfg.format == Format::csv) {
    path = write(ctx, "checks.csv", checks_csv(records));
  } else {
    json arr = json::array();
    for (const auto& r : records) {
      arr.push_back({{"check_name", r.check_name},
                     {"param_summary", r.param_summary},
                     {"margin", number(r.margin.margin)},
                     {"pass", r.pass}});
    }
    path = write(ctx, "checks.json", arr.dump(2) + "\n");
  }
  ctx.summary["suite"] = ctx.cfg.suite;
  ctx.summary["records"] = records.size();
  ctx.summary["failed"] = failed;
  ctx.summary["artifact"] = path;
  if (failed > 0) {
    diag << failed << " of " << records.size() << " checks failed\n";
    return kCheckFailed;
  }
  return kOk;
}

int cmd_viscosity(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const EigenResult r = minimize_rayleigh_ladder(ctx.grid, FracParams(c.s, c.p), ctx.solver);
  const double sup = linf_norm(r.u);
  const double lam = lambda_infinity(ctx.domain, c.s, *ctx.grid);
  const ViscosityReport v = viscosity_diagnostic(r.u.scaled(1.0 / sup), lam, c.s);
  std::string path;
  if (c.format == Format::csv) {
    path = write(ctx, "viscosity.csv", viscosity_csv(v));
  } else {
    json arr = json::array();
    for (const auto& row : v.rows) {
      arr.push_back({{"ix", row.ix}, {"iy", row.iy}, {"A", row.q.A}, {"B", row.q.B},
                     {"C", row.q.C}, {"D", row.q.D}, {"residual", row.residual}});
    }
    path = write(ctx, "viscosity.json", arr.dump(2) + "\n");
  }
  ctx.summary["lambda_infinity"] = lam;
  ctx.summary["median"] = v.median;
  ctx.summary["p90"] = v.p90;
  ctx.summary["max"] = v.max;
  ctx.summary["mean"] = v.mean;
  ctx.summary["converged"] = r.converged;
  ctx.summary["artifact"] = path;
  return r.converged ? kOk : kNotConverged;
}

}  // namespace

int run(const RunConfig& config, std::ostream& summary, std::ostream& diag) {
  json line;
  line["command"] = config.command;
  int code = kOk;
  try {
    validate(config);
    Context ctx{config, parse_domain(config.domain), nullptr, solver_config(config),
                fs::path(config.out), json::object()};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec || !fs::is_directory(ctx.dir)) throw UsageError("--out: cannot create " + config.out);
    ctx.grid = make_grid(config, ctx.domain);
    ctx.summary["nodes"] = ctx.grid->size();
    if (config.command == "eig") code = cmd_eig(ctx);
    else if (config.command == "sweep-p") code = cmd_sweep_p(ctx, diag);
    else if (config.command == "sweep-s") code = cmd_sweep_s(ctx, diag);
    else if (config.command == "geom") code = cmd_geom(ctx);
    else if (config.command == "diagram") code = cmd_diagram(ctx, diag);
    else if (config.command == "check") code = cmd_check(ctx, diag);
    else code = cmd_viscosity(ctx);
    line.update(ctx.summary);
  } catch (const UsageError& e) {
    diag << "usage error: " << e.what() << "\n";
    line["error"] = e.what();
    code = kUsage;
  } catch (const Error& e) {
    diag << e.what() << "\n";
    line["error"] = e.what();
    line["error_kind"] = std::string(to_string(e.kind()));
    code = kUsage;
  }
  line["exit_code"] = code;
  summary << line.dump() << "\n";
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& summary, std::ostream& diag) {
  RunConfig config;
  try {
    config = parse_config(argc, argv);
  } catch (const HelpRequested&) {
    return kOk;
  } catch (const UsageError& e) {
    diag << "usage error: " << e.what() << "\n";
    summary << json{{"error", e.what()}, {"exit_code", static_cast<int>(kUsage)}}.dump() << "\n";
    return kUsage;
  }
  return run(config, summary, diag);
}

}  // namespace pseudofrac::cli
