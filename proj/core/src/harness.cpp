#include "pseudofrac/harness.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "pseudofrac/errors.hpp"

namespace pseudofrac {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

void require_ascending(const std::vector<double>& values, const char* what) {
  if (values.empty()) throw Error(ErrorKind::invalid_argument, std::string(what) + " is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw Error(ErrorKind::invalid_argument, std::string(what) + " must be strictly ascending");
    }
  }
}

SweepRecord failed_row(double s, double p, double h, double reference, const std::string& why) {
  SweepRecord row;
  row.s = s;
  row.p = p;
  row.grid_h = h;
  row.reference = reference;
  row.lambda = std::numeric_limits<double>::quiet_NaN();
  row.lambda_scaled = row.lambda;
  row.gap = row.lambda;
  row.error = why;
  return row;
}

void check_domain(const DomainSpec& domain, const Grid& grid) {
  if (!(grid.domain == domain)) throw Error(ErrorKind::grid_mismatch, "grid was built for another domain");
}

double grid_h(const Grid& grid) { return std::max(grid.hx, grid.hy); }

}  // namespace

SweepResult sweep_p(const DomainSpec& domain, double s, const std::vector<double>& p_list,
                    std::shared_ptr<const Grid> grid, const SolverConfig& config,
                    const SweepOptions& options) {
  check_domain(domain, *grid);
  require_ascending(p_list, "p_list");
  for (double p : p_list) {
    if (!(p > 1.0)) throw Error(ErrorKind::invalid_argument, "every p must exceed 1");
  }
  SweepResult out;
  const double reference = lambda_infinity(domain, s, *grid);
  SolverConfig cfg = config;
  for (double p : p_list) {
    const auto start = Clock::now();
    try {
      const EigenResult r = minimize_rayleigh(grid, FracParams(s, p), cfg);
      SweepRecord row;
      row.s = s;
      row.p = p;
      row.lambda = r.lambda;
      row.log_lambda_over_p = r.log_lambda_over_p;
      row.lambda_scaled = std::exp(r.log_lambda_over_p);
      row.reference = reference;
      row.gap = std::abs(row.lambda_scaled - reference);
      row.grid_h = grid_h(*grid);
      row.converged = r.converged;
      row.iterations = r.iterations;
      row.residual = r.residual;
      row.wall_time_ms = options.record_timing ? elapsed_ms(start) : 0;
      out.rows.push_back(row);
      out.last_u = r.u;
      if (options.warm_start) cfg.warm_start = r.u;
    } catch (const Error& e) {
      out.rows.push_back(failed_row(s, p, grid_h(*grid), reference, e.what()));
    }
  }
  if (out.last_u.size() > 0) {
    const double sup = linf_norm(out.last_u);
    if (sup > 0.0) out.last_holder = seminorm_infty(out.last_u.scaled(1.0 / sup), s);
  }
  return out;
}

SweepResult sweep_s(const DomainSpec& domain, double p, const std::vector<double>& s_list,
                    std::shared_ptr<const Grid> grid, const SolverConfig& config,
                    const SweepOptions& options) {
  check_domain(domain, *grid);
  require_ascending(s_list, "s_list");
  for (double s : s_list) {
    if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::invalid_argument, "every s must lie in (0,1)");
  }
  SweepResult out;
  out.bbm = bbm_constant(1, p);
  SolverConfig local_cfg = config;
  local_cfg.warm_start.reset();
  const LocalEigenResult local =
      minimize_local_rayleigh(grid, p, out.bbm.value, out.bbm.value, local_cfg);
  out.local_lambda = local.lambda_local;
  SolverConfig cfg = config;
  for (double s : s_list) {
    const auto start = Clock::now();
    try {
      const EigenResult r = minimize_rayleigh(grid, FracParams(s, p), cfg);
      SweepRecord row;
      row.s = s;
      row.p = p;
      row.lambda = r.lambda;
      row.log_lambda_over_p = r.log_lambda_over_p;
      row.lambda_scaled = (1.0 - s) * r.lambda;
      row.reference = local.lambda_local;
      row.gap = std::abs(row.lambda_scaled - row.reference);
      row.grid_h = grid_h(*grid);
      row.converged = r.converged;
      row.iterations = r.iterations;
      row.residual = r.residual;
      row.wall_time_ms = options.record_timing ? elapsed_ms(start) : 0;
      out.rows.push_back(row);
      out.last_u = r.u;
      if (options.warm_start) cfg.warm_start = r.u;
    } catch (const Error& e) {
      out.rows.push_back(failed_row(s, p, grid_h(*grid), local.lambda_local, e.what()));
    }
  }
  return out;
}

namespace {

std::vector<double> ladder_to(double p) {
  std::vector<double> out;
  for (double q = 2.0; q < p; q *= 2.0) out.push_back(q);
  out.push_back(p);
  return out;
}

}  // namespace

EigenResult minimize_rayleigh_ladder(std::shared_ptr<const Grid> grid, const FracParams& params,
                                     const SolverConfig& config) {
  SolverConfig cfg = config;
  EigenResult r;
  for (double p : ladder_to(params.p())) {
    r = minimize_rayleigh(grid, FracParams(params.s(), p, params.rule()), cfg);
    cfg.warm_start = r.u;
  }
  return r;
}

LocalEigenResult minimize_local_ladder(std::shared_ptr<const Grid> grid, double p, double k,
                                       const SolverConfig& config) {
  SolverConfig cfg = config;
  LocalEigenResult r;
  for (double q : ladder_to(p)) {
    // The constant only rescales the quotient below the last stage.
    const double kq = q == p ? k : 2.0 / q;
    r = minimize_local_rayleigh(grid, q, kq, kq, cfg);
    cfg.warm_start = r.u;
  }
  return r;
}

bool DiagramReport::well_formed() const {
  const double corners[4] = {corner_sp, corner_1p, corner_sinf, corner_inf};
  for (double c : corners) {
    if (!(std::isfinite(c) && c > 0.0)) return false;
  }
  if (edges.size() != 4) return false;
  for (const auto& e : edges) {
    if (!(std::isfinite(e.gap) && e.gap >= 0.0)) return false;
  }
  return true;
}

DiagramReport diagram_check(const DomainSpec& domain, std::shared_ptr<const Grid> grid,
                            double s_hi, double p_hi, const SolverConfig& config) {
  check_domain(domain, *grid);
  DiagramReport report;
  report.s_hi = s_hi;
  report.p_hi = p_hi;

  const EigenResult nonlocal = minimize_rayleigh_ladder(grid, FracParams(s_hi, p_hi), config);
  report.nonlocal_converged = nonlocal.converged;
  report.corner_sp = std::exp(std::log1p(-s_hi) / p_hi + nonlocal.log_lambda_over_p);

  report.bbm = bbm_constant(1, p_hi);
  const LocalEigenResult local = minimize_local_ladder(grid, p_hi, report.bbm.value, config);
  report.local_converged = local.converged;
  report.corner_1p = std::exp(local.log_lambda_over_p);

  report.corner_sinf = lambda_infinity(domain, s_hi, *grid);
  report.corner_inf = lambda_infinity(domain, 1.0, *grid);

  report.edges = {
      {"s_limit_at_p", "corner_sp", "corner_1p", std::abs(report.corner_sp - report.corner_1p)},
      {"p_limit_at_s", "corner_sp", "corner_sinf", std::abs(report.corner_sp - report.corner_sinf)},
      {"p_limit_local", "corner_1p", "corner_inf", std::abs(report.corner_1p - report.corner_inf)},
      {"geometric", "corner_sinf", "corner_inf", std::abs(report.corner_sinf - report.corner_inf)},
  };
  return report;
}

bool strictly_decreasing(const std::vector<double>& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) return false;
  }
  return true;
}

}  // namespace pseudofrac
