#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pseudofrac/eigensolver.hpp"
#include "pseudofrac/geometry.hpp"
#include "pseudofrac/local_limit.hpp"

namespace pseudofrac {

struct SweepRecord {
  double s = 0.0;
  double p = 0.0;
  double lambda = 0.0;
  double lambda_scaled = 0.0;  // (1-s) lambda for s-sweeps, lambda^{1/p} for p-sweeps
  double reference = 0.0;
  double gap = 0.0;
  double grid_h = 0.0;
  bool converged = false;
  std::int64_t wall_time_ms = 0;
  int iterations = 0;
  double residual = 0.0;
  double log_lambda_over_p = 0.0;
  std::string error;  // empty unless the row failed
};

struct SweepOptions {
  bool warm_start = true;
  /// When false, wall_time_ms is written as 0 so that output depends only on
  /// the inputs.
  bool record_timing = true;
};

struct SweepResult {
  std::vector<SweepRecord> rows;
  /// Eigenfunction of the last successful row, sign-normalized.
  GridFunction last_u;
  /// seminorm_infty of last_u rescaled to sup norm 1 (p-sweeps only).
  double last_holder = 0.0;
  /// s-sweeps: the constant and local eigenvalue behind the reference column.
  BBMConstant bbm;
  double local_lambda = 0.0;
};

/// Rows in the order of p_list, each warm-started from the previous
/// eigenfunction. Reference is Lambda_inf(s). Failed rows are kept with
/// converged = false.
SweepResult sweep_p(const DomainSpec& domain, double s, const std::vector<double>& p_list,
                    std::shared_ptr<const Grid> grid, const SolverConfig& config,
                    const SweepOptions& options = {});

/// Rows in the order of s_list. Reference is the local eigenvalue with
/// K = bbm_constant(1, p) in both directions.
SweepResult sweep_s(const DomainSpec& domain, double p, const std::vector<double>& s_list,
                    std::shared_ptr<const Grid> grid, const SolverConfig& config,
                    const SweepOptions& options = {});

/// Solves at p = 2, 4, 8, ... below params.p and then at params.p, each stage
/// warm-started from the previous one. Cold starts at large p tend to stall on
/// flat plateaus of the quotient; this avoids them.
EigenResult minimize_rayleigh_ladder(std::shared_ptr<const Grid> grid, const FracParams& params,
                                     const SolverConfig& config);

/// Local counterpart with Kx = Ky = k at the final stage.
LocalEigenResult minimize_local_ladder(std::shared_ptr<const Grid> grid, double p, double k,
                                       const SolverConfig& config);

struct DiagramEdge {
  std::string name;
  std::string from;
  std::string to;
  double gap = 0.0;
};

struct DiagramReport {
  double s_hi = 0.0;
  double p_hi = 0.0;
  double corner_sp = 0.0;    // ((1-s) lambda_1(s,p))^{1/p}
  double corner_1p = 0.0;    // lambda_1(1,p)^{1/p}
  double corner_sinf = 0.0;  // Lambda_inf(s)
  double corner_inf = 0.0;   // 1 / R_1
  std::vector<DiagramEdge> edges;
  bool nonlocal_converged = false;
  bool local_converged = false;
  BBMConstant bbm;

  bool well_formed() const;
};

DiagramReport diagram_check(const DomainSpec& domain, std::shared_ptr<const Grid> grid,
                            double s_hi, double p_hi, const SolverConfig& config);

/// Checks that values strictly decrease along the sequence.
bool strictly_decreasing(const std::vector<double>& values);

}  // namespace pseudofrac
