#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pseudofrac/energy.hpp"
#include "pseudofrac/geometry.hpp"

namespace pseudofrac {

enum class DescentDirection {
  gradient,  // steepest descent with Barzilai-Borwein trial steps
  lbfgs,     // limited-memory BFGS on the normalized iterates
};

struct SolverConfig {
  DescentDirection direction = DescentDirection::lbfgs;
  int lbfgs_memory = 8;
  int max_iters = 20000;
  double grad_tol = 1e-8;
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  int restarts = 1;
  std::uint64_t rng_seed = 0;
  /// Replaces the random start of restart 0 when set.
  std::optional<GridFunction> warm_start;
  /// Descend on the log quotient at or above this exponent.
  double log_domain_min_p = 32.0;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

struct EigenResult {
  double lambda = 0.0;
  GridFunction u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double log_lambda_over_p = 0.0;
  /// Final stationarity measure that the tolerance was tested against.
  double grad_norm = 0.0;
  bool log_domain = false;
  /// Objective after every accepted step is non-increasing up to rounding.
  bool monotone = true;
  std::vector<double> history;  // objective per accepted step
  int restart_index = 0;
};

/// Projected-gradient descent of sum_t w_t |du_t|^p / ||u||_p^p for an
/// arbitrary difference form. Returns one result per restart, in restart order.
std::vector<EigenResult> solve_restarts(const DifferenceForm& form, const SolverConfig& config);

/// Lowest-quotient result over all restarts (first on ties).
EigenResult minimize_form(const DifferenceForm& form, const SolverConfig& config);

EigenResult minimize_rayleigh(std::shared_ptr<const Grid> grid, const FracParams& params,
                              const SolverConfig& config);
std::vector<EigenResult> minimize_rayleigh_all(std::shared_ptr<const Grid> grid,
                                               const FracParams& params,
                                               const SolverConfig& config);

/// max_i |form(u, e_i) - lambda (u_i)^{p-1} h_x h_y|.
double weak_residual(const DifferenceForm& form, const GridFunction& u, double lambda);
double weak_residual(const GridFunction& u, double lambda, const FracParams& params);

struct DenseOracleResult {
  double lambda = 0.0;
  GridFunction u;
  int iterations = 0;
};

inline constexpr std::size_t kDenseNodeCap = 2500;

/// Row-major matrix A[i][k] = form_H(e_i, e_k) at p = 2. Throws TooLarge.
std::vector<double> assemble_p2_matrix(const Grid& grid, double s,
                                       KernelRule rule = KernelRule::self_cell);
/// Same matrix built from any p = 2 difference form.
std::vector<double> assemble_p2_matrix(const DifferenceForm& form);

/// Smallest eigenvalue of (A, h_x h_y I) by inverse power iteration from the
/// all-ones vector. The eigenvector is normalized in L^2 and sign-normalized.
DenseOracleResult dense_p2_oracle(std::shared_ptr<const Grid> grid, double s,
                                  KernelRule rule = KernelRule::self_cell);
DenseOracleResult dense_p2_oracle(const DifferenceForm& form);

struct SimplicityReport {
  bool pass = false;
  double lambda_spread = 0.0;  // (max - min) / min
  double u_spread = 0.0;       // largest sup-norm distance to the first result
  std::vector<std::string> failures;
};

SimplicityReport check_simplicity(const std::vector<EigenResult>& results,
                                  double rel_tol_lambda, double tol_u);

struct PositivityReport {
  bool pass = false;
  double min_value = 0.0;  // after sign normalization
  std::size_t non_positive = 0;
};

PositivityReport check_positivity(const GridFunction& u);

}  // namespace pseudofrac
