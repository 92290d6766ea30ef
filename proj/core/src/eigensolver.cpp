#include "pseudofrac/eigensolver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "pseudofrac/errors.hpp"
#include "pseudofrac/numeric.hpp"
#include "pseudofrac/parallel.hpp"

namespace pseudofrac {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxBacktracks = 60;
constexpr int kStallLimit = 200;

// Rayleigh quotient R(u) = E(u) / M(u) with M = sum |u_i|^p * area, or its
// scaled logarithm (log R) / p when p is large. Gradients are Euclidean.
class Objective {
 public:
  Objective(const DifferenceForm& form, bool log_mode)
      : form_(form),
        p_(form.p()),
        area_(form.grid().cell_area()),
        log_mode_(log_mode),
        pp_(form.p()),
        pm1_(form.p() - 1.0),
        scratch_(form.grid().size()) {}

  bool log_mode() const { return log_mode_; }
  double area() const { return area_; }

  double value(std::span<const double> u) const {
    if (log_mode_) {
      const double log_mass = log_lp_mass(u, p_, area_);
      if (log_mass == -std::numeric_limits<double>::infinity()) return kInf;
      return (form_.log_energy(u) - log_mass) / p_;
    }
    const double mass = direct_mass(u);
    if (!(mass > 0.0)) return kInf;
    return form_.energy(u) / mass;
  }

  double value_and_gradient(std::span<const double> u, std::span<double> g) {
    if (log_mode_) {
      const double log_energy = form_.log_energy_and_gradient(u, scratch_);
      double umax = 0.0;
      for (double v : u) umax = std::max(umax, std::abs(v));
      CompensatedSum acc;
      for (double v : u) acc.add(pp_.abs_pow(v / umax));
      const double scaled = acc.value();
      const double log_mass = p_ * std::log(umax) + std::log(scaled) + std::log(area_);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double mass_term = p_ * pm1_.signed_pow(u[i] / umax) / (umax * scaled);
        g[i] = (scratch_[i] - mass_term) / p_;
      }
      return (log_energy - log_mass) / p_;
    }
    const double energy = form_.energy_and_gradient(u, scratch_);
    const double mass = direct_mass(u);
    const double f = energy / mass;
    for (std::size_t i = 0; i < u.size(); ++i) {
      g[i] = (scratch_[i] - f * p_ * pm1_.signed_pow(u[i]) * area_) / mass;
    }
    return f;
  }

  /// ||grad R||_{L^2} / max(1, R) at a normalized point.
  double stationarity(double f, std::span<const double> g) const {
    CompensatedSum acc;
    for (double v : g) acc.add(v * v);
    const double norm = std::sqrt(acc.value() / area_);
    if (!log_mode_) return norm / std::max(1.0, f);
    // grad R = p R grad((log R) / p).
    const double log_r = p_ * f;
    return p_ * norm * (log_r >= 0.0 ? 1.0 : std::exp(log_r));
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double direct_mass(std::span<const double> u) const {
    CompensatedSum acc;
    for (double v : u) acc.add(pp_.abs_pow(v));
    return acc.value() * area_;
  }

  const DifferenceForm& form_;
  double p_;
  double area_;
  bool log_mode_;
  PowerLaw pp_;
  PowerLaw pm1_;
  std::vector<double> scratch_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return acc.value();
}

void axpy(double c, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

void normalize_in_place(std::vector<double>& u, double p, double area) {
  const double norm = lp_norm(u, p, area);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::zero_function, "cannot normalize the zero function");
  }
  for (auto& v : u) v /= norm;
}

std::vector<double> initial_values(const DifferenceForm& form, const SolverConfig& config,
                                   int restart) {
  const std::size_t n = form.grid().size();
  if (restart == 0 && config.warm_start) {
    const GridFunction& w = *config.warm_start;
    form.check_grid(w);
    std::vector<double> v(w.values().begin(), w.values().end());
    if (lp_norm(v, 2.0, 1.0) > 0.0) return v;
  }
  std::mt19937_64 rng(config.rng_seed + static_cast<std::uint64_t>(restart));
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

EigenResult descend(const DifferenceForm& form, const SolverConfig& config, int restart) {
  const bool log_mode = form.p() >= config.log_domain_min_p;
  Objective objective(form, log_mode);
  const double p = form.p();
  const double area = objective.area();
  const std::size_t n = form.grid().size();

  std::vector<double> u = initial_values(form, config, restart);
  normalize_in_place(u, p, area);
  std::vector<double> g(n), g_new(n), trial(n), dir(n);
  double f = objective.value_and_gradient(u, g);

  EigenResult result;
  result.log_domain = log_mode;
  result.restart_index = restart;
  result.history.push_back(f);

  const bool lbfgs = config.direction == DescentDirection::lbfgs;
  const std::size_t memory = static_cast<std::size_t>(config.lbfgs_memory);
  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> pairs;
  std::vector<double> alpha;

  double step = config.step_init;
  int stall = 0;
  int it = 0;
  double measure = objective.stationarity(f, g);
  for (; it < config.max_iters; ++it) {
    if (measure <= config.grad_tol) {
      result.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i] / area;
    if (lbfgs && !pairs.empty()) {
      // Two-loop recursion, newest pair first.
      alpha.assign(pairs.size(), 0.0);
      for (std::size_t k = pairs.size(); k-- > 0;) {
        alpha[k] = pairs[k].rho * dot(pairs[k].s, dir);
        axpy(-alpha[k], pairs[k].y, dir);
      }
      const Pair& last = pairs.back();
      const double gamma = 1.0 / (last.rho * dot(last.y, last.y));
      for (auto& v : dir) v *= gamma;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double beta = pairs[k].rho * dot(pairs[k].y, dir);
        axpy(alpha[k] - beta, pairs[k].s, dir);
      }
      step = 1.0;
    }
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      pairs.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i] / area;
      slope = dot(g, dir);
    }
    const double slack = 8.0 * kEps * std::abs(f);

    bool accepted = false;
    double f_trial = 0.0;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * dir[i];
      f_trial = objective.value(trial);
      const double predicted = config.armijo_c * step * slope;
      if (f_trial <= f + predicted || (-predicted <= slack && f_trial <= f + slack)) {
        accepted = true;
        break;
      }
      step *= config.armijo_shrink;
    }
    if (!accepted) {
      if (pairs.empty()) break;
      pairs.clear();  // retry once along the plain gradient
      step = config.step_init;
      continue;
    }

    normalize_in_place(trial, p, area);
    const double f_new = objective.value_and_gradient(trial, g_new);
    if (f_new > f + slack) result.monotone = false;

    CompensatedSum ss;
    CompensatedSum sy;
    CompensatedSum yy;
    for (std::size_t i = 0; i < n; ++i) {
      const double ds = trial[i] - u[i];
      const double dy = (g_new[i] - g[i]) / area;
      ss.add(ds * ds);
      sy.add(ds * dy);
      yy.add(dy * dy);
    }
    if (lbfgs) {
      if (sy.value() > 1e-10 * std::sqrt(ss.value() * yy.value()) && sy.value() > 0.0) {
        Pair pair{std::vector<double>(n), std::vector<double>(n), 1.0 / sy.value()};
        for (std::size_t i = 0; i < n; ++i) {
          pair.s[i] = trial[i] - u[i];
          pair.y[i] = (g_new[i] - g[i]) / area;
        }
        pairs.push_back(std::move(pair));
        if (pairs.size() > memory) pairs.pop_front();
      }
    } else if (sy.value() > 0.0 && std::isfinite(ss.value() / sy.value())) {
      // Barzilai-Borwein trial step for the next iteration.
      step = std::clamp(ss.value() / sy.value(), 1e-20, 1e20);
    } else {
      step = std::min(step / config.armijo_shrink, 1e20);
    }

    stall = (f - f_new <= 4.0 * kEps * std::abs(f)) ? stall + 1 : 0;
    u.swap(trial);
    g.swap(g_new);
    f = f_new;
    result.history.push_back(f);
    measure = objective.stationarity(f, g);
    if (stall >= kStallLimit) {
      result.converged = measure <= config.grad_tol;
      ++it;
      break;
    }
  }
  if (it == config.max_iters && measure <= config.grad_tol) result.converged = true;

  GridFunction uf(form.grid_ptr(), std::move(u));
  uf = uf.sign_normalized();
  normalize_in_place(uf.values_mut(), p, area);
  result.iterations = it;
  result.grad_norm = measure;
  result.log_lambda_over_p =
      (form.log_energy(uf.values()) - log_lp_mass(uf.values(), p, area)) / p;
  if (log_mode) {
    result.lambda = std::exp(p * result.log_lambda_over_p);
  } else {
    Objective direct(form, false);
    result.lambda = direct.value(uf.values());
  }
  result.residual = weak_residual(form, uf, result.lambda);
  result.u = std::move(uf);
  return result;
}

std::vector<double> p2_matrix_from_form(const DifferenceForm& form) {
  const std::size_t n = form.grid().size();
  if (n > kDenseNodeCap) {
    throw Error(ErrorKind::too_large, "dense assembly needs at most " +
                                          std::to_string(kDenseNodeCap) + " nodes, got " +
                                          std::to_string(n));
  }
  if (form.p() != 2.0) throw Error(ErrorKind::invalid_argument, "dense assembly needs p = 2");
  std::vector<double> a(n * n, 0.0);
  for (const auto& term : form.terms()) {
    a[term.a * n + term.a] += term.weight;
    if (term.b == DifferenceForm::kExterior) continue;
    a[term.b * n + term.b] += term.weight;
    a[term.a * n + term.b] -= term.weight;
    a[term.b * n + term.a] -= term.weight;
  }
  return a;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iters < 1) throw Error(ErrorKind::invalid_argument, "max_iters must be at least 1");
  if (!(grad_tol >= 0.0)) throw Error(ErrorKind::invalid_argument, "grad_tol must be non-negative");
  if (!(step_init > 0.0)) throw Error(ErrorKind::invalid_argument, "step_init must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "armijo_c must lie in (0,1)");
  }
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "armijo_shrink must lie in (0,1)");
  }
  if (lbfgs_memory < 1) throw Error(ErrorKind::invalid_argument, "lbfgs_memory must be at least 1");
  if (restarts < 1) throw Error(ErrorKind::invalid_argument, "restarts must be at least 1");
}

std::vector<EigenResult> solve_restarts(const DifferenceForm& form, const SolverConfig& config) {
  config.validate();
  if (form.grid().size() == 0) throw Error(ErrorKind::empty_grid, "grid has no nodes");
  std::vector<EigenResult> results(static_cast<std::size_t>(config.restarts));
  parallel_for(
      results.size(),
      [&](std::size_t r) { results[r] = descend(form, config, static_cast<int>(r)); }, 1);
  return results;
}

EigenResult minimize_form(const DifferenceForm& form, const SolverConfig& config) {
  auto results = solve_restarts(form, config);
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].log_lambda_over_p < results[best].log_lambda_over_p) best = r;
  }
  return std::move(results[best]);
}

EigenResult minimize_rayleigh(std::shared_ptr<const Grid> grid, const FracParams& params,
                              const SolverConfig& config) {
  const EnergyModel model(std::move(grid), params);
  return minimize_form(model.form(), config);
}

std::vector<EigenResult> minimize_rayleigh_all(std::shared_ptr<const Grid> grid,
                                               const FracParams& params,
                                               const SolverConfig& config) {
  const EnergyModel model(std::move(grid), params);
  return solve_restarts(model.form(), config);
}

double weak_residual(const DifferenceForm& form, const GridFunction& u, double lambda) {
  form.check_grid(u);
  const PowerLaw pm1(form.p() - 1.0);
  const double area = form.grid().cell_area();
  const auto c = form.first_variation(u.values());
  double worst = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    worst = std::max(worst, std::abs(c[i] - lambda * pm1.signed_pow(u[i]) * area));
  }
  return worst;
}

double weak_residual(const GridFunction& u, double lambda, const FracParams& params) {
  const EnergyModel model(u.grid_ptr(), params);
  return weak_residual(model.form(), u, lambda);
}

std::vector<double> assemble_p2_matrix(const Grid& grid, double s, KernelRule rule) {
  if (grid.size() > kDenseNodeCap) {
    throw Error(ErrorKind::too_large, "dense assembly needs at most " +
                                          std::to_string(kDenseNodeCap) + " nodes");
  }
  const EnergyModel model(std::make_shared<const Grid>(grid), FracParams(s, 2.0, rule));
  return p2_matrix_from_form(model.form());
}

std::vector<double> assemble_p2_matrix(const DifferenceForm& form) { return p2_matrix_from_form(form); }

DenseOracleResult dense_p2_oracle(std::shared_ptr<const Grid> grid, double s, KernelRule rule) {
  if (grid->size() > kDenseNodeCap) {
    throw Error(ErrorKind::too_large, "dense oracle needs at most " +
                                          std::to_string(kDenseNodeCap) + " nodes");
  }
  const EnergyModel model(std::move(grid), FracParams(s, 2.0, rule));
  return dense_p2_oracle(model.form());
}

DenseOracleResult dense_p2_oracle(const DifferenceForm& form) {
  const std::size_t n = form.grid().size();
  const auto entries = p2_matrix_from_form(form);
  const double area = form.grid().cell_area();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) a(i, k) = entries[i * n + k];
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_argument, "p = 2 matrix is not positive definite");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  x.normalize();
  double lambda = x.dot(a * x) / area;
  int it = 0;
  for (; it < 100000; ++it) {
    Eigen::VectorXd y = llt.solve(x);
    y.normalize();
    const double next = y.dot(a * y) / area;
    const double change = (y - x).norm();
    x = std::move(y);
    const bool settled = std::abs(next - lambda) <= 1e-15 * next && change <= 1e-13;
    lambda = next;
    if (settled) break;
  }
  std::vector<double> v(x.data(), x.data() + n);
  GridFunction u(form.grid_ptr(), std::move(v));
  u = u.sign_normalized();
  normalize_in_place(u.values_mut(), 2.0, area);
  return {lambda, std::move(u), it + 1};
}

SimplicityReport check_simplicity(const std::vector<EigenResult>& results, double rel_tol_lambda,
                                  double tol_u) {
  SimplicityReport report;
  if (results.size() < 2) {
    report.failures.push_back("need at least two results");
    return report;
  }
  double lo = results.front().lambda;
  double hi = lo;
  const GridFunction first = results.front().u.sign_normalized();
  for (std::size_t r = 0; r < results.size(); ++r) {
    const EigenResult& res = results[r];
    if (!res.converged) report.failures.push_back("result " + std::to_string(r) + " did not converge");
    if (!res.u.grid().same_layout(first.grid())) {
      report.failures.push_back("result " + std::to_string(r) + " lives on another grid");
      continue;
    }
    lo = std::min(lo, res.lambda);
    hi = std::max(hi, res.lambda);
    const GridFunction un = res.u.sign_normalized();
    double diff = 0.0;
    for (std::size_t i = 0; i < un.size(); ++i) diff = std::max(diff, std::abs(un[i] - first[i]));
    report.u_spread = std::max(report.u_spread, diff);
  }
  report.lambda_spread = (hi - lo) / lo;
  if (report.lambda_spread > rel_tol_lambda) report.failures.push_back("eigenvalue spread too large");
  if (report.u_spread > tol_u) report.failures.push_back("eigenfunctions disagree");
  report.pass = report.failures.empty();
  return report;
}

PositivityReport check_positivity(const GridFunction& u) {
  PositivityReport report;
  const GridFunction un = u.sign_normalized();
  report.min_value = std::numeric_limits<double>::infinity();
  for (double v : un.values()) {
    report.min_value = std::min(report.min_value, v);
    if (!(v > 0.0)) ++report.non_positive;
  }
  report.pass = un.size() > 0 && report.non_positive == 0;
  return report;
}

}  // namespace pseudofrac
