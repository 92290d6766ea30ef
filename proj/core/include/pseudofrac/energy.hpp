#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pseudofrac/geometry.hpp"

namespace pseudofrac {

/// How the singular kernel is integrated near the diagonal.
enum class KernelRule {
  /// Node-to-node midpoint rule over distinct same-fiber pairs only.
  midpoint,
  /// Midpoint rule plus the self-cell contribution |r| < h/2, evaluated from
  /// the nearest-neighbour difference quotient. Keeps (1-s) * energy bounded
  /// away from zero as s -> 1 on a fixed grid.
  self_cell,
};

class FracParams {
 public:
  /// Throws InvalidArgument unless 0 < s < 1 and 1 < p < inf.
  FracParams(double s, double p, KernelRule rule = KernelRule::self_cell);

  double s() const { return s_; }
  double p() const { return p_; }
  double sp() const { return sp_; }
  KernelRule rule() const { return rule_; }

 private:
  double s_;
  double p_;
  double sp_;
  KernelRule rule_;
};

/// Nodal values on a grid; zero everywhere off the interior nodes.
class GridFunction {
 public:
  /// Empty placeholder without a grid; only assignment is meaningful.
  GridFunction() = default;
  GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values);

  static GridFunction zeros(std::shared_ptr<const Grid> grid);
  static GridFunction constant(std::shared_ptr<const Grid> grid, double value);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::vector<double>& values_mut() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  GridFunction scaled(double c) const;
  /// Copy flipped so that the nodal sum is non-negative.
  GridFunction sign_normalized() const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

struct EnergyBreakdown {
  double x_part = 0.0;
  double y_part = 0.0;
  double total = 0.0;
  double log_total = 0.0;  // -inf for the zero function
};

enum class EnergyScope {
  whole_space,  // pairs, self-cell edges to the zero extension, exterior tails
  domain_only,  // pairs and interior edges only (seminorm restricted to the domain)
};

/// A functional of the form sum_t w_t |u_{a_t} - u_{b_t}|^p where b_t may be
/// the zero extension. Both the nonlocal seminorm and the local gradient
/// energy are instances; all evaluations visit terms in one fixed order.
class DifferenceForm {
 public:
  static constexpr std::uint32_t kExterior = 0xffffffffu;

  struct Term {
    std::uint32_t a;
    std::uint32_t b;     // kExterior: partner value is 0
    double weight;       // may be +inf when only the log path is usable
    double weight_root;  // weight^(1/p), always finite
  };

  struct Fiber {
    std::size_t begin;
    std::size_t interior_end;  // [begin, interior_end) are domain terms
    std::size_t end;
    bool along_x;
  };

  class Builder {
   public:
    Builder(std::shared_ptr<const Grid> grid, double p);
    void begin_fiber(bool along_x);
    /// Adds a term with weight exp(log_weight).
    void add(std::uint32_t a, std::uint32_t b, double log_weight);
    void mark_interior_end();
    DifferenceForm finish();

   private:
    std::shared_ptr<const Grid> grid_;
    double p_;
    std::vector<Term> terms_;
    std::vector<Fiber> fibers_;
  };

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  double p() const { return p_; }
  std::span<const Term> terms() const { return terms_; }
  std::span<const Fiber> fibers() const { return fibers_; }

  /// Throws GridMismatch when u does not live on this form's grid.
  void check_grid(const GridFunction& u) const;

  EnergyBreakdown evaluate(std::span<const double> u,
                           EnergyScope scope = EnergyScope::whole_space) const;
  /// Whole-space total only, single pass.
  double energy(std::span<const double> u) const;
  /// sum_t w_t (du_t)^{p-1} dv_t; equals evaluate(u).total bitwise when v = u.
  double form(std::span<const double> u, std::span<const double> v) const;
  /// c_i = form(u, e_i).
  std::vector<double> first_variation(std::span<const double> u) const;
  /// E(u); grad receives dE/du_i.
  double energy_and_gradient(std::span<const double> u, std::span<double> grad) const;
  /// log E(u) by max-factoring; safe for very large p.
  double log_energy(std::span<const double> u) const;
  /// log E(u); grad_over_energy receives (dE/du_i) / E.
  double log_energy_and_gradient(std::span<const double> u,
                                 std::span<double> grad_over_energy) const;

 private:
  DifferenceForm() = default;

  std::shared_ptr<const Grid> grid_;
  double p_ = 2.0;
  std::vector<Term> terms_;
  std::vector<Fiber> fibers_;
};

/// Discrete anisotropic seminorm for fixed (grid, s, p), with per-term weights
/// precomputed once.
class EnergyModel {
 public:
  EnergyModel(std::shared_ptr<const Grid> grid, FracParams params);

  const FracParams& params() const { return params_; }
  const Grid& grid() const { return form_.grid(); }
  const DifferenceForm& form() const { return form_; }

  /// Exterior kernel integral T(node) along x (resp. y): integral of
  /// |x - z|^{-(1+sp)} over the part of the node's line outside the domain.
  double tail_x(std::size_t node) const { return tail_x_[node]; }
  double tail_y(std::size_t node) const { return tail_y_[node]; }

  EnergyBreakdown seminorm(const GridFunction& u,
                           EnergyScope scope = EnergyScope::whole_space) const;
  double form_H(const GridFunction& u, const GridFunction& v) const;
  GridFunction apply_operator(const GridFunction& u) const;
  GridFunction energy_gradient(const GridFunction& u) const;
  double log_rayleigh(const GridFunction& u) const;

 private:
  FracParams params_;
  std::vector<double> tail_x_;
  std::vector<double> tail_y_;
  DifferenceForm form_;
};

/// log of the exterior kernel integral for a point t on a line whose
/// intersection with the domain is `slice`.
double log_exterior_tail(std::span<const Interval> slice, double t, double sp);

EnergyBreakdown seminorm_p(const GridFunction& u, const FracParams& params);
double form_H(const GridFunction& u, const GridFunction& v, const FracParams& params);
GridFunction apply_operator(const GridFunction& u, const FracParams& params);
GridFunction energy_gradient(const GridFunction& u, const FracParams& params);
/// (1/p) log([u]^p / ||u||_p^p) with max-factored sums. Throws ZeroFunction.
double log_rayleigh(const GridFunction& u, const FracParams& params);

/// Largest |du| / dist^s over same-fiber node pairs and node-to-slice-end
/// pairs (zero extension), both directions.
double seminorm_infty(const GridFunction& u, double s);

/// (sum |u_i|^p h_x h_y)^{1/p}, evaluated with max-factoring.
double lp_norm(const GridFunction& u, double p);
double lp_norm(std::span<const double> u, double p, double cell_area);
/// log sum |u_i|^p * cell_area.
double log_lp_mass(std::span<const double> u, double p, double cell_area);
double linf_norm(const GridFunction& u);

}  // namespace pseudofrac
