#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pseudofrac/energy.hpp"
#include "pseudofrac/geometry.hpp"

namespace pseudofrac {

struct SphereMeasure {
  int dim = 1;
  double omega = 2.0;
};

/// (n-1)-dimensional Hausdorff measure of the unit sphere in R^n; the sphere
/// in R^1 is two points, so omega(1) = 2.
SphereMeasure sphere_measure(int n);

/// Both sides of an inequality lhs <= rhs.
struct CheckMargin {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs

  /// margin >= -rel_slack * |rhs|.
  bool holds(double rel_slack = 1e-12) const;
};

/// [u]^p >= omega_n (2 diam)^{-sp} / (sp) ||u||_p^p. Throws ZeroFunction.
CheckMargin poincare_check(const GridFunction& u, const FracParams& params, const DomainSpec& domain);
double poincare_constant(const FracParams& params, const DomainSpec& domain);

/// [u]^p_{t,p} <= [u]^p_{s,p} + 2^p (omega_n + omega_m) / (tp) ||u||_p^p with
/// both seminorms restricted to the domain. Throws BadExponents unless t < s.
CheckMargin inclusion_check(const GridFunction& u, double t, double s, double p);

/// (1-s0) [u]^p_{s0,domain} / (2^{(1-s0)p} diam^{(s-s0)p}) <= (1-s) [u]^p_{s,whole}.
/// Throws BadExponents unless s0 < s.
CheckMargin scaled_monotonicity_check(const GridFunction& u, double s0, double s, double p,
                                      const DomainSpec& domain);

/// Isotropic sum over all node pairs of |du|^p / |P - Q|^{2+sp} (cell area)^2.
/// Throws TooLarge beyond 2500 nodes.
double isotropic_seminorm(const GridFunction& u, const FracParams& params);

/// |u|^p_{W^{s,p}} <= 2^p (omega_m x_part + omega_n y_part), parts restricted
/// to the domain. Throws NonProductDomain unless the domain is a rectangle.
CheckMargin embedding_check(const GridFunction& u, const FracParams& params);

/// (1 - (|x0 - x|^s + |y0 - y|^s) / Rs)_+ at every node.
GridFunction cone_function(std::shared_ptr<const Grid> grid, double s, Point2 center, double Rs);

struct QuotientBundle {
  double A = 0.0;  // sup over the y-fiber of (u(x,w) - u(x,y)) / |y - w|^s
  double B = 0.0;  // inf of the same
  double C = 0.0;  // sup over the x-fiber of (u(z,y) - u(x,y)) / |x - z|^s
  double D = 0.0;  // inf of the same
};

/// Partners are the other nodes on each fiber line plus the two ends of the
/// slice interval containing the node, where the zero extension starts.
QuotientBundle holder_quotients(const GridFunction& u, std::size_t node, double s);

struct ViscosityRow {
  int ix = 0;
  int iy = 0;
  QuotientBundle q;
  double residual = 0.0;
};

struct ViscosityReport {
  std::vector<ViscosityRow> rows;
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Pointwise |max{A, C} - max{-B, -D, lambda_inf u}| per node with summary
/// quantiles. Diagnostic only: the limit equation holds in the viscosity sense.
ViscosityReport viscosity_diagnostic(const GridFunction& u, double lambda_inf, double s);

struct CheckRecord {
  std::string check_name;
  std::string param_summary;
  CheckMargin margin;
  bool pass = false;
};

/// Random grid functions, uniform in [-1, 1] per node, one stream per seed.
std::vector<GridFunction> random_functions(std::shared_ptr<const Grid> grid, std::size_t count,
                                           std::uint64_t seed);

/// Four inequality checks on `count` random functions over the 16x16 unit
/// square: even-indexed functions use (s, p) = (0.5, 2), odd ones (0.6, 3);
/// inclusion uses (t, s) = (0.3, 0.6) and monotonicity (s0, s) = (0.4, 0.8).
std::vector<CheckRecord> inequality_suite(std::uint64_t seed, std::size_t count = 200);

}  // namespace pseudofrac
