#include "pseudofrac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pseudofrac/errors.hpp"
#include "pseudofrac/numeric.hpp"
#include "pseudofrac/parallel.hpp"

namespace pseudofrac {
namespace {

double lp_mass(const GridFunction& u, double p) {
  const PowerLaw pw(p);
  CompensatedSum acc;
  for (double v : u.values()) acc.add(pw.abs_pow(v));
  return acc.value() * u.grid().cell_area();
}

CheckMargin make_margin(double lhs, double rhs) { return {lhs, rhs, rhs - lhs}; }

std::size_t fiber_of(const std::vector<std::vector<std::size_t>>& fibers, std::size_t node) {
  for (std::size_t f = 0; f < fibers.size(); ++f) {
    if (std::find(fibers[f].begin(), fibers[f].end(), node) != fibers[f].end()) return f;
  }
  throw Error(ErrorKind::invalid_argument, "node " + std::to_string(node) + " is on no fiber");
}

// sup and inf of (u(partner) - u(node)) / dist^s along one fiber line.
std::pair<double, double> fiber_extremes(const GridFunction& u, std::size_t node, double s,
                                         const std::vector<std::size_t>& fiber,
                                         const std::vector<Interval>& slice, bool along_x) {
  const Grid& g = u.grid();
  auto coord = [&](std::size_t k) { return along_x ? g.nodes[k].x : g.nodes[k].y; };
  const double t = coord(node);
  const double u0 = u[node];
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  auto visit = [&](double value, double dist) {
    const double q = (value - u0) / std::pow(dist, s);
    hi = std::max(hi, q);
    lo = std::min(lo, q);
  };
  for (std::size_t k : fiber) {
    if (k != node) visit(u[k], std::abs(coord(k) - t));
  }
  for (const Interval& iv : slice) {
    if (iv.lo < t && t < iv.hi) {
      visit(0.0, t - iv.lo);
      visit(0.0, iv.hi - t);
      break;
    }
  }
  return {hi, lo};
}

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

std::string param_string(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, value] : items) {
    if (!first) out << ';';
    out << key << '=' << value;
    first = false;
  }
  return out.str();
}

}  // namespace

SphereMeasure sphere_measure(int n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "sphere dimension must be at least 1");
  if (n == 1) return {1, 2.0};
  if (n == 2) return {2, 2.0 * std::numbers::pi};
  const double half = 0.5 * static_cast<double>(n);
  return {n, 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half)};
}

bool CheckMargin::holds(double rel_slack) const { return margin >= -rel_slack * std::abs(rhs); }

double poincare_constant(const FracParams& params, const DomainSpec& domain) {
  const double d = 2.0 * domain.diameter();
  return sphere_measure(domain.n()).omega * std::pow(d, -params.sp()) / params.sp();
}

CheckMargin poincare_check(const GridFunction& u, const FracParams& params, const DomainSpec& domain) {
  const double mass = lp_mass(u, params.p());
  if (mass == 0.0) throw Error(ErrorKind::zero_function, "Poincare check needs u != 0");
  const double lhs = poincare_constant(params, domain) * mass;
  return make_margin(lhs, seminorm_p(u, params).total);
}

CheckMargin inclusion_check(const GridFunction& u, double t, double s, double p) {
  if (!(t > 0.0 && t < s && s < 1.0)) {
    throw Error(ErrorKind::bad_exponents, "inclusion needs 0 < t < s < 1");
  }
  const DomainSpec& domain = u.grid().domain;
  const double omega = sphere_measure(domain.n()).omega + sphere_measure(domain.m()).omega;
  const double lhs = EnergyModel(u.grid_ptr(), FracParams(t, p)).seminorm(u, EnergyScope::domain_only).total;
  const double high =
      EnergyModel(u.grid_ptr(), FracParams(s, p)).seminorm(u, EnergyScope::domain_only).total;
  const double rhs = high + std::pow(2.0, p) * omega / (t * p) * lp_mass(u, p);
  return make_margin(lhs, rhs);
}

CheckMargin scaled_monotonicity_check(const GridFunction& u, double s0, double s, double p,
                                      const DomainSpec& domain) {
  if (!(s0 > 0.0 && s0 < s && s < 1.0)) {
    throw Error(ErrorKind::bad_exponents, "monotonicity needs 0 < s0 < s < 1");
  }
  const double low =
      EnergyModel(u.grid_ptr(), FracParams(s0, p)).seminorm(u, EnergyScope::domain_only).total;
  const double lhs = (1.0 - s0) * low /
                     (std::pow(2.0, (1.0 - s0) * p) * std::pow(domain.diameter(), (s - s0) * p));
  const double rhs = (1.0 - s) * EnergyModel(u.grid_ptr(), FracParams(s, p)).seminorm(u).total;
  return make_margin(lhs, rhs);
}

double isotropic_seminorm(const GridFunction& u, const FracParams& params) {
  const Grid& g = u.grid();
  const std::size_t n = g.size();
  if (n > 2500) throw Error(ErrorKind::too_large, "isotropic seminorm is capped at 2500 nodes");
  const PowerLaw pw(params.p());
  const double expo = -(2.0 + params.sp()) / 2.0;
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t i) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double dx = g.nodes[i].x - g.nodes[k].x;
      const double dy = g.nodes[i].y - g.nodes[k].y;
      acc.add(pw.abs_pow(u[i] - u[k]) * std::pow(dx * dx + dy * dy, expo));
    }
    rows[i] = acc.value();
  });
  CompensatedSum total;
  for (double r : rows) total.add(r);
  const double area = g.cell_area();
  return total.value() * area * area;
}

CheckMargin embedding_check(const GridFunction& u, const FracParams& params) {
  const DomainSpec& domain = u.grid().domain;
  if (!domain.is_rectangle()) {
    throw Error(ErrorKind::non_product_domain, "embedding check needs a product (rectangle) domain");
  }
  const auto parts = EnergyModel(u.grid_ptr(), params).seminorm(u, EnergyScope::domain_only);
  const double omega_n = sphere_measure(domain.n()).omega;
  const double omega_m = sphere_measure(domain.m()).omega;
  const double rhs = std::pow(2.0, params.p()) * (omega_m * parts.x_part + omega_n * parts.y_part);
  return make_margin(isotropic_seminorm(u, params), rhs);
}

GridFunction cone_function(std::shared_ptr<const Grid> grid, double s, Point2 center, double Rs) {
  if (!(Rs > 0.0)) throw Error(ErrorKind::invalid_argument, "Rs must be positive");
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::invalid_argument, "s must lie in (0,1]");
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 q = grid->nodes[i];
    const double dist = std::pow(std::abs(center.x - q.x), s) + std::pow(std::abs(center.y - q.y), s);
    v[i] = std::max(0.0, 1.0 - dist / Rs);
  }
  return GridFunction(std::move(grid), std::move(v));
}

QuotientBundle holder_quotients(const GridFunction& u, std::size_t node, double s) {
  const Grid& g = u.grid();
  if (node >= g.size()) throw Error(ErrorKind::invalid_argument, "node index out of range");
  const std::size_t fy = fiber_of(g.fibers_y, node);
  const std::size_t fx = fiber_of(g.fibers_x, node);
  QuotientBundle q;
  std::tie(q.A, q.B) = fiber_extremes(u, node, s, g.fibers_y[fy], g.slices_y[fy], false);
  std::tie(q.C, q.D) = fiber_extremes(u, node, s, g.fibers_x[fx], g.slices_x[fx], true);
  return q;
}

ViscosityReport viscosity_diagnostic(const GridFunction& u, double lambda_inf, double s) {
  const Grid& g = u.grid();
  ViscosityReport report;
  report.rows.resize(g.size());
  // Walk fibers directly instead of searching for each node's fiber.
  std::vector<std::size_t> fx_of(g.size()), fy_of(g.size());
  for (std::size_t f = 0; f < g.fibers_x.size(); ++f) {
    for (std::size_t k : g.fibers_x[f]) fx_of[k] = f;
  }
  for (std::size_t f = 0; f < g.fibers_y.size(); ++f) {
    for (std::size_t k : g.fibers_y[f]) fy_of[k] = f;
  }
  parallel_for(g.size(), [&](std::size_t i) {
    ViscosityRow& row = report.rows[i];
    row.ix = g.ix[i];
    row.iy = g.iy[i];
    std::tie(row.q.A, row.q.B) = fiber_extremes(u, i, s, g.fibers_y[fy_of[i]], g.slices_y[fy_of[i]], false);
    std::tie(row.q.C, row.q.D) = fiber_extremes(u, i, s, g.fibers_x[fx_of[i]], g.slices_x[fx_of[i]], true);
    const double left = std::max(row.q.A, row.q.C);
    const double right = std::max({-row.q.B, -row.q.D, lambda_inf * u[i]});
    row.residual = std::abs(left - right);
  });
  std::vector<double> r;
  r.reserve(report.rows.size());
  CompensatedSum sum;
  for (const auto& row : report.rows) {
    r.push_back(row.residual);
    sum.add(row.residual);
  }
  std::sort(r.begin(), r.end());
  report.median = quantile(r, 0.5);
  report.p90 = quantile(r, 0.9);
  report.max = r.empty() ? 0.0 : r.back();
  report.mean = r.empty() ? 0.0 : sum.value() / static_cast<double>(r.size());
  return report;
}

std::vector<GridFunction> random_functions(std::shared_ptr<const Grid> grid, std::size_t count,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<GridFunction> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> v(grid->size());
    for (auto& x : v) x = dist(rng);
    out.emplace_back(grid, std::move(v));
  }
  return out;
}

std::vector<CheckRecord> inequality_suite(std::uint64_t seed, std::size_t count) {
  const DomainSpec square = DomainSpec::rectangle(0.5, 0.5);
  auto grid = std::make_shared<const Grid>(build_grid(square, 1.0 / 16.0, 1.0 / 16.0));
  const auto functions = random_functions(grid, count, seed);
  struct Setting {
    double s;
    double p;
  };
  const Setting settings[2] = {{0.5, 2.0}, {0.6, 3.0}};
  std::vector<CheckRecord> records(4 * count);
  parallel_for(count, [&](std::size_t i) {
    const GridFunction& u = functions[i];
    const Setting set = settings[i % 2];
    const FracParams params(set.s, set.p);
    const std::string tag = "u=" + std::to_string(i) + ";";
    auto put = [&](std::size_t slot, const char* name, std::string summary, CheckMargin m) {
      records[4 * i + slot] = {name, tag + summary, m, m.holds()};
    };
    put(0, "poincare", param_string({{"s", set.s}, {"p", set.p}}), poincare_check(u, params, square));
    put(1, "inclusion", param_string({{"t", 0.3}, {"s", 0.6}, {"p", set.p}}),
        inclusion_check(u, 0.3, 0.6, set.p));
    put(2, "scaled_monotonicity", param_string({{"s0", 0.4}, {"s", 0.8}, {"p", set.p}}),
        scaled_monotonicity_check(u, 0.4, 0.8, set.p, square));
    put(3, "embedding", param_string({{"s", set.s}, {"p", set.p}}), embedding_check(u, params));
  }, 1);
  return records;
}

}  // namespace pseudofrac
