#include "pseudofrac/local_limit.hpp"

#include <array>
#include <functional>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "pseudofrac/errors.hpp"
#include "pseudofrac/numeric.hpp"

namespace pseudofrac {
namespace {

using boost::math::quadrature::tanh_sinh;

constexpr double kPi = std::numbers::pi;
constexpr double kInnerTol = 1e-12;

// Every integrand below is smooth inside its interval; non-smoothness (sign
// changes under |.|^p) sits at the endpoints, which tanh-sinh handles well.
double integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  static thread_local tanh_sinh<double> rule;
  const double width = b - a;
  return width * rule.integrate([&](double v) { return f(a + width * v); }, 0.0, 1.0, kInnerTol);
}

struct Profile {
  BumpProfile kind;
  PowerLaw pw;

  double value(double t) const {
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return kind == BumpProfile::cosine ? std::cos(kPi * t / 2.0) : (1.0 - t * t) * (1.0 - t * t);
  }

  double slope(double t) const {
    return kind == BumpProfile::cosine ? -kPi / 2.0 * std::sin(kPi * t / 2.0)
                                       : -4.0 * t * (1.0 - t * t);
  }

  // (phi(t + r) - phi(t)) / r for t, t + r in [-1, 1], free of cancellation.
  double quotient(double t, double r) const {
    if (kind == BumpProfile::cosine) {
      const double sinc = r == 0.0 ? kPi / 4.0 : std::sin(kPi * r / 4.0) / r;
      return -2.0 * std::sin(kPi * (2.0 * t + r) / 4.0) * sinc;
    }
    const double u = t + r;
    return -(2.0 * t + r) * (2.0 - t * t - u * u);
  }

  // phi(-1 + r v) / r for v in [0, 1]; both profiles are even.
  double edge_quotient(double v, double r) const {
    if (kind == BumpProfile::cosine) return std::sin(kPi * r * v / 2.0) / r;
    return r * v * v * (2.0 - r * v) * (2.0 - r * v);
  }

  // g(r) = int |phi(t + r) - phi(t)|^p dt / r^p for 0 < r < 2.
  double g(double r) const {
    // Only phi(t + r) is nonzero for t + r in [-1, -1 + r], only phi(t) for t in
    // [1 - r, 1]; by symmetry the two pieces are equal.
    const double edge =
        r * integrate([&](double v) { return pw.abs_pow(edge_quotient(v, r)); }, 0.0, 1.0);
    // Both inside on [-1, 1 - r]; the difference changes sign at t = -r/2.
    auto inner = [&](double t) { return pw.abs_pow(quotient(t, r)); };
    const double mid = integrate(inner, -1.0, -r / 2.0) + integrate(inner, -r / 2.0, 1.0 - r);
    return 2.0 * edge + mid;
  }
};

}  // namespace

std::string_view to_string(BBMProvenance provenance) noexcept {
  return provenance == BBMProvenance::analytic_1d ? "analytic_1d" : "numeric_limit";
}

double bbm_ratio(BumpProfile profile, double s, double p) {
  if (!(s > 0.0 && s < 1.0) || !(p > 1.0)) {
    throw Error(ErrorKind::invalid_argument, "bbm_ratio needs 0 < s < 1 and p > 1");
  }
  const Profile phi{profile, PowerLaw(p)};
  const double g0 = integrate([&](double t) { return phi.pw.abs_pow(phi.slope(t)); }, -1.0, 1.0);
  const double mass = integrate([&](double t) { return phi.pw.abs_pow(phi.value(t)); }, -1.0, 1.0);
  const double a = p * (1.0 - s);
  const double sp = s * p;
  // I(s) = 2 int_0^inf r^{-1-sp} G(r) dr with G(r) = r^p g(r) and G = 2 mass
  // once the supports separate (r >= 2).
  tanh_sinh<double> outer;
  const double near = outer.integrate(
      [&](double r) { return std::pow(r, a - 1.0) * (phi.g(r) - g0); }, 0.0, 2.0, 1e-12);
  const double total = 2.0 * (near + g0 * std::pow(2.0, a) / a + 2.0 * mass * std::pow(2.0, -sp) / sp);
  return (1.0 - s) * total / g0;
}

double bbm_numeric_limit(BumpProfile profile, double p) {
  constexpr std::array<double, 3> s_values{0.99, 0.995, 0.999};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double s : s_values) {
    const double x = 1.0 - s;
    const double y = bbm_ratio(profile, s, p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(s_values.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return (sy - slope * sx) / n;
}

BBMConstant bbm_constant(int n_block, double p) {
  if (n_block != 1) {
    throw Error(ErrorKind::unsupported_block,
                "only one-dimensional blocks are supported, got n = " + std::to_string(n_block));
  }
  if (!(p > 1.0 && p <= 64.0)) throw Error(ErrorKind::invalid_argument, "p must lie in (1, 64]");
  BBMConstant k;
  k.n_block = n_block;
  k.p = p;
  k.numeric_value = bbm_numeric_limit(BumpProfile::cosine, p);
  k.analytic_value = 2.0 / p;
  k.analytic_validated = std::abs(k.numeric_value - k.analytic_value) <= 0.01 * k.analytic_value;
  k.value = k.analytic_validated ? k.analytic_value : k.numeric_value;
  k.provenance = k.analytic_validated ? BBMProvenance::analytic_1d : BBMProvenance::numeric_limit;
  return k;
}

namespace {

DifferenceForm build_local_form(const std::shared_ptr<const Grid>& grid, double p, double kx,
                                double ky) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::invalid_argument, "p must lie in (1,inf)");
  if (!(kx > 0.0) || !(ky > 0.0)) throw Error(ErrorKind::invalid_argument, "Kx and Ky must be positive");
  const Grid& g = *grid;
  const double log_area = std::log(g.cell_area());
  DifferenceForm::Builder builder(grid, p);
  for (const bool along_x : {true, false}) {
    const auto& fibers = along_x ? g.fibers_x : g.fibers_y;
    const auto& lattice = along_x ? g.ix : g.iy;
    const double h = along_x ? g.hx : g.hy;
    const double k = along_x ? kx : ky;
    const double log_w = std::log(k) - p * std::log(h) + log_area;
    for (const auto& nodes : fibers) {
      builder.begin_fiber(along_x);
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (lattice[nodes[i + 1]] - lattice[nodes[i]] == 1) {
          builder.add(static_cast<std::uint32_t>(nodes[i]), static_cast<std::uint32_t>(nodes[i + 1]),
                      log_w);
        }
      }
      builder.mark_interior_end();
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const bool open_left = i == 0 || lattice[nodes[i]] - lattice[nodes[i - 1]] > 1;
        const bool open_right = i + 1 == nodes.size() || lattice[nodes[i + 1]] - lattice[nodes[i]] > 1;
        if (open_left) builder.add(static_cast<std::uint32_t>(nodes[i]), DifferenceForm::kExterior, log_w);
        if (open_right) builder.add(static_cast<std::uint32_t>(nodes[i]), DifferenceForm::kExterior, log_w);
      }
    }
  }
  return builder.finish();
}

}  // namespace

LocalEnergy::LocalEnergy(std::shared_ptr<const Grid> grid, double p, double kx, double ky)
    : kx_(kx), ky_(ky), form_(build_local_form(grid, p, kx, ky)) {}

double LocalEnergy::energy(const GridFunction& u) const {
  form_.check_grid(u);
  return form_.energy(u.values());
}

EnergyBreakdown LocalEnergy::breakdown(const GridFunction& u) const {
  form_.check_grid(u);
  return form_.evaluate(u.values());
}

double local_energy(const GridFunction& u, double p, double kx, double ky) {
  return LocalEnergy(u.grid_ptr(), p, kx, ky).energy(u);
}

LocalEigenResult minimize_local_rayleigh(std::shared_ptr<const Grid> grid, double p, double kx,
                                         double ky, const SolverConfig& config) {
  const LocalEnergy energy(std::move(grid), p, kx, ky);
  EigenResult r = minimize_form(energy.form(), config);
  LocalEigenResult out;
  out.lambda_local = r.lambda;
  out.residual = r.residual;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.log_lambda_over_p = r.log_lambda_over_p;
  out.u = std::move(r.u);
  return out;
}

}  // namespace pseudofrac
