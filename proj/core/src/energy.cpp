#include "pseudofrac/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pseudofrac/errors.hpp"
#include "pseudofrac/numeric.hpp"
#include "pseudofrac/parallel.hpp"

namespace pseudofrac {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double partner_value(std::span<const double> u, std::uint32_t b) {
  return b == DifferenceForm::kExterior ? 0.0 : u[b];
}

// Index of the slice interval that strictly contains t, or npos.
std::size_t containing_interval(std::span<const Interval> slice, double t) {
  for (std::size_t j = 0; j < slice.size(); ++j) {
    if (slice[j].lo < t && t < slice[j].hi) return j;
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

// ---------------------------------------------------------------------------
// FracParams / GridFunction

FracParams::FracParams(double s, double p, KernelRule rule) : s_(s), p_(p), sp_(s * p), rule_(rule) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::invalid_argument, "s must lie in (0,1)");
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::invalid_argument, "p must lie in (1,inf)");
  }
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorKind::invalid_argument, "grid function needs a grid");
  if (values_.size() != grid_->size()) {
    throw Error(ErrorKind::grid_mismatch, "value count " + std::to_string(values_.size()) +
                                              " does not match node count " +
                                              std::to_string(grid_->size()));
  }
}

GridFunction GridFunction::zeros(std::shared_ptr<const Grid> grid) { return constant(std::move(grid), 0.0); }

GridFunction GridFunction::constant(std::shared_ptr<const Grid> grid, double value) {
  const std::size_t n = grid->size();
  return GridFunction(std::move(grid), std::vector<double>(n, value));
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= c;
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::sign_normalized() const {
  CompensatedSum sum;
  for (double v : values_) sum.add(v);
  return sum.value() < 0.0 ? scaled(-1.0) : *this;
}

// ---------------------------------------------------------------------------
// DifferenceForm

DifferenceForm::Builder::Builder(std::shared_ptr<const Grid> grid, double p)
    : grid_(std::move(grid)), p_(p) {}

void DifferenceForm::Builder::begin_fiber(bool along_x) {
  fibers_.push_back({terms_.size(), terms_.size(), terms_.size(), along_x});
}

void DifferenceForm::Builder::add(std::uint32_t a, std::uint32_t b, double log_weight) {
  terms_.push_back({a, b, std::exp(log_weight), std::exp(log_weight / p_)});
  fibers_.back().end = terms_.size();
}

void DifferenceForm::Builder::mark_interior_end() { fibers_.back().interior_end = terms_.size(); }

DifferenceForm DifferenceForm::Builder::finish() {
  // Fibers along x must precede fibers along y so that the x/y split of every
  // reduction is a prefix/suffix split.
  DifferenceForm out;
  out.grid_ = std::move(grid_);
  out.p_ = p_;
  out.terms_ = std::move(terms_);
  out.fibers_ = std::move(fibers_);
  for (std::size_t f = 0; f < out.fibers_.size(); ++f) {
    if (out.fibers_[f].interior_end < out.fibers_[f].begin) {
      out.fibers_[f].interior_end = out.fibers_[f].begin;
    }
  }
  return out;
}

void DifferenceForm::check_grid(const GridFunction& u) const {
  if (u.grid_ptr() != grid_ && !u.grid().same_layout(*grid_)) {
    throw Error(ErrorKind::grid_mismatch, "grid function lives on a different grid");
  }
}

EnergyBreakdown DifferenceForm::evaluate(std::span<const double> u, EnergyScope scope) const {
  const PowerLaw pm1(p_ - 1.0);
  const PowerLaw pp(p_);
  std::vector<double> partial(fibers_.size());
  std::vector<double> fiber_qmax(fibers_.size());
  parallel_for(fibers_.size(), [&](std::size_t f) {
    const Fiber& fiber = fibers_[f];
    const std::size_t end = scope == EnergyScope::whole_space ? fiber.end : fiber.interior_end;
    CompensatedSum acc;
    double qmax = 0.0;
    for (std::size_t t = fiber.begin; t < end; ++t) {
      const Term& term = terms_[t];
      const double d = u[term.a] - partner_value(u, term.b);
      const double ad = std::abs(d);
      acc.add(pm1.abs_pow(d) * ad * term.weight);
      qmax = std::max(qmax, ad * term.weight_root);
    }
    partial[f] = acc.value();
    fiber_qmax[f] = qmax;
  });
  CompensatedSum x_acc;
  CompensatedSum y_acc;
  double qmax = 0.0;
  for (std::size_t f = 0; f < fibers_.size(); ++f) {
    (fibers_[f].along_x ? x_acc : y_acc).add(partial[f]);
    qmax = std::max(qmax, fiber_qmax[f]);
  }
  EnergyBreakdown out;
  out.x_part = x_acc.value();
  out.y_part = y_acc.value();
  out.total = out.x_part + out.y_part;
  if (qmax == 0.0) {
    out.log_total = kNegInf;
    return out;
  }
  // Second pass in the scaled domain for log_total.
  parallel_for(fibers_.size(), [&](std::size_t f) {
    const Fiber& fiber = fibers_[f];
    const std::size_t end = scope == EnergyScope::whole_space ? fiber.end : fiber.interior_end;
    CompensatedSum acc;
    for (std::size_t t = fiber.begin; t < end; ++t) {
      const Term& term = terms_[t];
      const double d = u[term.a] - partner_value(u, term.b);
      acc.add(pp.abs_pow(std::abs(d) * term.weight_root / qmax));
    }
    partial[f] = acc.value();
  });
  CompensatedSum scaled;
  for (double v : partial) scaled.add(v);
  out.log_total = p_ * std::log(qmax) + std::log(scaled.value());
  return out;
}

double DifferenceForm::form(std::span<const double> u, std::span<const double> v) const {
  const PowerLaw pm1(p_ - 1.0);
  std::vector<double> partial(fibers_.size());
  parallel_for(fibers_.size(), [&](std::size_t f) {
    const Fiber& fiber = fibers_[f];
    CompensatedSum acc;
    for (std::size_t t = fiber.begin; t < fiber.end; ++t) {
      const Term& term = terms_[t];
      const double du = u[term.a] - partner_value(u, term.b);
      const double dv = v[term.a] - partner_value(v, term.b);
      acc.add(pm1.signed_pow(du) * dv * term.weight);
    }
    partial[f] = acc.value();
  });
  CompensatedSum x_acc;
  CompensatedSum y_acc;
  for (std::size_t f = 0; f < fibers_.size(); ++f) {
    (fibers_[f].along_x ? x_acc : y_acc).add(partial[f]);
  }
  return x_acc.value() + y_acc.value();
}

std::vector<double> DifferenceForm::first_variation(std::span<const double> u) const {
  const PowerLaw pm1(p_ - 1.0);
  std::vector<double> c(u.size(), 0.0);
  // Fibers along one axis partition the nodes, so each phase writes disjoint
  // entries.
  for (const bool along_x : {true, false}) {
    std::vector<std::size_t> ids;
    for (std::size_t f = 0; f < fibers_.size(); ++f) {
      if (fibers_[f].along_x == along_x) ids.push_back(f);
    }
    parallel_for(ids.size(), [&](std::size_t k) {
      const Fiber& fiber = fibers_[ids[k]];
      for (std::size_t t = fiber.begin; t < fiber.end; ++t) {
        const Term& term = terms_[t];
        const double g = pm1.signed_pow(u[term.a] - partner_value(u, term.b)) * term.weight;
        c[term.a] += g;
        if (term.b != kExterior) c[term.b] -= g;
      }
    });
  }
  return c;
}

double DifferenceForm::energy_and_gradient(std::span<const double> u, std::span<double> grad) const {
  const PowerLaw pm1(p_ - 1.0);
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> partial(fibers_.size());
  for (const bool along_x : {true, false}) {
    std::vector<std::size_t> ids;
    for (std::size_t f = 0; f < fibers_.size(); ++f) {
      if (fibers_[f].along_x == along_x) ids.push_back(f);
    }
    parallel_for(ids.size(), [&](std::size_t k) {
      const Fiber& fiber = fibers_[ids[k]];
      CompensatedSum acc;
      for (std::size_t t = fiber.begin; t < fiber.end; ++t) {
        const Term& term = terms_[t];
        const double d = u[term.a] - partner_value(u, term.b);
        const double g = pm1.signed_pow(d) * term.weight;
        acc.add(g * d);
        grad[term.a] += g;
        if (term.b != kExterior) grad[term.b] -= g;
      }
      partial[ids[k]] = acc.value();
    });
  }
  for (auto& g : grad) g *= p_;
  CompensatedSum x_acc;
  CompensatedSum y_acc;
  for (std::size_t f = 0; f < fibers_.size(); ++f) {
    (fibers_[f].along_x ? x_acc : y_acc).add(partial[f]);
  }
  return x_acc.value() + y_acc.value();
}

double DifferenceForm::energy(std::span<const double> u) const {
  const PowerLaw pm1(p_ - 1.0);
  std::vector<double> partial(fibers_.size());
  parallel_for(fibers_.size(), [&](std::size_t f) {
    CompensatedSum acc;
    for (std::size_t t = fibers_[f].begin; t < fibers_[f].end; ++t) {
      const Term& term = terms_[t];
      const double d = u[term.a] - partner_value(u, term.b);
      acc.add(pm1.abs_pow(d) * std::abs(d) * term.weight);
    }
    partial[f] = acc.value();
  });
  CompensatedSum x_acc;
  CompensatedSum y_acc;
  for (std::size_t f = 0; f < fibers_.size(); ++f) {
    (fibers_[f].along_x ? x_acc : y_acc).add(partial[f]);
  }
  return x_acc.value() + y_acc.value();
}

double DifferenceForm::log_energy(std::span<const double> u) const {
  const PowerLaw pp(p_);
  std::vector<double> fiber_qmax(fibers_.size());
  parallel_for(fibers_.size(), [&](std::size_t f) {
    double qmax = 0.0;
    for (std::size_t t = fibers_[f].begin; t < fibers_[f].end; ++t) {
      const Term& term = terms_[t];
      qmax = std::max(qmax, std::abs(u[term.a] - partner_value(u, term.b)) * term.weight_root);
    }
    fiber_qmax[f] = qmax;
  });
  const double qmax = fiber_qmax.empty() ? 0.0 : *std::max_element(fiber_qmax.begin(), fiber_qmax.end());
  if (qmax == 0.0) return kNegInf;
  std::vector<double> partial(fibers_.size());
  parallel_for(fibers_.size(), [&](std::size_t f) {
    CompensatedSum acc;
    for (std::size_t t = fibers_[f].begin; t < fibers_[f].end; ++t) {
      const Term& term = terms_[t];
      acc.add(pp.abs_pow(std::abs(u[term.a] - partner_value(u, term.b)) * term.weight_root / qmax));
    }
    partial[f] = acc.value();
  });
  CompensatedSum scaled;
  for (double v : partial) scaled.add(v);
  return p_ * std::log(qmax) + std::log(scaled.value());
}

double DifferenceForm::log_energy_and_gradient(std::span<const double> u,
                                               std::span<double> grad_over_energy) const {
  const PowerLaw pm1(p_ - 1.0);
  std::fill(grad_over_energy.begin(), grad_over_energy.end(), 0.0);
  std::vector<double> fiber_qmax(fibers_.size());
  parallel_for(fibers_.size(), [&](std::size_t f) {
    double qmax = 0.0;
    for (std::size_t t = fibers_[f].begin; t < fibers_[f].end; ++t) {
      const Term& term = terms_[t];
      qmax = std::max(qmax, std::abs(u[term.a] - partner_value(u, term.b)) * term.weight_root);
    }
    fiber_qmax[f] = qmax;
  });
  const double qmax = fiber_qmax.empty() ? 0.0 : *std::max_element(fiber_qmax.begin(), fiber_qmax.end());
  if (qmax == 0.0) return kNegInf;

  std::vector<double> partial(fibers_.size());
  for (const bool along_x : {true, false}) {
    std::vector<std::size_t> ids;
    for (std::size_t f = 0; f < fibers_.size(); ++f) {
      if (fibers_[f].along_x == along_x) ids.push_back(f);
    }
    parallel_for(ids.size(), [&](std::size_t k) {
      const Fiber& fiber = fibers_[ids[k]];
      CompensatedSum acc;
      for (std::size_t t = fiber.begin; t < fiber.end; ++t) {
        const Term& term = terms_[t];
        const double d = u[term.a] - partner_value(u, term.b);
        const double r = std::abs(d) * term.weight_root / qmax;
        const double r_pm1 = pm1.abs_pow(r);
        acc.add(r_pm1 * r);
        const double g = std::copysign(r_pm1 * term.weight_root, d);
        grad_over_energy[term.a] += g;
        if (term.b != kExterior) grad_over_energy[term.b] -= g;
      }
      partial[ids[k]] = acc.value();
    });
  }
  CompensatedSum scaled;
  for (double v : partial) scaled.add(v);
  const double factor = p_ / (qmax * scaled.value());
  for (auto& g : grad_over_energy) g *= factor;
  return p_ * std::log(qmax) + std::log(scaled.value());
}

// ---------------------------------------------------------------------------
// Nonlocal seminorm

double log_exterior_tail(std::span<const Interval> slice, double t, double sp) {
  const std::size_t j = containing_interval(slice, t);
  if (j == static_cast<std::size_t>(-1)) {
    throw Error(ErrorKind::invalid_argument, "point is not inside its fiber slice");
  }
  // Integral of |t - z|^{-(1+sp)} over a gap at distances [near, far] from t.
  auto log_gap = [sp](double near, double far) {
    const double ratio = std::isinf(far) ? 0.0 : std::exp(sp * std::log(near / far));
    return -sp * std::log(near) + std::log1p(-ratio) - std::log(sp);
  };
  const double inf = std::numeric_limits<double>::infinity();
  double acc = kNegInf;
  for (std::size_t k = 0; k <= j; ++k) {
    const double near = t - slice[k].lo;
    const double far = k == 0 ? inf : t - slice[k - 1].hi;
    acc = log_add_exp(acc, log_gap(near, far));
  }
  for (std::size_t k = j; k < slice.size(); ++k) {
    const double near = slice[k].hi - t;
    const double far = k + 1 == slice.size() ? inf : slice[k + 1].lo - t;
    acc = log_add_exp(acc, log_gap(near, far));
  }
  return acc;
}

namespace {

DifferenceForm build_nonlocal_form(const std::shared_ptr<const Grid>& grid, const FracParams& params,
                                   std::vector<double>& tail_x, std::vector<double>& tail_y) {
  const Grid& g = *grid;
  const double p = params.p();
  const double s = params.s();
  const double sp = params.sp();
  const double log_area = std::log(g.cell_area());
  DifferenceForm::Builder builder(grid, p);
  tail_x.assign(g.size(), 0.0);
  tail_y.assign(g.size(), 0.0);

  for (const bool along_x : {true, false}) {
    const auto& fibers = along_x ? g.fibers_x : g.fibers_y;
    const auto& slices = along_x ? g.slices_x : g.slices_y;
    const auto& lattice = along_x ? g.ix : g.iy;
    const double h = along_x ? g.hx : g.hy;
    auto& tails = along_x ? tail_x : tail_y;
    // Ordered pairs count twice: weight 2 |dz|^{-(1+sp)} h^2 h_other.
    const double log_pair_base = std::log(2.0) + 2.0 * std::log(h) + log_area - std::log(h);
    // Self-cell: 2 (h/2)^{p(1-s)} / (p(1-s)) |du/h|^p per edge and unit area.
    const double a = p * (1.0 - s);
    const double log_edge = std::log(2.0) + a * std::log(h / 2.0) - std::log(a) - p * std::log(h) +
                            log_area;
    const bool self_cell = params.rule() == KernelRule::self_cell;

    for (std::size_t f = 0; f < fibers.size(); ++f) {
      const auto& nodes = fibers[f];
      builder.begin_fiber(along_x);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t k = i + 1; k < nodes.size(); ++k) {
          const double dist = static_cast<double>(lattice[nodes[k]] - lattice[nodes[i]]) * h;
          builder.add(static_cast<std::uint32_t>(nodes[i]), static_cast<std::uint32_t>(nodes[k]),
                      log_pair_base - (1.0 + sp) * std::log(dist));
        }
      }
      if (self_cell) {
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
          if (lattice[nodes[i + 1]] - lattice[nodes[i]] == 1) {
            builder.add(static_cast<std::uint32_t>(nodes[i]),
                        static_cast<std::uint32_t>(nodes[i + 1]), log_edge);
          }
        }
      }
      builder.mark_interior_end();
      if (self_cell) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
          const bool open_left = i == 0 || lattice[nodes[i]] - lattice[nodes[i - 1]] > 1;
          const bool open_right =
              i + 1 == nodes.size() || lattice[nodes[i + 1]] - lattice[nodes[i]] > 1;
          if (open_left) builder.add(static_cast<std::uint32_t>(nodes[i]), DifferenceForm::kExterior, log_edge);
          if (open_right) builder.add(static_cast<std::uint32_t>(nodes[i]), DifferenceForm::kExterior, log_edge);
        }
      }
      for (std::size_t node : nodes) {
        const double t = along_x ? g.nodes[node].x : g.nodes[node].y;
        const double log_tail = log_exterior_tail(slices[f], t, sp);
        tails[node] = std::exp(log_tail);
        // Both orderings (node inside, partner outside and vice versa).
        builder.add(static_cast<std::uint32_t>(node), DifferenceForm::kExterior,
                    std::log(2.0) + log_tail + log_area);
      }
    }
  }
  return builder.finish();
}

}  // namespace

EnergyModel::EnergyModel(std::shared_ptr<const Grid> grid, FracParams params)
    : params_(params), form_(build_nonlocal_form(grid, params_, tail_x_, tail_y_)) {}

EnergyBreakdown EnergyModel::seminorm(const GridFunction& u, EnergyScope scope) const {
  form_.check_grid(u);
  return form_.evaluate(u.values(), scope);
}

double EnergyModel::form_H(const GridFunction& u, const GridFunction& v) const {
  form_.check_grid(u);
  form_.check_grid(v);
  return form_.form(u.values(), v.values());
}

GridFunction EnergyModel::apply_operator(const GridFunction& u) const {
  form_.check_grid(u);
  auto c = form_.first_variation(u.values());
  const double inv_area = 1.0 / grid().cell_area();
  for (auto& v : c) v *= inv_area;
  return GridFunction(u.grid_ptr(), std::move(c));
}

GridFunction EnergyModel::energy_gradient(const GridFunction& u) const {
  form_.check_grid(u);
  std::vector<double> grad(u.size());
  form_.energy_and_gradient(u.values(), grad);
  return GridFunction(u.grid_ptr(), std::move(grad));
}

double EnergyModel::log_rayleigh(const GridFunction& u) const {
  form_.check_grid(u);
  const double log_mass = log_lp_mass(u.values(), params_.p(), grid().cell_area());
  if (log_mass == kNegInf) throw Error(ErrorKind::zero_function, "Rayleigh quotient of u = 0");
  return (form_.log_energy(u.values()) - log_mass) / params_.p();
}

EnergyBreakdown seminorm_p(const GridFunction& u, const FracParams& params) {
  return EnergyModel(u.grid_ptr(), params).seminorm(u);
}

double form_H(const GridFunction& u, const GridFunction& v, const FracParams& params) {
  if (u.grid_ptr() != v.grid_ptr() && !u.grid().same_layout(v.grid())) {
    throw Error(ErrorKind::grid_mismatch, "u and v live on different grids");
  }
  return EnergyModel(u.grid_ptr(), params).form_H(u, v);
}

GridFunction apply_operator(const GridFunction& u, const FracParams& params) {
  return EnergyModel(u.grid_ptr(), params).apply_operator(u);
}

GridFunction energy_gradient(const GridFunction& u, const FracParams& params) {
  return EnergyModel(u.grid_ptr(), params).energy_gradient(u);
}

double log_rayleigh(const GridFunction& u, const FracParams& params) {
  return EnergyModel(u.grid_ptr(), params).log_rayleigh(u);
}

// ---------------------------------------------------------------------------
// Norms

double seminorm_infty(const GridFunction& u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::invalid_argument, "s must lie in (0,1)");
  const Grid& g = u.grid();
  double best = 0.0;
  for (const bool along_x : {true, false}) {
    const auto& fibers = along_x ? g.fibers_x : g.fibers_y;
    const auto& slices = along_x ? g.slices_x : g.slices_y;
    for (std::size_t f = 0; f < fibers.size(); ++f) {
      const auto& nodes = fibers[f];
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Point2 pi = g.nodes[nodes[i]];
        const double ti = along_x ? pi.x : pi.y;
        for (std::size_t k = i + 1; k < nodes.size(); ++k) {
          const Point2 pk = g.nodes[nodes[k]];
          const double tk = along_x ? pk.x : pk.y;
          best = std::max(best, std::abs(u[nodes[i]] - u[nodes[k]]) / std::pow(tk - ti, s));
        }
        const std::size_t j = containing_interval(slices[f], ti);
        if (j == static_cast<std::size_t>(-1)) continue;
        const double ui = std::abs(u[nodes[i]]);
        best = std::max(best, ui / std::pow(ti - slices[f][j].lo, s));
        best = std::max(best, ui / std::pow(slices[f][j].hi - ti, s));
      }
    }
  }
  return best;
}

double log_lp_mass(std::span<const double> u, double p, double cell_area) {
  double umax = 0.0;
  for (double v : u) umax = std::max(umax, std::abs(v));
  if (umax == 0.0) return kNegInf;
  const PowerLaw pp(p);
  CompensatedSum acc;
  for (double v : u) acc.add(pp.abs_pow(v / umax));
  return p * std::log(umax) + std::log(acc.value()) + std::log(cell_area);
}

double lp_norm(std::span<const double> u, double p, double cell_area) {
  double umax = 0.0;
  for (double v : u) umax = std::max(umax, std::abs(v));
  if (umax == 0.0) return 0.0;
  const PowerLaw pp(p);
  CompensatedSum acc;
  for (double v : u) acc.add(pp.abs_pow(v / umax));
  return umax * std::pow(acc.value() * cell_area, 1.0 / p);
}

double lp_norm(const GridFunction& u, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_argument, "p must be at least 1");
  return lp_norm(u.values(), p, u.grid().cell_area());
}

double linf_norm(const GridFunction& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace pseudofrac
