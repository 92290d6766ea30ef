#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "pseudofrac/analysis.hpp"
#include "pseudofrac/eigensolver.hpp"
#include "pseudofrac/errors.hpp"

using namespace pseudofrac;

namespace {

std::shared_ptr<const Grid> square(int cells) {
  return std::make_shared<const Grid>(build_grid(DomainSpec::rectangle(0.5, 0.5), 1.0 / cells, 0.01));
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(SolverConfig, Validates) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.armijo_c = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.restarts = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(DenseOracle, MatrixSymmetricAndPositive) {
  const auto g = square(12);
  const auto a = assemble_p2_matrix(*g, 0.5);
  const std::size_t n = g->size();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) asym = std::max(asym, std::abs(a[i * n + k] - a[k * n + i]));
  }
  EXPECT_LE(asym, 1e-12);
  const DenseOracleResult r = dense_p2_oracle(g, 0.5);
  EXPECT_GT(r.lambda, 0.0);
  // Rayleigh quotient of the returned vector.
  const FracParams params(0.5, 2.0);
  const double q = seminorm_p(r.u, params).total / std::pow(lp_norm(r.u, 2.0), 2.0);
  EXPECT_LT(rel(q, r.lambda), 1e-10);
}

TEST(DenseOracle, AgreesWithEigenSolve) {
  const auto g = square(10);
  const auto a = assemble_p2_matrix(*g, 0.6);
  const auto n = static_cast<Eigen::Index>(g->size());
  const Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(a.data(), n, n) / g->cell_area();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  EXPECT_LT(rel(dense_p2_oracle(g, 0.6).lambda, es.eigenvalues()(0)), 1e-10);
}

TEST(DenseOracle, TooLarge) {
  const auto g = std::make_shared<const Grid>(build_grid(DomainSpec::rectangle(0.5, 0.5), 1.0 / 51, 0.01));
  ASSERT_GT(g->size(), kDenseNodeCap);
  try {
    dense_p2_oracle(g, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::too_large);
  }
}

TEST(Minimize, MatchesDenseOracleAtP2) {
  const auto g = square(12);
  const EigenResult r = minimize_rayleigh(g, FracParams(0.5, 2.0), SolverConfig{});
  const DenseOracleResult o = dense_p2_oracle(g, 0.5);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(rel(r.lambda, o.lambda), 1e-6);
  EXPECT_LE(weak_residual(o.u.scaled(1.0 / lp_norm(o.u, 2.0)), o.lambda, FracParams(0.5, 2.0)), 1e-10);
}

TEST(Minimize, MatchesDenseOracleOnEveryDomainKind) {
  for (const char* text : {"ball:1", "rect:1,0.5", "rectunion:1,0.25,0,0;0.25,1,0,0"}) {
    const DomainSpec d = parse_domain(text);
    const auto g = std::make_shared<const Grid>(build_grid(d, d.diameter() / 16, 0.01));
    const EigenResult r = minimize_rayleigh(g, FracParams(0.4, 2.0), SolverConfig{});
    EXPECT_LT(rel(r.lambda, dense_p2_oracle(g, 0.4).lambda), 1e-6) << text;
  }
}

TEST(Minimize, NormalizedAndSignNormalized) {
  const auto g = square(8);
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    SolverConfig c;
    c.rng_seed = 3;
    const EigenResult r = minimize_rayleigh(g, FracParams(0.5, p), c);
    EXPECT_NEAR(lp_norm(r.u, p), 1.0, 1e-12) << p;
    double sum = 0.0;
    for (double v : r.u.values()) sum += v;
    EXPECT_GE(sum, 0.0);
    EXPECT_TRUE(r.monotone);
    EXPECT_GT(r.lambda, 0.0);
  }
}

TEST(Minimize, PoincareLowerBound) {
  const DomainSpec d = DomainSpec::ball(1.0);
  const auto g = std::make_shared<const Grid>(build_grid(d, 0.2, 0.01));
  for (double p : {2.0, 4.0}) {
    const FracParams params(0.5, p);
    const EigenResult r = minimize_rayleigh(g, params, SolverConfig{});
    const double bound = 2.0 * std::pow(2.0 * d.diameter(), -params.sp()) / params.sp();
    EXPECT_GE(r.lambda, bound);
    EXPECT_DOUBLE_EQ(poincare_constant(params, d), bound);
  }
}

TEST(Minimize, LogDomainForLargeP) {
  const auto g = square(8);
  SolverConfig c;
  c.max_iters = 3000;
  const EigenResult warm = minimize_rayleigh(g, FracParams(0.5, 16.0), c);
  c.warm_start = warm.u;
  const EigenResult r = minimize_rayleigh(g, FracParams(0.5, 64.0), c);
  EXPECT_TRUE(r.log_domain);
  EXPECT_TRUE(std::isfinite(r.log_lambda_over_p));
  EXPECT_NEAR(std::exp(r.log_lambda_over_p), std::pow(r.lambda, 1.0 / 64.0), 1e-9);
}

TEST(Minimize, BelowConeQuotient) {
  const DomainSpec d = DomainSpec::rectangle(0.5, 0.5);
  const auto g = square(12);
  const FracParams params(0.5, 4.0);
  const GeoResult geo = compute_Rs(d, 0.5, *g);
  const GridFunction cone = cone_function(g, 0.5, geo.argmax_point, geo.R_s);
  const double q = seminorm_p(cone, params).total / std::pow(lp_norm(cone, 4.0), 4.0);
  EXPECT_LE(minimize_rayleigh(g, params, SolverConfig{}).lambda, q);
}

TEST(Minimize, EmptyGridRejected) {
  EXPECT_THROW(build_grid(DomainSpec::ball(1.0), 3.0, 0.01), Error);
}

TEST(Minimize, LinfBoundedUnderRefinement) {
  const FracParams params(0.5, 3.0);
  double prev = 0.0;
  for (int cells : {8, 16}) {
    const EigenResult r = minimize_rayleigh(square(cells), params, SolverConfig{});
    const double sup = linf_norm(r.u);
    EXPECT_TRUE(std::isfinite(sup));
    if (prev > 0.0) {
      EXPECT_LT(sup / prev, 1.1);
    }
    prev = sup;
  }
}

TEST(WeakResidual, PositiveForRandomData) {
  const auto g = square(6);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(g->size());
  for (auto& x : v) x = dist(rng);
  EXPECT_GT(weak_residual(GridFunction(g, v), 1.0, FracParams(0.5, 2.0)), 0.0);
}

TEST(WeakResidual, ScalesWithCellArea) {
  // Same lattice with cells twice as wide; copy the form with doubled weights.
  const auto a = std::make_shared<const Grid>(build_grid(DomainSpec::rectangle(0.5, 0.5), 0.25, 0.25, 0.01));
  const auto b = std::make_shared<const Grid>(build_grid(DomainSpec::rectangle(1.0, 0.5), 0.5, 0.25, 0.01));
  ASSERT_EQ(a->size(), b->size());
  const EnergyModel model(a, FracParams(0.5, 3.0));
  const DifferenceForm& fa = model.form();
  DifferenceForm::Builder builder(b, fa.p());
  for (const auto& f : fa.fibers()) {
    builder.begin_fiber(f.along_x);
    for (std::size_t t = f.begin; t < f.end; ++t) {
      if (t == f.interior_end) builder.mark_interior_end();
      builder.add(fa.terms()[t].a, fa.terms()[t].b, std::log(fa.terms()[t].weight) + std::log(2.0));
    }
    if (f.interior_end == f.end) builder.mark_interior_end();
  }
  const DifferenceForm fb = builder.finish();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(a->size());
  for (auto& x : v) x = dist(rng);
  const double ra = weak_residual(fa, GridFunction(a, v), 1.3);
  const double rb = weak_residual(fb, GridFunction(b, v), 1.3);
  EXPECT_LT(rel(rb, 2.0 * ra), 1e-12);
}

TEST(Simplicity, Examples) {
  const auto g = square(8);
  const EigenResult r = minimize_rayleigh(g, FracParams(0.5, 3.0), SolverConfig{});
  EXPECT_TRUE(check_simplicity({r, r}, 1e-5, 1e-3).pass);
  EigenResult bad = r;
  auto& v = bad.u.values_mut();
  for (std::size_t i = 0; i < v.size(); i += 2) v[i] = -v[i];
  EXPECT_FALSE(check_simplicity({r, bad}, 1e-5, 1e-3).pass);
}

TEST(Simplicity, TenRestartsAgree) {
  const auto g = square(24);
  SolverConfig c;
  c.restarts = 10;
  c.rng_seed = 11;
  const auto all = minimize_rayleigh_all(g, FracParams(0.5, 3.0), c);
  ASSERT_EQ(all.size(), 10u);
  for (const auto& r : all) EXPECT_TRUE(r.converged);
  const SimplicityReport rep = check_simplicity(all, 1e-5, 1e-3);
  EXPECT_TRUE(rep.pass) << rep.lambda_spread << " " << rep.u_spread;
  EXPECT_TRUE(check_positivity(all[0].u).pass);
}

TEST(Positivity, Examples) {
  const auto g = square(4);
  EXPECT_TRUE(check_positivity(GridFunction::constant(g, 2.0)).pass);
  GridFunction u = GridFunction::constant(g, 1.0);
  u[3] = -0.5;
  const PositivityReport rep = check_positivity(u);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.non_positive, 1u);
}

TEST(Restarts, DeterministicUnderSeed) {
  const auto g = square(8);
  SolverConfig c;
  c.restarts = 3;
  c.rng_seed = 42;
  const auto a = minimize_rayleigh_all(g, FracParams(0.5, 2.5), c);
  const auto b = minimize_rayleigh_all(g, FracParams(0.5, 2.5), c);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].lambda, b[k].lambda);
    EXPECT_EQ(a[k].restart_index, static_cast<int>(k));
  }
}

TEST(Directions, GradientAndLbfgsAgree) {
  const auto g = square(8);
  SolverConfig c;
  c.direction = DescentDirection::gradient;
  const double a = minimize_rayleigh(g, FracParams(0.5, 3.0), c).lambda;
  c.direction = DescentDirection::lbfgs;
  const double b = minimize_rayleigh(g, FracParams(0.5, 3.0), c).lambda;
  EXPECT_LT(rel(a, b), 1e-7);
}
