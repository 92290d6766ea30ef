#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "pseudofrac/errors.hpp"
#include "pseudofrac/geometry.hpp"
#include "support/oracles.hpp"

using namespace pseudofrac;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST(DomainParse, RoundTripsEveryKind) {
  for (const char* text : {"ball:1", "ball:2.5:0.5,-1", "rect:1,0.5", "rect:1,0.5:0.25,0",
                           "rectunion:1,0.25,0,0;0.25,1,0,0"}) {
    const DomainSpec d = parse_domain(text);
    EXPECT_EQ(parse_domain(format_domain(d)), d) << text;
  }
}

TEST(DomainParse, ReportsOffendingPosition) {
  try {
    parse_domain("ball:x");
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(parse_domain("disk:1"), ParseError);
  EXPECT_THROW(parse_domain("rect:1"), ParseError);
  EXPECT_THROW(parse_domain("ball:-1"), Error);
}

TEST(DomainSpec, RejectsDisconnectedUnion) {
  EXPECT_THROW(parse_domain("rectunion:0.5,0.5,0,0;0.5,0.5,3,0"), Error);
}

TEST(DomainSpec, Diameter) {
  EXPECT_DOUBLE_EQ(DomainSpec::ball(2.0).diameter(), 4.0);
  EXPECT_DOUBLE_EQ(DomainSpec::rectangle(1.0, 0.5).diameter(), std::sqrt(5.0));
}

TEST(BuildGrid, RectangleCellCenters) {
  const Grid g = build_grid(DomainSpec::rectangle(1.0, 0.5), 0.5, 0.01);
  ASSERT_EQ(g.size(), 8u);
  std::set<std::pair<double, double>> got;
  for (const auto& q : g.nodes) got.insert({q.x, q.y});
  const std::set<std::pair<double, double>> want = {
      {-0.75, -0.25}, {-0.25, -0.25}, {0.25, -0.25}, {0.75, -0.25},
      {-0.75, 0.25},  {-0.25, 0.25},  {0.25, 0.25},  {0.75, 0.25}};
  EXPECT_EQ(got, want);
}

TEST(BuildGrid, EmptyGrid) {
  EXPECT_EQ(kind_of([] { build_grid(DomainSpec::ball(1.0), 2.5, 0.01); }), ErrorKind::empty_grid);
}

TEST(BuildGrid, UnsupportedDims) {
  EXPECT_EQ(kind_of([] { build_grid(DomainSpec::ball(1.0, {}, 2, 1), 0.1, 0.01); }),
            ErrorKind::unsupported_dims);
}

TEST(BuildGrid, BallCountMatchesCellScan) {
  const double h = 0.25;
  const Grid g = build_grid(DomainSpec::ball(1.0), h, 0.01);
  std::size_t count = 0;
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 8; ++i) {
      const double x0 = -1.0 + i * h, y0 = -1.0 + j * h;
      bool inside = true;
      for (double x : {x0, x0 + h}) {
        for (double y : {y0, y0 + h}) inside = inside && x * x + y * y <= 1.0;
      }
      count += inside;
    }
  }
  EXPECT_EQ(g.size(), count);
}

TEST(BuildGrid, InvariantsHold) {
  for (const char* text : {"ball:1", "rect:1,0.5", "rectunion:1,0.25,0,0;0.25,1,0,0"}) {
    const DomainSpec d = parse_domain(text);
    const double spacing = 0.05;
    const Grid g = build_grid(d, 0.1, spacing);
    std::vector<int> seen_x(g.size(), 0), seen_y(g.size(), 0);
    for (const auto& f : g.fibers_x) {
      for (std::size_t k = 0; k < f.size(); ++k) {
        ++seen_x[f[k]];
        if (k > 0) {
          EXPECT_LT(g.nodes[f[k - 1]].x, g.nodes[f[k]].x);
        }
      }
    }
    for (const auto& f : g.fibers_y) {
      for (std::size_t k : f) ++seen_y[k];
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_EQ(seen_x[i], 1);
      EXPECT_EQ(seen_y[i], 1);
      EXPECT_TRUE(d.contains(g.nodes[i])) << text;
    }
    ASSERT_FALSE(g.boundary_samples.empty());
    if (d.is_ball()) {
      double worst = 0.0;
      const auto& b = g.boundary_samples;
      for (std::size_t k = 0; k < b.size(); ++k) {
        const auto& q = b[(k + 1) % b.size()];
        worst = std::max(worst, std::hypot(q.x - b[k].x, q.y - b[k].y));
      }
      EXPECT_LE(worst, 2.0 * spacing);
    }
  }
}

TEST(BuildGrid, RectangleNodesKeepHalfCellFromBoundary) {
  const Grid g = build_grid(DomainSpec::rectangle(1.0, 0.5), 0.1, 0.01);
  for (const auto& q : g.nodes) {
    EXPECT_GE(1.0 - std::abs(q.x), 0.05 - 1e-12);
    EXPECT_GE(0.5 - std::abs(q.y), 0.05 - 1e-12);
  }
}

TEST(BuildGrid, Deterministic) {
  const Grid a = build_grid(DomainSpec::ball(1.0), 0.1, 0.01);
  const Grid b = build_grid(DomainSpec::ball(1.0), 0.1, 0.01);
  EXPECT_TRUE(a.same_layout(b));
}

TEST(BoundaryMin, BallCenter) {
  const DomainSpec d = DomainSpec::ball(1.0);
  EXPECT_NEAR(boundary_min_s_exact(d, {0, 0}, 0.5), 1.0, 1e-12);
  // Dense sampling of the circle as an independent check.
  std::vector<Point2> circle;
  for (int k = 0; k < 10000; ++k) {
    const double t = 2.0 * 3.14159265358979323846 * k / 10000;
    circle.push_back({std::cos(t), std::sin(t)});
  }
  EXPECT_NEAR(boundary_min_s(d, {0, 0}, 0.5, circle), 1.0, 1e-9);
}

TEST(BoundaryMin, RectangleCenterL1) {
  const DomainSpec d = DomainSpec::rectangle(1.0, 0.5);
  EXPECT_DOUBLE_EQ(boundary_min_s_exact(d, {0, 0}, 1.0), 0.5);
}

TEST(BoundaryMin, SampledMatchesL1Definition) {
  const DomainSpec d = DomainSpec::ball(1.0);
  const auto samples = d.sample_boundary(0.05);
  const Point2 q{0.2, -0.3};
  double want = 1e300;
  for (const auto& z : samples) want = std::min(want, std::abs(q.x - z.x) + std::abs(q.y - z.y));
  EXPECT_DOUBLE_EQ(boundary_min_s(d, q, 1.0, samples), want);
}

TEST(BoundaryMin, ExactAgreesWithSampling) {
  for (const char* text : {"ball:1", "rect:1,0.5", "rectunion:1,0.25,0,0;0.25,1,0,0"}) {
    const DomainSpec d = parse_domain(text);
    const double spacing = 1e-3;
    const auto samples = d.sample_boundary(spacing);
    const Grid g = build_grid(d, 0.1, spacing);
    for (double s : {0.3, 0.5, 1.0}) {
      const double err = std::pow(spacing, s);
      for (std::size_t i = 0; i < g.size(); i += 7) {
        const double exact = boundary_min_s_exact(d, g.nodes[i], s);
        const double sampled = boundary_min_s(d, g.nodes[i], s, samples);
        EXPECT_LE(exact, sampled + 1e-12) << text;
        EXPECT_LE(sampled - exact, 10.0 * err) << text << " s=" << s;
      }
    }
  }
}

TEST(ComputeRs, BallIsRadiusToTheS) {
  const double spacing = ball_spacing_for_samples(1.0, 720);
  const DomainSpec d = DomainSpec::ball(1.0);
  const Grid g = build_grid(d, 0.02, spacing);
  for (double s : {0.3, 0.5, 0.8}) {
    EXPECT_NEAR(lambda_infinity(d, s, g), 1.0, 2e-2) << s;
  }
  const DomainSpec d2 = DomainSpec::ball(2.0);
  const Grid g2 = build_grid(d2, 0.04, ball_spacing_for_samples(2.0, 720));
  EXPECT_NEAR(compute_Rs(d2, 0.5, g2).R_s, std::sqrt(2.0), 2e-2);
}

TEST(ComputeRs, ArgmaxNearBallCenter) {
  const DomainSpec d = DomainSpec::ball(1.0);
  const GeoResult r = compute_Rs(d, 0.5, build_grid(d, 0.05, 0.01));
  EXPECT_LE(std::hypot(r.argmax_point.x, r.argmax_point.y), 0.1);
  EXPECT_GT(r.R_s, 0.0);
}

TEST(ComputeRs, RectangleS1IsHalfHeight) {
  const DomainSpec d = DomainSpec::rectangle(1.0, 0.5);
  const Grid g = build_grid(d, 1.0 / 64, 0.01);
  EXPECT_NEAR(lambda_infinity(d, 1.0, g), 2.0, 0.1);
}

TEST(ComputeRs, NestedBallsMonotone) {
  const Grid small = build_grid(DomainSpec::ball(0.5), 0.05, 0.01);
  const Grid big = build_grid(DomainSpec::ball(1.0), 0.05, 0.01);
  for (double s : {0.3, 0.7}) {
    EXPECT_LE(compute_Rs(DomainSpec::ball(0.5), s, small).R_s,
              compute_Rs(DomainSpec::ball(1.0), s, big).R_s);
  }
}

TEST(ComputeRs, SampledS1EqualsBruteForce) {
  const DomainSpec d = DomainSpec::ball(1.0);
  const Grid g = build_grid(d, 0.1, 0.05);
  const GeoResult r = compute_Rs(d, 1.0, g, BoundaryMethod::sampled);
  EXPECT_EQ(r.R_s, oracle::brute_Rs(g.nodes, g.boundary_samples, 1.0));
}

TEST(ComputeRs, NestedSamplesDecreaseToExact) {
  // Doubling the sample count keeps the old samples, so each node's minimum
  // can only drop, and it stays above the exact boundary minimum.
  const DomainSpec d = DomainSpec::ball(1.0);
  double prev = 1e300;
  double exact = 0.0;
  for (int samples : {90, 180, 360, 720, 1440, 2880}) {
    const Grid g = build_grid(d, 0.1, ball_spacing_for_samples(1.0, samples));
    exact = compute_Rs(d, 0.5, g).R_s;
    const double rs = compute_Rs(d, 0.5, g, BoundaryMethod::sampled).R_s;
    EXPECT_LE(rs, prev + 1e-12) << samples;
    EXPECT_GE(rs, exact - 1e-12) << samples;
    prev = rs;
  }
  EXPECT_LT(prev - exact, 0.02);
}

TEST(ComputeRs, TieBreakIsFirstNode) {
  // Symmetric rectangle: many maximizers; the first in row-major order wins.
  const DomainSpec d = DomainSpec::rectangle(1.0, 0.5);
  const Grid g = build_grid(d, 0.25, 0.01);
  const GeoResult r = compute_Rs(d, 0.5, g);
  for (std::size_t i = 0; i < r.argmax_node; ++i) {
    EXPECT_LT(boundary_min_s_exact(d, g.nodes[i], 0.5), r.R_s);
  }
}
