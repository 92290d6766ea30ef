#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pseudofrac {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Closed interval [lo, hi] on a coordinate line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return lo <= t && t <= hi; }
};

struct Box {
  double xlo = 0.0;
  double xhi = 0.0;
  double ylo = 0.0;
  double yhi = 0.0;
};

struct Ball {
  Point2 center;
  double radius = 1.0;
};

struct Rectangle {
  Point2 center;
  double hx = 1.0;  // half width along x
  double hy = 1.0;  // half width along y

  Box box() const { return {center.x - hx, center.x + hx, center.y - hy, center.y + hy}; }
};

struct RectUnion {
  std::vector<Rectangle> parts;
};

/// Axis-aligned boundary piece. Horizontal when `horizontal` is set: the
/// segment is [lo, hi] x {level}; otherwise {level} x [lo, hi].
struct BoundarySegment {
  bool horizontal = true;
  double level = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Bounded domain in R^{n+m}. Only n = m = 1 is discretized; the block sizes
/// are carried so callers can reject anything else explicitly.
class DomainSpec {
 public:
  using Shape = std::variant<Ball, Rectangle, RectUnion>;

  static DomainSpec ball(double radius, Point2 center = {}, int n = 1, int m = 1);
  static DomainSpec rectangle(double hx, double hy, Point2 center = {}, int n = 1, int m = 1);
  static DomainSpec rect_union(std::vector<Rectangle> parts, int n = 1, int m = 1);

  const Shape& shape() const { return shape_; }
  int n() const { return n_; }
  int m() const { return m_; }

  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
  bool is_convex() const { return !std::holds_alternative<RectUnion>(shape_); }

  Box bounds() const;
  double diameter() const;

  /// Open-set membership.
  bool contains(Point2 p) const;
  /// True when the closed box lies in the closure of the domain.
  bool contains_box(const Box& box) const;

  /// Intersection of the horizontal line at height y with the closed domain,
  /// as sorted disjoint intervals.
  std::vector<Interval> slice_at_y(double y) const;
  /// Intersection of the vertical line at abscissa x with the closed domain.
  std::vector<Interval> slice_at_x(double x) const;

  /// Exact boundary of rectangle kinds as maximal axis-aligned segments.
  /// Empty for balls.
  std::vector<BoundarySegment> boundary_segments() const;

  /// Points on the boundary, uniform in arc length (ball) or per side.
  std::vector<Point2> sample_boundary(double spacing) const;

  bool operator==(const DomainSpec& other) const;

 private:
  DomainSpec(Shape shape, int n, int m);

  Shape shape_;
  int n_ = 1;
  int m_ = 1;
};

/// Parses `ball:R[:cx,cy]`, `rect:hx,hy[:cx,cy]` and
/// `rectunion:hx1,hy1,cx1,cy1;hx2,hy2,cx2,cy2;...`. Throws ParseError carrying
/// the character offset of the problem.
DomainSpec parse_domain(std::string_view text);

/// Canonical string form; parse_domain(format_domain(d)) == d.
std::string format_domain(const DomainSpec& domain);

/// Cell-centered discretization of a domain with unknowns at interior cell
/// centers. Nodes are stored row-major (y outer, x inner).
struct Grid {
  DomainSpec domain;
  double hx = 0.0;
  double hy = 0.0;
  Point2 origin;  // lower-left corner of the lattice (bounding box corner)
  int nx = 0;     // lattice columns
  int ny = 0;     // lattice rows

  std::vector<Point2> nodes;
  std::vector<int> ix;  // lattice column of each node
  std::vector<int> iy;  // lattice row of each node

  /// Node indices of every row (fixed y), ordered by increasing x. Rows
  /// without nodes are omitted.
  std::vector<std::vector<std::size_t>> fibers_x;
  /// Node indices of every column (fixed x), ordered by increasing y.
  std::vector<std::vector<std::size_t>> fibers_y;
  /// Line/domain intersection for each entry of fibers_x (resp. fibers_y).
  std::vector<std::vector<Interval>> slices_x;
  std::vector<std::vector<Interval>> slices_y;

  std::vector<Point2> boundary_samples;
  double boundary_spacing = 0.0;

  std::size_t size() const { return nodes.size(); }
  double cell_area() const { return hx * hy; }
  bool same_layout(const Grid& other) const;
};

/// Builds the cell-centered grid. Keeps a lattice cell only when the whole
/// closed cell lies in the closure of the domain. Throws EmptyGrid or
/// UnsupportedDims.
Grid build_grid(const DomainSpec& domain, double h, double boundary_spacing);
Grid build_grid(const DomainSpec& domain, double hx, double hy, double boundary_spacing);

/// Boundary spacing that yields `count` samples on the perimeter of a ball of
/// the given radius.
double ball_spacing_for_samples(double radius, int count);

struct GeoResult {
  double R_s = 0.0;
  Point2 argmax_point;
  std::size_t argmax_node = 0;
  double s = 1.0;
};

enum class BoundaryMethod {
  exact,    // closed form for balls and axis-aligned polygons
  sampled,  // minimum over the supplied boundary samples
};

/// min over the sample set of |x - z|^s + |y - w|^s.
double boundary_min_s(const DomainSpec& domain, Point2 point, double s,
                      std::span<const Point2> samples);

/// Same quantity over the true boundary. For convex domains the minimum is
/// attained where an axis-parallel ray from the point leaves the domain; for
/// rectangle unions it is the minimum over the boundary segments.
double boundary_min_s_exact(const DomainSpec& domain, Point2 point, double s);

/// R_s = max over grid nodes of the boundary minimum. Ties resolve to the first
/// node in row-major order.
GeoResult compute_Rs(const DomainSpec& domain, double s, const Grid& grid,
                     BoundaryMethod method = BoundaryMethod::exact);

double lambda_infinity(const DomainSpec& domain, double s, const Grid& grid,
                       BoundaryMethod method = BoundaryMethod::exact);

}  // namespace pseudofrac
