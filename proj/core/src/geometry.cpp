#include "pseudofrac/geometry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "pseudofrac/errors.hpp"

namespace pseudofrac {
namespace {

constexpr double kRelTol = 1e-12;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + " must be positive and finite");
  }
}

bool boxes_touch(const Box& a, const Box& b, double tol) {
  return a.xlo <= b.xhi + tol && b.xlo <= a.xhi + tol && a.ylo <= b.yhi + tol &&
         b.ylo <= a.yhi + tol;
}

bool box_contains_point(const Box& b, double x, double y, double tol) {
  return b.xlo - tol <= x && x <= b.xhi + tol && b.ylo - tol <= y && y <= b.yhi + tol;
}

std::vector<Interval> merge(std::vector<Interval> pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& piece : pieces) {
    if (!out.empty() && piece.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, piece.hi);
    } else {
      out.push_back(piece);
    }
  }
  return out;
}

double pow_s(double t, double s) { return s == 1.0 ? t : std::pow(t, s); }

double distance_to_interval(double t, double lo, double hi) {
  if (t < lo) return lo - t;
  if (t > hi) return t - hi;
  return 0.0;
}

double domain_scale(const DomainSpec& d) {
  const Box b = d.bounds();
  return std::max({std::abs(b.xlo), std::abs(b.xhi), std::abs(b.ylo), std::abs(b.yhi), 1.0});
}

}  // namespace

DomainSpec::DomainSpec(Shape shape, int n, int m) : shape_(std::move(shape)), n_(n), m_(m) {
  if (n_ < 1 || m_ < 1) {
    throw Error(ErrorKind::invalid_argument, "block dimensions n and m must be at least 1");
  }
}

DomainSpec DomainSpec::ball(double radius, Point2 center, int n, int m) {
  require_positive(radius, "ball radius");
  return DomainSpec(Ball{center, radius}, n, m);
}

DomainSpec DomainSpec::rectangle(double hx, double hy, Point2 center, int n, int m) {
  require_positive(hx, "rectangle half width hx");
  require_positive(hy, "rectangle half width hy");
  return DomainSpec(Rectangle{center, hx, hy}, n, m);
}

DomainSpec DomainSpec::rect_union(std::vector<Rectangle> parts, int n, int m) {
  if (parts.empty()) {
    throw Error(ErrorKind::invalid_argument, "rectangle union needs at least one member");
  }
  for (const auto& r : parts) {
    require_positive(r.hx, "rectangle half width hx");
    require_positive(r.hy, "rectangle half width hy");
  }
  // Connectivity: flood fill over the "closed boxes intersect" relation.
  std::vector<bool> seen(parts.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (!seen[j] && boxes_touch(parts[i].box(), parts[j].box(), 0.0)) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorKind::invalid_argument, "rectangle union is not connected");
  }
  return DomainSpec(RectUnion{std::move(parts)}, n, m);
}

Box DomainSpec::bounds() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return {b->center.x - b->radius, b->center.x + b->radius, b->center.y - b->radius,
            b->center.y + b->radius};
  }
  if (const auto* r = std::get_if<Rectangle>(&shape_)) return r->box();
  const auto& u = std::get<RectUnion>(shape_);
  Box out = u.parts.front().box();
  for (const auto& r : u.parts) {
    const Box b = r.box();
    out.xlo = std::min(out.xlo, b.xlo);
    out.xhi = std::max(out.xhi, b.xhi);
    out.ylo = std::min(out.ylo, b.ylo);
    out.yhi = std::max(out.yhi, b.yhi);
  }
  return out;
}

double DomainSpec::diameter() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return 2.0 * b->radius;
  if (const auto* r = std::get_if<Rectangle>(&shape_)) return 2.0 * std::hypot(r->hx, r->hy);
  // The diameter of a finite union of boxes is attained between box corners.
  std::vector<Point2> corners;
  for (const auto& r : std::get<RectUnion>(shape_).parts) {
    const Box b = r.box();
    corners.push_back({b.xlo, b.ylo});
    corners.push_back({b.xlo, b.yhi});
    corners.push_back({b.xhi, b.ylo});
    corners.push_back({b.xhi, b.yhi});
  }
  double d = 0.0;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    for (std::size_t j = i + 1; j < corners.size(); ++j) {
      d = std::max(d, std::hypot(corners[i].x - corners[j].x, corners[i].y - corners[j].y));
    }
  }
  return d;
}

bool DomainSpec::contains(Point2 p) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return std::hypot(p.x - b->center.x, p.y - b->center.y) < b->radius;
  }
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    return std::abs(p.x - r->center.x) < r->hx && std::abs(p.y - r->center.y) < r->hy;
  }
  // Open union of closed boxes: interior points, including shared edges.
  const double eps = 1e-9 * domain_scale(*this);
  const auto& parts = std::get<RectUnion>(shape_).parts;
  auto covered = [&](double x, double y) {
    return std::any_of(parts.begin(), parts.end(), [&](const Rectangle& r) {
      return box_contains_point(r.box(), x, y, 0.0);
    });
  };
  return covered(p.x, p.y) && covered(p.x - eps, p.y - eps) && covered(p.x + eps, p.y - eps) &&
         covered(p.x - eps, p.y + eps) && covered(p.x + eps, p.y + eps);
}

bool DomainSpec::contains_box(const Box& box) const {
  const double tol = kRelTol * domain_scale(*this);
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    // Convex: corners suffice.
    const double r2 = b->radius * b->radius * (1.0 + 2.0 * kRelTol);
    for (double x : {box.xlo, box.xhi}) {
      for (double y : {box.ylo, box.yhi}) {
        const double dx = x - b->center.x;
        const double dy = y - b->center.y;
        if (dx * dx + dy * dy > r2) return false;
      }
    }
    return true;
  }
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    const Box rb = r->box();
    return rb.xlo - tol <= box.xlo && box.xhi <= rb.xhi + tol && rb.ylo - tol <= box.ylo &&
           box.yhi <= rb.yhi + tol;
  }
  // Split the query box at every member edge; each sub-box is then either
  // inside some member or not, which its center decides.
  const auto& parts = std::get<RectUnion>(shape_).parts;
  std::vector<double> xs{box.xlo, box.xhi};
  std::vector<double> ys{box.ylo, box.yhi};
  for (const auto& r : parts) {
    const Box b = r.box();
    for (double x : {b.xlo, b.xhi}) {
      if (x > box.xlo + tol && x < box.xhi - tol) xs.push_back(x);
    }
    for (double y : {b.ylo, b.yhi}) {
      if (y > box.ylo + tol && y < box.yhi - tol) ys.push_back(y);
    }
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double cx = 0.5 * (xs[i] + xs[i + 1]);
      const double cy = 0.5 * (ys[j] + ys[j + 1]);
      const double wx = 0.5 * (xs[i + 1] - xs[i]);
      const double wy = 0.5 * (ys[j + 1] - ys[j]);
      const bool inside = std::any_of(parts.begin(), parts.end(), [&](const Rectangle& r) {
        const Box b = r.box();
        return b.xlo - tol <= cx - wx && cx + wx <= b.xhi + tol && b.ylo - tol <= cy - wy &&
               cy + wy <= b.yhi + tol;
      });
      if (!inside) return false;
    }
  }
  return true;
}

std::vector<Interval> DomainSpec::slice_at_y(double y) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const double dy = y - b->center.y;
    if (std::abs(dy) >= b->radius) return {};
    const double half = std::sqrt(b->radius * b->radius - dy * dy);
    return {{b->center.x - half, b->center.x + half}};
  }
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    if (std::abs(y - r->center.y) > r->hy) return {};
    return {{r->center.x - r->hx, r->center.x + r->hx}};
  }
  std::vector<Interval> pieces;
  for (const auto& r : std::get<RectUnion>(shape_).parts) {
    if (std::abs(y - r.center.y) <= r.hy) pieces.push_back({r.center.x - r.hx, r.center.x + r.hx});
  }
  return merge(std::move(pieces));
}

std::vector<Interval> DomainSpec::slice_at_x(double x) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const double dx = x - b->center.x;
    if (std::abs(dx) >= b->radius) return {};
    const double half = std::sqrt(b->radius * b->radius - dx * dx);
    return {{b->center.y - half, b->center.y + half}};
  }
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    if (std::abs(x - r->center.x) > r->hx) return {};
    return {{r->center.y - r->hy, r->center.y + r->hy}};
  }
  std::vector<Interval> pieces;
  for (const auto& r : std::get<RectUnion>(shape_).parts) {
    if (std::abs(x - r.center.x) <= r.hx) pieces.push_back({r.center.y - r.hy, r.center.y + r.hy});
  }
  return merge(std::move(pieces));
}

std::vector<BoundarySegment> DomainSpec::boundary_segments() const {
  if (is_ball()) return {};
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    const Box b = r->box();
    return {{true, b.ylo, b.xlo, b.xhi},
            {true, b.yhi, b.xlo, b.xhi},
            {false, b.xlo, b.ylo, b.yhi},
            {false, b.xhi, b.ylo, b.yhi}};
  }
  const auto& parts = std::get<RectUnion>(shape_).parts;
  const double eps = 1e-9 * domain_scale(*this);
  auto covered = [&](double x, double y) {
    return std::any_of(parts.begin(), parts.end(), [&](const Rectangle& q) {
      return box_contains_point(q.box(), x, y, 0.0);
    });
  };
  std::vector<BoundarySegment> out;
  for (const auto& r : parts) {
    const Box b = r.box();
    struct Side {
      bool horizontal;
      double level, lo, hi, nx, ny;
    };
    const Side sides[] = {{true, b.ylo, b.xlo, b.xhi, 0.0, -1.0},
                          {true, b.yhi, b.xlo, b.xhi, 0.0, 1.0},
                          {false, b.xlo, b.ylo, b.yhi, -1.0, 0.0},
                          {false, b.xhi, b.ylo, b.yhi, 1.0, 0.0}};
    for (const auto& side : sides) {
      std::vector<double> cuts{side.lo, side.hi};
      for (const auto& q : parts) {
        const Box qb = q.box();
        const std::array<double, 2> ends = side.horizontal ? std::array<double, 2>{qb.xlo, qb.xhi}
                                                           : std::array<double, 2>{qb.ylo, qb.yhi};
        for (double c : ends) {
          if (c > side.lo && c < side.hi) cuts.push_back(c);
        }
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        const double px = side.horizontal ? mid : side.level;
        const double py = side.horizontal ? side.level : mid;
        if (covered(px + eps * side.nx, py + eps * side.ny)) continue;
        if (!out.empty() && out.back().horizontal == side.horizontal &&
            out.back().level == side.level && out.back().hi == cuts[k]) {
          out.back().hi = cuts[k + 1];
        } else {
          out.push_back({side.horizontal, side.level, cuts[k], cuts[k + 1]});
        }
      }
    }
  }
  return out;
}

std::vector<Point2> DomainSpec::sample_boundary(double spacing) const {
  require_positive(spacing, "boundary spacing");
  std::vector<Point2> out;
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const double perimeter = 2.0 * std::numbers::pi * b->radius;
    const auto count = std::max<long>(8, static_cast<long>(std::ceil(perimeter / spacing - 1e-9)));
    out.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back({b->center.x + b->radius * std::cos(theta),
                     b->center.y + b->radius * std::sin(theta)});
    }
    return out;
  }
  for (const auto& seg : boundary_segments()) {
    const double len = seg.hi - seg.lo;
    const auto pieces = std::max<long>(1, static_cast<long>(std::ceil(len / spacing - 1e-9)));
    for (long j = 0; j <= pieces; ++j) {
      const double t = seg.lo + len * static_cast<double>(j) / static_cast<double>(pieces);
      out.push_back(seg.horizontal ? Point2{t, seg.level} : Point2{seg.level, t});
    }
  }
  return out;
}

bool DomainSpec::operator==(const DomainSpec& other) const {
  if (n_ != other.n_ || m_ != other.m_ || shape_.index() != other.shape_.index()) return false;
  auto same_rect = [](const Rectangle& a, const Rectangle& b) {
    return a.center.x == b.center.x && a.center.y == b.center.y && a.hx == b.hx && a.hy == b.hy;
  };
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const auto& o = std::get<Ball>(other.shape_);
    return b->radius == o.radius && b->center.x == o.center.x && b->center.y == o.center.y;
  }
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    return same_rect(*r, std::get<Rectangle>(other.shape_));
  }
  const auto& a = std::get<RectUnion>(shape_).parts;
  const auto& b = std::get<RectUnion>(other.shape_).parts;
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), same_rect);
}

// ---------------------------------------------------------------------------
// Domain strings

namespace {

class DomainLexer {
 public:
  explicit DomainLexer(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  double number(const char* what) {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) {
      throw ParseError(pos_, std::string("expected a number for ") + what);
    }
    if (!std::isfinite(value)) throw ParseError(pos_, std::string(what) + " is not finite");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  void expect(char c) {
    if (peek() != c) {
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

DomainSpec parse_domain(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError(text.size(), "expected '<kind>:' prefix (ball, rect, rectunion)");
  }
  const std::string_view kind = text.substr(0, colon);
  DomainLexer lex(text);
  for (std::size_t i = 0; i <= colon; ++i) lex.accept(text[i]);

  auto positive = [&](const char* what) {
    const std::size_t at = lex.pos();
    const double v = lex.number(what);
    if (!(v > 0.0)) throw ParseError(at, std::string(what) + " must be positive");
    return v;
  };

  if (kind == "ball") {
    const double r = positive("radius");
    Point2 c;
    if (lex.accept(':')) {
      c.x = lex.number("center x");
      lex.expect(',');
      c.y = lex.number("center y");
    }
    if (!lex.done()) throw ParseError(lex.pos(), "unexpected trailing characters");
    return DomainSpec::ball(r, c);
  }
  if (kind == "rect") {
    const double hx = positive("half width hx");
    lex.expect(',');
    const double hy = positive("half width hy");
    Point2 c;
    if (lex.accept(':')) {
      c.x = lex.number("center x");
      lex.expect(',');
      c.y = lex.number("center y");
    }
    if (!lex.done()) throw ParseError(lex.pos(), "unexpected trailing characters");
    return DomainSpec::rectangle(hx, hy, c);
  }
  if (kind == "rectunion") {
    std::vector<Rectangle> parts;
    do {
      Rectangle r;
      r.hx = positive("half width hx");
      lex.expect(',');
      r.hy = positive("half width hy");
      lex.expect(',');
      r.center.x = lex.number("center x");
      lex.expect(',');
      r.center.y = lex.number("center y");
      parts.push_back(r);
    } while (lex.accept(';'));
    if (!lex.done()) throw ParseError(lex.pos(), "unexpected trailing characters");
    return DomainSpec::rect_union(std::move(parts));
  }
  throw ParseError(0, "unknown domain kind '" + std::string(kind) + "'");
}

std::string format_domain(const DomainSpec& domain) {
  const auto& shape = domain.shape();
  if (const auto* b = std::get_if<Ball>(&shape)) {
    std::string out = "ball:" + fmt_double(b->radius);
    if (b->center.x != 0.0 || b->center.y != 0.0) {
      out += ":" + fmt_double(b->center.x) + "," + fmt_double(b->center.y);
    }
    return out;
  }
  if (const auto* r = std::get_if<Rectangle>(&shape)) {
    std::string out = "rect:" + fmt_double(r->hx) + "," + fmt_double(r->hy);
    if (r->center.x != 0.0 || r->center.y != 0.0) {
      out += ":" + fmt_double(r->center.x) + "," + fmt_double(r->center.y);
    }
    return out;
  }
  std::string out = "rectunion:";
  bool first = true;
  for (const auto& r : std::get<RectUnion>(shape).parts) {
    if (!first) out += ";";
    first = false;
    out += fmt_double(r.hx) + "," + fmt_double(r.hy) + "," + fmt_double(r.center.x) + "," +
           fmt_double(r.center.y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grid

bool Grid::same_layout(const Grid& other) const {
  return this == &other || (domain == other.domain && hx == other.hx && hy == other.hy &&
                            nodes.size() == other.nodes.size() && nx == other.nx &&
                            ny == other.ny && ix == other.ix && iy == other.iy);
}

Grid build_grid(const DomainSpec& domain, double h, double boundary_spacing) {
  return build_grid(domain, h, h, boundary_spacing);
}

Grid build_grid(const DomainSpec& domain, double hx, double hy, double boundary_spacing) {
  if (domain.n() != 1 || domain.m() != 1) {
    throw Error(ErrorKind::unsupported_dims,
                "only n = m = 1 is discretized (got n=" + std::to_string(domain.n()) +
                    ", m=" + std::to_string(domain.m()) + ")");
  }
  require_positive(hx, "grid spacing hx");
  require_positive(hy, "grid spacing hy");
  require_positive(boundary_spacing, "boundary spacing");

  Grid grid{.domain = domain};
  grid.hx = hx;
  grid.hy = hy;
  const Box b = domain.bounds();
  grid.origin = {b.xlo, b.ylo};
  grid.nx = std::max(1, static_cast<int>(std::ceil((b.xhi - b.xlo) / hx - 1e-9)));
  grid.ny = std::max(1, static_cast<int>(std::ceil((b.yhi - b.ylo) / hy - 1e-9)));

  std::map<int, std::vector<std::size_t>> columns;
  for (int j = 0; j < grid.ny; ++j) {
    std::vector<std::size_t> row;
    const double ylo = b.ylo + j * hy;
    for (int i = 0; i < grid.nx; ++i) {
      const double xlo = b.xlo + i * hx;
      if (!domain.contains_box({xlo, xlo + hx, ylo, ylo + hy})) continue;
      const std::size_t id = grid.nodes.size();
      grid.nodes.push_back({b.xlo + (i + 0.5) * hx, b.ylo + (j + 0.5) * hy});
      grid.ix.push_back(i);
      grid.iy.push_back(j);
      row.push_back(id);
      columns[i].push_back(id);
    }
    if (!row.empty()) {
      grid.slices_x.push_back(domain.slice_at_y(grid.nodes[row.front()].y));
      grid.fibers_x.push_back(std::move(row));
    }
  }
  if (grid.nodes.empty()) {
    throw Error(ErrorKind::empty_grid, "no lattice cell of size " + fmt_double(hx) + " x " +
                                           fmt_double(hy) + " fits inside " +
                                           format_domain(domain));
  }
  for (auto& [i, col] : columns) {
    grid.slices_y.push_back(domain.slice_at_x(grid.nodes[col.front()].x));
    grid.fibers_y.push_back(std::move(col));
  }
  grid.boundary_spacing = boundary_spacing;
  grid.boundary_samples = domain.sample_boundary(boundary_spacing);
  return grid;
}

double ball_spacing_for_samples(double radius, int count) {
  require_positive(radius, "radius");
  if (count < 8) throw Error(ErrorKind::invalid_argument, "need at least 8 boundary samples");
  return 2.0 * std::numbers::pi * radius / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Max-min geometry

double boundary_min_s(const DomainSpec& domain, Point2 point, double s,
                      std::span<const Point2> samples) {
  (void)domain;
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::invalid_argument, "s must lie in (0,1]");
  if (samples.empty()) throw Error(ErrorKind::invalid_argument, "no boundary samples");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : samples) {
    best = std::min(best, pow_s(std::abs(point.x - q.x), s) + pow_s(std::abs(point.y - q.y), s));
  }
  return best;
}

namespace {

double exact_min(const DomainSpec& domain, std::span<const BoundarySegment> segments, Point2 point,
                 double s) {
  const auto& shape = domain.shape();
  if (const auto* b = std::get_if<Ball>(&shape)) {
    const double dx = point.x - b->center.x;
    const double dy = point.y - b->center.y;
    const double r2 = b->radius * b->radius;
    const double half_h = std::sqrt(std::max(0.0, r2 - dy * dy));
    const double half_v = std::sqrt(std::max(0.0, r2 - dx * dx));
    const double ray = std::min({half_h - dx, half_h + dx, half_v - dy, half_v + dy});
    return pow_s(std::max(0.0, ray), s);
  }
  if (const auto* r = std::get_if<Rectangle>(&shape)) {
    const double ray = std::min(r->hx - std::abs(point.x - r->center.x),
                                r->hy - std::abs(point.y - r->center.y));
    return pow_s(std::max(0.0, ray), s);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : segments) {
    const double along = seg.horizontal ? distance_to_interval(point.x, seg.lo, seg.hi)
                                        : distance_to_interval(point.y, seg.lo, seg.hi);
    const double across = seg.horizontal ? std::abs(point.y - seg.level)
                                          : std::abs(point.x - seg.level);
    best = std::min(best, pow_s(along, s) + pow_s(across, s));
  }
  return best;
}

}  // namespace

double boundary_min_s_exact(const DomainSpec& domain, Point2 point, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::invalid_argument, "s must lie in (0,1]");
  const auto segments = domain.boundary_segments();
  return exact_min(domain, segments, point, s);
}

GeoResult compute_Rs(const DomainSpec& domain, double s, const Grid& grid, BoundaryMethod method) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::invalid_argument, "s must lie in (0,1]");
  if (grid.nodes.empty()) throw Error(ErrorKind::empty_grid, "grid has no nodes");
  GeoResult out;
  out.s = s;
  out.R_s = -1.0;
  const auto segments = domain.boundary_segments();
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double v = method == BoundaryMethod::exact
                         ? exact_min(domain, segments, grid.nodes[i], s)
                         : boundary_min_s(domain, grid.nodes[i], s, grid.boundary_samples);
    if (v > out.R_s) {
      out.R_s = v;
      out.argmax_node = i;
      out.argmax_point = grid.nodes[i];
    }
  }
  return out;
}

double lambda_infinity(const DomainSpec& domain, double s, const Grid& grid,
                       BoundaryMethod method) {
  return 1.0 / compute_Rs(domain, s, grid, method).R_s;
}

}  // namespace pseudofrac
