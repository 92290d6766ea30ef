#pragma once

// Reference computations written straight from the definitions. They share
// nothing with the library except the Grid node list.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "pseudofrac/geometry.hpp"

namespace oracle {

using pseudofrac::Grid;

/// Chord of a line through the domain: (lo, hi) for convex domains.
using ChordFn = std::function<std::pair<double, double>(bool along_x, double level)>;

inline ChordFn ball_chords(double r, double cx = 0.0, double cy = 0.0) {
  return [=](bool along_x, double level) {
    const double off = along_x ? level - cy : level - cx;
    const double half = std::sqrt(r * r - off * off);
    const double c = along_x ? cx : cy;
    return std::make_pair(c - half, c + half);
  };
}

inline ChordFn rect_chords(double hx, double hy, double cx = 0.0, double cy = 0.0) {
  return [=](bool along_x, double) {
    return along_x ? std::make_pair(cx - hx, cx + hx) : std::make_pair(cy - hy, cy + hy);
  };
}

/// Whole-space anisotropic seminorm [u]^p on a convex domain. Ordered pairs on
/// each grid line, analytic tails over the two exterior half-lines counted for
/// both orderings, and with `self_cell` the near-diagonal strip |r| < h/2
/// integrated against the difference quotient to the lattice neighbour (or to
/// the zero ghost past the end of a run).
inline double seminorm(const Grid& g, const std::vector<double>& u, double s, double p,
                       bool self_cell, const ChordFn& chord) {
  const double sp = s * p;
  const double area = g.hx * g.hy;
  double total = 0.0;
  for (const bool along_x : {true, false}) {
    const double h = along_x ? g.hx : g.hy;
    std::map<std::pair<int, int>, std::size_t> at;
    for (std::size_t i = 0; i < g.size(); ++i) at[{g.ix[i], g.iy[i]}] = i;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double ti = along_x ? g.nodes[i].x : g.nodes[i].y;
      const double level = along_x ? g.nodes[i].y : g.nodes[i].x;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (k == i) continue;
        const bool same_line = along_x ? g.iy[k] == g.iy[i] : g.ix[k] == g.ix[i];
        if (!same_line) continue;
        const double tk = along_x ? g.nodes[k].x : g.nodes[k].y;
        total += std::pow(std::abs(u[i] - u[k]), p) * h * area / std::pow(std::abs(ti - tk), 1.0 + sp);
      }
      const auto [lo, hi] = chord(along_x, level);
      const double tail = (std::pow(ti - lo, -sp) + std::pow(hi - ti, -sp)) / sp;
      total += 2.0 * std::pow(std::abs(u[i]), p) * tail * area;
      if (self_cell) {
        const double a = p * (1.0 - s);
        const double w = 2.0 * std::pow(h / 2.0, a) / a * std::pow(h, -p) * area;
        for (const int step : {-1, 1}) {
          const auto key = along_x ? std::make_pair(g.ix[i] + step, g.iy[i])
                                   : std::make_pair(g.ix[i], g.iy[i] + step);
          const auto it = at.find(key);
          const double other = it == at.end() ? 0.0 : u[it->second];
          // Interior edges are visited from both ends; count them once.
          const double share = it == at.end() ? 1.0 : 0.5;
          total += share * w * std::pow(std::abs(u[i] - other), p);
        }
      }
    }
  }
  return total;
}

/// 5-point Dirichlet Laplacian on the grid lattice: missing lattice neighbours
/// are zero ghosts one spacing away.
inline Eigen::MatrixXd fd_laplacian(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  std::map<std::pair<int, int>, Eigen::Index> at;
  for (std::size_t i = 0; i < g.size(); ++i) at[{g.ix[i], g.iy[i]}] = static_cast<Eigen::Index>(i);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const double cx = 1.0 / (g.hx * g.hx);
  const double cy = 1.0 / (g.hy * g.hy);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, r) = 2.0 * cx + 2.0 * cy;
    const std::pair<int, int> nbrs[] = {{g.ix[i] - 1, g.iy[i]}, {g.ix[i] + 1, g.iy[i]},
                                        {g.ix[i], g.iy[i] - 1}, {g.ix[i], g.iy[i] + 1}};
    for (int k = 0; k < 4; ++k) {
      const auto it = at.find(nbrs[k]);
      if (it != at.end()) a(r, it->second) = -(k < 2 ? cx : cy);
    }
  }
  return a;
}

inline double smallest_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Closed form for a full nx-by-ny lattice with zero ghosts.
inline double fd_laplacian_closed_form(int nx, int ny, double hx, double hy) {
  const double pi = 3.14159265358979323846;
  const double sx = std::sin(pi / (2.0 * (nx + 1)));
  const double sy = std::sin(pi / (2.0 * (ny + 1)));
  return 4.0 * sx * sx / (hx * hx) + 4.0 * sy * sy / (hy * hy);
}

/// max over nodes of min over samples of |x - z|^s + |y - w|^s.
inline double brute_Rs(const std::vector<pseudofrac::Point2>& nodes,
                       const std::vector<pseudofrac::Point2>& samples, double s) {
  double best = 0.0;
  for (const auto& q : nodes) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& z : samples) {
      m = std::min(m, std::pow(std::abs(q.x - z.x), s) + std::pow(std::abs(q.y - z.y), s));
    }
    best = std::max(best, m);
  }
  return best;
}

}  // namespace oracle
