#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pgirth/generators.hpp"
#include "pgirth/io.hpp"
#include "pgirth/planar_graph.hpp"

namespace pgirth::testing {

inline PlanarGraph<std::int64_t> make(const GenSpec& s) { return gen(s).to_graph<std::int64_t>(); }

inline GenSpec grid(int r, int c, std::uint64_t seed, Safety safety = Safety::Screened) {
  GenSpec s;
  s.shape = Shape::Grid;
  s.rows = r;
  s.cols = c;
  s.seed = seed;
  s.safety = safety;
  return s;
}

inline GenSpec wheel(int k, std::uint64_t seed, Safety safety = Safety::Screened) {
  GenSpec s;
  s.shape = Shape::Wheel;
  s.k = k;
  s.seed = seed;
  s.safety = safety;
  return s;
}

inline GenSpec nested(int n, std::uint64_t seed, Safety safety = Safety::Screened) {
  GenSpec s;
  s.shape = Shape::Nested;
  s.n = n;
  s.seed = seed;
  s.safety = safety;
  return s;
}

// Mixed shapes and orientations with about n vertices.
inline GenSpec random_spec(std::mt19937_64& rng, int n_lo, int n_hi) {
  int n = std::uniform_int_distribution<int>(n_lo, n_hi)(rng);
  int kind = static_cast<int>(rng() % 3);
  GenSpec s;
  s.seed = rng();
  if (kind == 0) {
    int r = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(n))));
    s = grid(r, std::max(2, n / r), s.seed);
  } else if (kind == 1) {
    s = wheel(std::max(3, n - 1), s.seed);
  } else {
    s = nested(std::max(3, n), s.seed);
  }
  static constexpr Orientation kOrient[4] = {Orientation::Both, Orientation::Random, Orientation::Random,
                                             Orientation::Acyclic};
  s.orientation = kOrient[rng() % 4];
  return s;
}

struct Point {
  double x;
  double y;
};

// Straight-line embedding: rotations sorted clockwise by angle.  Parallel arcs
// between the same pair are nested so that they bound digon faces.
template <typename Scalar = std::int64_t>
PlanarGraph<Scalar> from_points(const std::vector<Point>& pts, const std::vector<ArcSpec<Scalar>>& arcs) {
  const int n = static_cast<int>(pts.size());
  struct End {
    double angle;
    int order;
    Endpoint ep;
  };
  std::vector<std::vector<End>> at(n);
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
    VertexId u = arcs[a].tail, v = arcs[a].head;
    double au = std::atan2(pts[v].y - pts[u].y, pts[v].x - pts[u].x);
    double av = std::atan2(pts[u].y - pts[v].y, pts[u].x - pts[v].x);
    at[u].push_back({au, u < v ? a : -a, {a, false}});
    at[v].push_back({av, v < u ? a : -a, {a, true}});
  }
  std::vector<std::vector<Endpoint>> rot(n);
  for (int v = 0; v < n; ++v) {
    std::sort(at[v].begin(), at[v].end(), [](const End& a, const End& b) {
      if (a.angle != b.angle) return a.angle > b.angle;
      return a.order < b.order;
    });
    for (const End& e : at[v]) rot[v].push_back(e.ep);
  }
  return build_graph<Scalar>(n, arcs, rot);
}

inline PlanarGraph<std::int64_t> directed_triangle(std::int64_t a = 1, std::int64_t b = 2, std::int64_t c = 3) {
  return from_points({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, a}, {1, 2, b}, {2, 0, c}});
}

inline int face_count(const Embedding& e) { return e.trace_faces().num_faces; }

}  // namespace pgirth::testing
