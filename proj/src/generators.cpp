#include "pgirth/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace pgirth {

namespace {

struct Layout {
  std::vector<std::pair<double, double>> pos;
  std::vector<std::pair<int, int>> edges;
};

Layout grid_layout(int rows, int cols) {
  if (rows < 1 || cols < 1) throw InvalidSpec("grid needs positive dimensions");
  Layout l;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) l.pos.push_back({double(c), -double(r)});
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) l.edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) l.edges.push_back({id(r, c), id(r + 1, c)});
      if (r + 1 < rows && c + 1 < cols) l.edges.push_back({id(r, c), id(r + 1, c + 1)});
    }
  }
  return l;
}

Layout wheel_layout(int k) {
  if (k < 3) throw InvalidSpec("wheel needs at least three rim vertices");
  Layout l;
  l.pos.push_back({0.0, 0.0});
  const double pi = std::acos(-1.0);
  for (int i = 0; i < k; ++i) l.pos.push_back({std::cos(2 * pi * i / k), std::sin(2 * pi * i / k)});
  for (int i = 0; i < k; ++i) {
    l.edges.push_back({0, 1 + i});
    l.edges.push_back({1 + i, 1 + (i + 1) % k});
  }
  return l;
}

// Concentric triangles joined into a triangulation; the last one or two
// vertices sit inside the innermost triangle.
Layout nested_layout(int n) {
  if (n < 3) throw InvalidSpec("nested triangulation needs at least three vertices");
  Layout l;
  const int rings = n / 3;
  const int extra = n - 3 * rings;
  const double pi = std::acos(-1.0);
  auto id = [](int ring, int t) { return 3 * ring + (t % 3); };
  for (int j = 0; j < rings; ++j)
    for (int t = 0; t < 3; ++t) {
      double a = pi / 2 + 2 * pi * t / 3;
      l.pos.push_back({(j + 1) * std::cos(a), (j + 1) * std::sin(a)});
    }
  for (int j = 0; j < rings; ++j) {
    for (int t = 0; t < 3; ++t) {
      l.edges.push_back({id(j, t), id(j, t + 1)});
      if (j + 1 < rings) {
        l.edges.push_back({id(j, t), id(j + 1, t)});
        l.edges.push_back({id(j, t), id(j + 1, t + 1)});
      }
    }
  }
  const int top = id(0, 0), lb = id(0, 1), rb = id(0, 2);
  if (extra == 1) {
    l.pos.push_back({0.0, 0.0});
    int x = 3 * rings;
    for (int v : {top, lb, rb}) l.edges.push_back({x, v});
  } else if (extra == 2) {
    int x1 = 3 * rings, x2 = x1 + 1;
    l.pos.push_back({-0.2, 0.0});
    l.pos.push_back({0.2, 0.1});
    l.edges.push_back({x1, x2});
    l.edges.push_back({x1, top});
    l.edges.push_back({x2, top});
    l.edges.push_back({x1, lb});
    l.edges.push_back({x2, rb});
    l.edges.push_back({x1, rb});
  }
  return l;
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

}  // namespace

int GenSpec::num_vertices() const {
  switch (shape) {
    case Shape::Grid: return rows * cols;
    case Shape::Wheel: return k + 1;
    case Shape::Nested: return n;
  }
  return 0;
}

InputGraph gen(const GenSpec& spec) {
  if (spec.lo > spec.hi) throw InvalidSpec("weight range is empty");
  if (!(spec.negative_fraction >= 0.0 && spec.negative_fraction <= 1.0))
    throw InvalidSpec("negative fraction must lie in [0, 1]");
  Layout l;
  switch (spec.shape) {
    case Shape::Grid: l = grid_layout(spec.rows, spec.cols); break;
    case Shape::Wheel: l = wheel_layout(spec.k); break;
    case Shape::Nested: l = nested_layout(spec.n); break;
  }
  const int n = static_cast<int>(l.pos.size());
  std::mt19937_64 rng(spec.seed);

  std::int64_t P = 0, clo = 0, chi = 0;
  std::vector<std::int64_t> pot(n, 0);
  if (spec.safety == Safety::Screened) {
    P = std::max<std::int64_t>(0, -static_cast<std::int64_t>(spec.lo));
    clo = std::max<std::int64_t>(0, spec.lo + P);
    chi = spec.hi - P;
    if (clo > chi) throw InvalidSpec("weight range too narrow for potential screening");
    for (auto& p : pot) p = uniform(rng, 0, P);
  }
  auto draw = [&](int u, int v) -> std::int64_t {
    if (spec.safety == Safety::Screened) return uniform(rng, clo, chi) + pot[u] - pot[v];
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    bool neg = coin(rng) < spec.negative_fraction;
    std::int64_t nlo = spec.lo, nhi = std::min(spec.hi, -1);
    std::int64_t plo = std::max(spec.lo, 0), phi = spec.hi;
    if (nlo > nhi) neg = false;
    if (plo > phi) neg = true;
    return neg ? uniform(rng, nlo, nhi) : uniform(rng, plo, phi);
  };

  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  if (spec.orientation == Orientation::Acyclic) std::shuffle(rank.begin(), rank.end(), rng);

  InputGraph g;
  g.num_vertices = n;
  g.rotations.assign(n, {});
  // Per vertex, (angle, endpoints in clockwise order) for each incident edge.
  std::vector<std::vector<std::pair<double, std::vector<Endpoint>>>> around(n);
  auto angle = [&](int from, int to) {
    return std::atan2(l.pos[to].second - l.pos[from].second, l.pos[to].first - l.pos[from].first);
  };
  auto add_arc = [&](int u, int v) {
    ArcId id = static_cast<ArcId>(g.arcs.size());
    InputArc a;
    a.tail = u;
    a.head = v;
    a.int_weight = draw(u, v);
    a.real_weight = static_cast<double>(a.int_weight);
    g.arcs.push_back(a);
    return id;
  };
  for (auto [u, v] : l.edges) {
    if (spec.orientation == Orientation::Both) {
      ArcId fwd = add_arc(u, v);
      ArcId back = add_arc(v, u);
      around[u].push_back({angle(u, v), {{back, true}, {fwd, false}}});
      around[v].push_back({angle(v, u), {{fwd, true}, {back, false}}});
    } else {
      bool forward = spec.orientation == Orientation::Random ? (rng() & 1) : rank[u] < rank[v];
      int t = forward ? u : v, h = forward ? v : u;
      ArcId a = add_arc(t, h);
      around[t].push_back({angle(t, h), {{a, false}}});
      around[h].push_back({angle(h, t), {{a, true}}});
    }
  }
  for (int v = 0; v < n; ++v) {
    auto& lst = around[v];
    std::stable_sort(lst.begin(), lst.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& e : lst)
      for (const Endpoint& ep : e.second) g.rotations[v].push_back(ep);
  }
  return g;
}

Shape parse_shape(const std::string& s) {
  if (s == "grid") return Shape::Grid;
  if (s == "wheel") return Shape::Wheel;
  if (s == "nested") return Shape::Nested;
  throw InvalidSpec("unknown shape '" + s + "'");
}

Safety parse_safety(const std::string& s) {
  if (s == "screened") return Safety::Screened;
  if (s == "raw") return Safety::Raw;
  throw InvalidSpec("unknown safety mode '" + s + "'");
}

Orientation parse_orientation(const std::string& s) {
  if (s == "both") return Orientation::Both;
  if (s == "random") return Orientation::Random;
  if (s == "acyclic") return Orientation::Acyclic;
  throw InvalidSpec("unknown orientation '" + s + "'");
}

std::string to_string(Shape s) {
  switch (s) {
    case Shape::Grid: return "grid";
    case Shape::Wheel: return "wheel";
    case Shape::Nested: return "nested";
  }
  return "?";
}

std::string to_string(Safety s) { return s == Safety::Screened ? "screened" : "raw"; }

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::Both: return "both";
    case Orientation::Random: return "random";
    case Orientation::Acyclic: return "acyclic";
  }
  return "?";
}

}  // namespace pgirth
