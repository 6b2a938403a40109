#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "pgirth/embedding.hpp"
#include "pgirth/planar_graph.hpp"

namespace pgirth {

// Simple cycle in the underlying undirected graph.  The faces of the darts
// vertices[i] -> vertices[i+1] lie on the inside.  Counts include the cycle.
struct SeparatorCycle {
  std::vector<VertexId> vertices;
  int inside_count = 0;
  int outside_count = 0;

  int size() const { return static_cast<int>(vertices.size()); }
  bool empty() const { return vertices.empty(); }
};

struct SeparatorOptions {
  std::uint64_t seed = 0;
  int random_roots = 4;
};

inline int balance_limit(int n) { return (2 * n + 2) / 3; }
inline double size_limit(int n) { return 4.0 * std::sqrt(static_cast<double>(n)); }

// True when both closed sides respect the 2/3 bound and, for n >= 32, the
// cycle has at most 4 sqrt(n) vertices.
bool meets_separator_bounds(const SeparatorCycle& c, int n);

// True when both open sides hold at least one vertex.
inline bool splits_graph(const SeparatorCycle& c, int n) {
  return !c.empty() && c.inside_count < n && c.outside_count < n;
}

// Fundamental-cycle separator over several spanning trees.  Returns the best
// candidate found, which may have an empty open side when no cycle splits the
// graph.  Throws NotTriangulated.
SeparatorCycle cycle_separator(const Embedding& emb, const SeparatorOptions& opt = {});

template <typename Scalar>
SeparatorCycle cycle_separator(const PlanarGraph<Scalar>& g, const SeparatorOptions& opt = {}) {
  return cycle_separator(g.embedding(), opt);
}

// Checks simplicity and adjacency, then recounts both closed sides by
// flooding faces.  Throws InvalidCycle.
SeparatorCycle recount_sides(const Embedding& emb, const std::vector<VertexId>& cycle);

template <typename Scalar>
struct Piece {
  PlanarGraph<Scalar> graph;
  std::vector<VertexId> boundary;    // piece vertex ids in cycle order
  std::vector<VertexId> vertex_map;  // piece vertex -> parent vertex
};

namespace detail {

struct CycleSides {
  std::vector<char> vertex_in;  // 1 inside, 0 outside, 2 on the cycle
  std::vector<char> slot_in;    // 1 inside, 0 outside, 2 on the cycle
  std::vector<DartId> forward;  // dart vertices[i] -> vertices[i+1]
};

CycleSides classify_cycle(const Embedding& emb, const std::vector<VertexId>& cycle);

template <typename Scalar>
Piece<Scalar> extract_piece(const PlanarGraph<Scalar>& g, const CycleSides& sides,
                            const std::vector<VertexId>& cycle, char side, bool cycle_arcs) {
  const Embedding& e = g.embedding();
  const int n = e.num_vertices();
  std::vector<VertexId> vid(n, kNone);
  Piece<Scalar> p;
  for (VertexId v = 0; v < n; ++v) {
    if (sides.vertex_in[v] == side || sides.vertex_in[v] == 2) {
      vid[v] = static_cast<VertexId>(p.vertex_map.size());
      p.vertex_map.push_back(v);
    }
  }
  std::vector<SlotId> sid(e.num_slots(), kNone);
  std::vector<std::array<VertexId, 2>> ends;
  for (SlotId s = 0; s < e.num_slots(); ++s) {
    if (sides.slot_in[s] == side || sides.slot_in[s] == 2) {
      sid[s] = static_cast<SlotId>(ends.size());
      ends.push_back({vid[e.ends(s)[0]], vid[e.ends(s)[1]]});
    }
  }
  std::vector<std::vector<DartId>> rot(p.vertex_map.size());
  for (std::size_t i = 0; i < p.vertex_map.size(); ++i) {
    VertexId v = p.vertex_map[i];
    DartId f = e.first_dart(v);
    if (f == kNone) continue;
    DartId d = f;
    do {
      SlotId s = Embedding::slot_of(d);
      if (sid[s] != kNone) rot[i].push_back(2 * sid[s] + (d & 1));
      d = e.next_cw(d);
    } while (d != f);
  }
  std::vector<Arc<Scalar>> arcs;
  std::vector<ArcId> dart_arc(2 * ends.size(), kNone);
  for (SlotId s = 0; s < e.num_slots(); ++s) {
    if (sid[s] == kNone) continue;
    if (sides.slot_in[s] == 2 && !cycle_arcs) continue;
    for (int k = 0; k < 2; ++k) {
      ArcId a = g.arc_of_dart(2 * s + k);
      if (a == kNone) continue;
      Arc<Scalar> arc = g.arc(a);
      arc.tail = vid[arc.tail];
      arc.head = vid[arc.head];
      dart_arc[2 * sid[s] + k] = static_cast<ArcId>(arcs.size());
      arcs.push_back(arc);
    }
  }
  std::vector<VertexId> labels(p.vertex_map.size());
  for (std::size_t i = 0; i < p.vertex_map.size(); ++i) labels[i] = g.label(p.vertex_map[i]);
  Embedding pe = Embedding::from_rotations(static_cast<int>(p.vertex_map.size()), std::move(ends), rot);
  p.graph = PlanarGraph<Scalar>(std::move(pe), std::move(arcs), std::move(dart_arc), std::move(labels));
  for (VertexId v : cycle) p.boundary.push_back(vid[v]);
  return p;
}

}  // namespace detail

// Cuts g along the cycle.  The first piece holds the closed inside including
// the arcs of the cycle edges; the second piece holds the closed outside and
// keeps the cycle edges only as arc-free embedding slots, so every arc of g
// lands in exactly one piece.
template <typename Scalar>
std::pair<Piece<Scalar>, Piece<Scalar>> split(const PlanarGraph<Scalar>& g, const SeparatorCycle& c) {
  detail::CycleSides sides = detail::classify_cycle(g.embedding(), c.vertices);
  Piece<Scalar> p1 = detail::extract_piece(g, sides, c.vertices, 1, true);
  Piece<Scalar> p2 = detail::extract_piece(g, sides, c.vertices, 0, false);
  return {std::move(p1), std::move(p2)};
}

}  // namespace pgirth
