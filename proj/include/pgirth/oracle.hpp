#pragma once

#include <algorithm>
#include <optional>
#include <variant>
#include <vector>

#include "pgirth/planar_graph.hpp"
#include "pgirth/types.hpp"

namespace pgirth {

inline constexpr int kOracleCap = 1024;

template <typename Scalar>
struct DistanceTable {
  Matrix<Scalar> dist;   // infinity<Scalar>() when unreachable
  Eigen::MatrixXi next;  // first arc index on a shortest u -> v path, -1 if none

  int size() const { return static_cast<int>(dist.rows()); }
};

struct OracleNegativeCycle {
  VertexId vertex = kNone;  // a vertex on a negative closed walk
};

template <typename Scalar>
struct CycleWitness {
  std::vector<ArcId> arcs;
  Scalar weight = Scalar(0);
};

template <typename Scalar>
struct OracleArc {
  VertexId tail;
  VertexId head;
  Scalar weight;
};

template <typename Scalar>
std::vector<OracleArc<Scalar>> oracle_arcs(const PlanarGraph<Scalar>& g) {
  std::vector<OracleArc<Scalar>> out;
  out.reserve(g.num_arcs());
  for (const auto& a : g.arcs()) out.push_back({a.tail, a.head, a.weight});
  return out;
}

// Floyd-Warshall over an arc list.  Loop arcs take part like any other arc.
template <typename Scalar>
std::variant<DistanceTable<Scalar>, OracleNegativeCycle> oracle_apsp(int n, const std::vector<OracleArc<Scalar>>& arcs,
                                                                     int cap = kOracleCap) {
  if (n > cap) throw CapExceeded("oracle limited to " + std::to_string(cap) + " vertices");
  const Scalar inf = infinity<Scalar>();
  DistanceTable<Scalar> t;
  t.dist = Matrix<Scalar>::Constant(n, n, inf);
  t.next = Eigen::MatrixXi::Constant(n, n, -1);
  for (int v = 0; v < n; ++v) t.dist(v, v) = Scalar(0);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const auto& arc = arcs[a];
    if (arc.weight < t.dist(arc.tail, arc.head)) {
      t.dist(arc.tail, arc.head) = arc.weight;
      t.next(arc.tail, arc.head) = static_cast<int>(a);
    }
  }
  for (int v = 0; v < n; ++v)
    if (t.dist(v, v) < Scalar(0)) return OracleNegativeCycle{v};
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const Scalar dkj = t.dist(k, j);
      if (is_infinite(dkj)) continue;
      for (int i = 0; i < n; ++i) {
        const Scalar dik = t.dist(i, k);
        if (is_infinite(dik)) continue;
        if (dik + dkj < t.dist(i, j)) {
          t.dist(i, j) = dik + dkj;
          t.next(i, j) = t.next(i, k);
        }
      }
    }
    for (int v = 0; v < n; ++v)
      if (t.dist(v, v) < Scalar(0)) return OracleNegativeCycle{v};
  }
  return t;
}

template <typename Scalar>
std::variant<DistanceTable<Scalar>, OracleNegativeCycle> oracle_apsp(const PlanarGraph<Scalar>& g,
                                                                     int cap = kOracleCap) {
  return oracle_apsp(g.num_vertices(), oracle_arcs(g), cap);
}

namespace detail {

template <typename Scalar>
struct OracleBest {
  bool found = false;
  Scalar weight = Scalar(0);
  int arc = -1;
};

template <typename Scalar>
OracleBest<Scalar> oracle_best(const DistanceTable<Scalar>& t, const std::vector<OracleArc<Scalar>>& arcs) {
  OracleBest<Scalar> b;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const auto& arc = arcs[a];
    Scalar back = arc.tail == arc.head ? Scalar(0) : t.dist(arc.head, arc.tail);
    if (is_infinite(back)) continue;
    Scalar w = back + arc.weight;
    if (!b.found || w < b.weight) {
      b.found = true;
      b.weight = w;
      b.arc = static_cast<int>(a);
    }
  }
  return b;
}

}  // namespace detail

template <typename Scalar>
GirthValue<Scalar> oracle_girth(int n, const std::vector<OracleArc<Scalar>>& arcs, int cap = kOracleCap) {
  auto r = oracle_apsp(n, arcs, cap);
  if (std::holds_alternative<OracleNegativeCycle>(r)) return GirthValue<Scalar>::minus_infinity();
  auto b = detail::oracle_best(std::get<DistanceTable<Scalar>>(r), arcs);
  if (!b.found) return GirthValue<Scalar>::plus_infinity();
  return GirthValue<Scalar>::finite(b.weight);
}

template <typename Scalar>
GirthValue<Scalar> oracle_girth(const PlanarGraph<Scalar>& g, int cap = kOracleCap) {
  return oracle_girth(g.num_vertices(), oracle_arcs(g), cap);
}

// A cycle attaining the oracle girth.  Arc ids index the given arc list.
template <typename Scalar>
std::optional<CycleWitness<Scalar>> oracle_cycle(int n, const std::vector<OracleArc<Scalar>>& arcs,
                                                 int cap = kOracleCap) {
  auto r = oracle_apsp(n, arcs, cap);
  if (std::holds_alternative<OracleNegativeCycle>(r)) return std::nullopt;
  const auto& t = std::get<DistanceTable<Scalar>>(r);
  auto b = detail::oracle_best(t, arcs);
  if (!b.found) return std::nullopt;
  CycleWitness<Scalar> w;
  w.arcs.push_back(b.arc);
  VertexId v = arcs[b.arc].head;
  const VertexId target = arcs[b.arc].tail;
  while (v != target) {
    int a = t.next(v, target);
    if (a < 0) throw InternalInconsistency("oracle path table is incomplete");
    w.arcs.push_back(a);
    v = arcs[a].head;
  }
  for (int a : w.arcs) w.weight += arcs[a].weight;
  return w;
}

template <typename Scalar>
std::optional<CycleWitness<Scalar>> oracle_cycle(const PlanarGraph<Scalar>& g, int cap = kOracleCap) {
  auto w = oracle_cycle(g.num_vertices(), oracle_arcs(g), cap);
  if (w)
    for (ArcId& a : w->arcs)
      if (g.arc(a).source != kNone) a = g.arc(a).source;
  return w;
}

}  // namespace pgirth
