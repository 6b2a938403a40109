#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <queue>
#include <variant>
#include <vector>

#include "pgirth/planar_graph.hpp"
#include "pgirth/types.hpp"

namespace pgirth {

template <typename Scalar>
struct WeightedArc {
  VertexId tail;
  VertexId head;
  Scalar weight;
};

// Static digraph with out-adjacency in CSR form; arc indices are preserved.
template <typename Scalar>
class Digraph {
 public:
  Digraph() = default;
  Digraph(int n, std::vector<WeightedArc<Scalar>> arcs) : n_(n), arcs_(std::move(arcs)) {
    start_.assign(n_ + 1, 0);
    for (const auto& a : arcs_) {
      if (a.tail < 0 || a.tail >= n_ || a.head < 0 || a.head >= n_)
        throw DanglingReference("arc endpoint out of range");
      ++start_[a.tail + 1];
    }
    for (int v = 0; v < n_; ++v) start_[v + 1] += start_[v];
    out_.resize(arcs_.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < arcs_.size(); ++i) out_[fill[arcs_[i].tail]++] = static_cast<ArcId>(i);
  }

  static Digraph from_graph(const PlanarGraph<Scalar>& g) {
    std::vector<WeightedArc<Scalar>> arcs;
    arcs.reserve(g.num_arcs());
    for (const auto& a : g.arcs()) arcs.push_back({a.tail, a.head, a.weight});
    return Digraph(g.num_vertices(), std::move(arcs));
  }

  int num_vertices() const { return n_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  const WeightedArc<Scalar>& arc(ArcId a) const { return arcs_[a]; }
  const std::vector<WeightedArc<Scalar>>& arcs() const { return arcs_; }

  template <typename F>
  void for_out(VertexId v, F f) const {
    for (int i = start_[v]; i < start_[v + 1]; ++i) f(out_[i]);
  }

  Scalar weight_scale() const {
    Scalar s = Scalar(0);
    for (const auto& a : arcs_) s += abs_weight(a.weight);
    return s;
  }

 private:
  int n_ = 0;
  std::vector<WeightedArc<Scalar>> arcs_;
  std::vector<int> start_;
  std::vector<ArcId> out_;
};

template <typename Scalar>
struct SsspResult {
  std::vector<Scalar> dist;     // infinity<Scalar>() when unreachable
  std::vector<ArcId> parent;    // kNone at the source and unreachable vertices
  VertexId source = kNone;      // kNone for the virtual super-source

  bool reachable(VertexId v) const { return !is_infinite(dist[v]); }

  std::vector<ArcId> path_to(VertexId v, const Digraph<Scalar>& g) const {
    std::vector<ArcId> p;
    if (!reachable(v)) return p;
    while (parent[v] != kNone) {
      p.push_back(parent[v]);
      v = g.arc(parent[v]).tail;
    }
    std::reverse(p.begin(), p.end());
    return p;
  }
};

template <typename Scalar>
struct NegativeCycle {
  std::vector<ArcId> arcs;  // closed walk in order
  Scalar weight = Scalar(0);
};

// A feasible potential: p(u) + w(u,v) - p(v) >= 0 for every arc.
template <typename Scalar>
using PriceFunction = std::vector<Scalar>;

namespace detail {

// Walks the parent graph looking for a cycle; any cycle found there is
// negative.  Returns its arcs in forward order.
template <typename Scalar>
std::optional<std::vector<ArcId>> parent_cycle(const Digraph<Scalar>& g, const std::vector<ArcId>& parent) {
  const int n = g.num_vertices();
  std::vector<int> mark(n, 0);
  for (VertexId s = 0; s < n; ++s) {
    if (mark[s]) continue;
    VertexId v = s;
    while (v != kNone && mark[v] == 0) {
      mark[v] = s + 1;
      v = parent[v] == kNone ? kNone : g.arc(parent[v]).tail;
    }
    if (v != kNone && mark[v] == s + 1) {
      std::vector<ArcId> cyc;
      VertexId u = v;
      do {
        cyc.push_back(parent[u]);
        u = g.arc(parent[u]).tail;
      } while (u != v);
      std::reverse(cyc.begin(), cyc.end());
      return cyc;
    }
    // Mark the remainder of the stretch so it is not revisited.
    for (VertexId u = s; u != kNone && mark[u] == s + 1;) {
      mark[u] = -1;
      u = parent[u] == kNone ? kNone : g.arc(parent[u]).tail;
    }
  }
  return std::nullopt;
}

template <typename Scalar>
std::variant<SsspResult<Scalar>, NegativeCycle<Scalar>> bellman_ford(const Digraph<Scalar>& g,
                                                                     VertexId source) {
  const int n = g.num_vertices();
  SsspResult<Scalar> r;
  r.source = source;
  r.dist.assign(n, infinity<Scalar>());
  r.parent.assign(n, kNone);
  std::vector<char> queued(n, 0);
  std::deque<VertexId> q;
  if (source == kNone) {
    for (VertexId v = 0; v < n; ++v) {
      r.dist[v] = Scalar(0);
      q.push_back(v);
      queued[v] = 1;
    }
  } else {
    r.dist[source] = Scalar(0);
    q.push_back(source);
    queued[source] = 1;
  }
  long long relaxations = 0;
  const long long check_every = std::max(1, n);
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop_front();
    queued[u] = 0;
    const Scalar du = r.dist[u];
    g.for_out(u, [&](ArcId a) {
      const auto& arc = g.arc(a);
      Scalar cand = du + arc.weight;
      if (cand < r.dist[arc.head]) {
        r.dist[arc.head] = cand;
        r.parent[arc.head] = a;
        if (!queued[arc.head]) {
          queued[arc.head] = 1;
          q.push_back(arc.head);
        }
        ++relaxations;
      }
    });
    if (relaxations >= check_every) {
      relaxations = 0;
      if (auto cyc = parent_cycle(g, r.parent)) {
        NegativeCycle<Scalar> nc;
        nc.arcs = std::move(*cyc);
        for (ArcId a : nc.arcs) nc.weight += g.arc(a).weight;
        return nc;
      }
    }
  }
  if (auto cyc = parent_cycle(g, r.parent)) {
    NegativeCycle<Scalar> nc;
    nc.arcs = std::move(*cyc);
    for (ArcId a : nc.arcs) nc.weight += g.arc(a).weight;
    return nc;
  }
  return r;
}

}  // namespace detail

// Exact distances from source, or a negative cycle reachable from it.
template <typename Scalar>
std::variant<SsspResult<Scalar>, NegativeCycle<Scalar>> sssp_general(const Digraph<Scalar>& g,
                                                                     VertexId source) {
  if (source < 0 || source >= g.num_vertices()) throw DanglingReference("source out of range");
  return detail::bellman_ford(g, source);
}

template <typename Scalar>
std::optional<NegativeCycle<Scalar>> detect_negative_cycle(const Digraph<Scalar>& g) {
  auto r = detail::bellman_ford(g, kNone);
  if (auto* nc = std::get_if<NegativeCycle<Scalar>>(&r)) return std::move(*nc);
  return std::nullopt;
}

template <typename Scalar>
std::optional<NegativeCycle<Scalar>> detect_negative_cycle(const PlanarGraph<Scalar>& g) {
  return detect_negative_cycle(Digraph<Scalar>::from_graph(g));
}

// Super-source distances; zero when no arc is negative.  Throws
// NegativeCycleFound.
template <typename Scalar>
PriceFunction<Scalar> price_function(const Digraph<Scalar>& g) {
  bool nonneg = true;
  for (const auto& a : g.arcs()) nonneg = nonneg && !(a.weight < Scalar(0));
  if (nonneg) return PriceFunction<Scalar>(g.num_vertices(), Scalar(0));
  auto r = detail::bellman_ford(g, kNone);
  if (std::holds_alternative<NegativeCycle<Scalar>>(r))
    throw NegativeCycleFound("price function requested for a graph with a negative cycle");
  return std::get<SsspResult<Scalar>>(std::move(r)).dist;
}

template <typename Scalar>
PriceFunction<Scalar> price_function(const PlanarGraph<Scalar>& g) {
  return price_function(Digraph<Scalar>::from_graph(g));
}

template <typename Scalar>
Scalar reduced_cost(const PriceFunction<Scalar>& p, const WeightedArc<Scalar>& a) {
  return p[a.tail] + a.weight - p[a.head];
}

template <typename Scalar>
bool is_feasible(const Digraph<Scalar>& g, const PriceFunction<Scalar>& p) {
  const Scalar tol = WeightTraits<Scalar>::tolerance(g.weight_scale());
  for (const auto& a : g.arcs())
    if (reduced_cost(p, a) < -tol) return false;
  return true;
}

// Heap Dijkstra on reduced costs; distances are reported in original weights.
// When stop_at is non-empty the search ends once all of those are settled.
template <typename Scalar>
SsspResult<Scalar> dijkstra(const Digraph<Scalar>& g, VertexId source, const PriceFunction<Scalar>& prices,
                            const std::vector<VertexId>& stop_at = {}) {
  const int n = g.num_vertices();
  if (source < 0 || source >= n) throw DanglingReference("source out of range");
  const Scalar tol = WeightTraits<Scalar>::tolerance(g.weight_scale());
  std::vector<Scalar> rd(n, infinity<Scalar>());
  SsspResult<Scalar> r;
  r.source = source;
  r.parent.assign(n, kNone);
  std::vector<char> done(n, 0);
  std::vector<char> target;
  int remaining = 0;
  if (!stop_at.empty()) {
    target.assign(n, 0);
    for (VertexId t : stop_at)
      if (!target[t]) { target[t] = 1; ++remaining; }
  }
  using Item = std::pair<Scalar, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  rd[source] = Scalar(0);
  heap.push({Scalar(0), source});
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (done[u] || du > rd[u]) continue;
    done[u] = 1;
    if (!target.empty() && target[u] && --remaining == 0) break;
    g.for_out(u, [&](ArcId a) {
      const auto& arc = g.arc(a);
      Scalar c = reduced_cost(prices, arc);
      if (c < Scalar(0)) {
        if (c < -tol) throw InfeasiblePrices("negative reduced cost on arc " + std::to_string(a));
        c = Scalar(0);
      }
      Scalar cand = du + c;
      if (cand < rd[arc.head]) {
        rd[arc.head] = cand;
        r.parent[arc.head] = a;
        heap.push({cand, arc.head});
      }
    });
  }
  r.dist.assign(n, infinity<Scalar>());
  for (VertexId v = 0; v < n; ++v)
    if (done[v]) r.dist[v] = rd[v] - prices[source] + prices[v];
    else r.parent[v] = kNone;
  return r;
}

}  // namespace pgirth
