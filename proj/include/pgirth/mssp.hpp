#pragma once

#include <algorithm>
#include <queue>
#include <utility>
#include <vector>

#include "pgirth/link_cut_tree.hpp"
#include "pgirth/planar_graph.hpp"
#include "pgirth/separator.hpp"
#include "pgirth/shortest_paths.hpp"
#include "pgirth/types.hpp"

namespace pgirth {

enum class MsspMode { Dense, Klein };

template <typename Scalar>
struct BoundaryMatrix {
  std::vector<VertexId> boundary;
  Matrix<Scalar> dist;  // infinity<Scalar>() when unreachable; dist(i, i) = 0

  int size() const { return static_cast<int>(boundary.size()); }
};

struct MsspStats {
  long long pivots = 0;
  int dense_fallbacks = 0;
};

namespace detail {

// Darts e_k of the face walked by the boundary, in walk order, together with
// the boundary index at the tail of each.  Throws BoundaryNotOnOneFace.
inline std::pair<std::vector<DartId>, std::vector<int>> boundary_face_walk(
    const Embedding& emb, const std::vector<VertexId>& boundary) {
  const int m = static_cast<int>(boundary.size());
  auto dart_between = [&](VertexId u, VertexId v) -> DartId {
    DartId f = emb.first_dart(u);
    if (f == kNone) return kNone;
    DartId d = f;
    do {
      if (emb.head(d) == v) return d;
      d = emb.next_cw(d);
    } while (d != f);
    return kNone;
  };
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<DartId> darts(m);
    std::vector<int> idx(m);
    bool ok = true;
    for (int k = 0; k < m && ok; ++k) {
      int i = dir == 0 ? k : (m - k) % m;
      int j = dir == 0 ? (i + 1) % m : (i + m - 1) % m;
      idx[k] = i;
      darts[k] = dart_between(boundary[i], boundary[j]);
      ok = darts[k] != kNone;
    }
    for (int k = 0; k < m && ok; ++k) ok = emb.face_next(darts[k]) == darts[(k + 1) % m];
    if (ok) return {darts, idx};
  }
  throw BoundaryNotOnOneFace("boundary vertices do not bound a single face of the piece");
}

template <typename Scalar>
Digraph<Scalar> piece_digraph(const PlanarGraph<Scalar>& g) {
  return Digraph<Scalar>::from_graph(g);
}

template <typename Scalar>
BoundaryMatrix<Scalar> dense_all_pairs(const PlanarGraph<Scalar>& g, const std::vector<VertexId>& boundary,
                                        const PriceFunction<Scalar>& prices) {
  const int m = static_cast<int>(boundary.size());
  BoundaryMatrix<Scalar> bm;
  bm.boundary = boundary;
  bm.dist = Matrix<Scalar>::Constant(m, m, infinity<Scalar>());
  Digraph<Scalar> dg = piece_digraph(g);
  for (int i = 0; i < m; ++i) {
    SsspResult<Scalar> r = dijkstra(dg, boundary[i], prices, boundary);
    for (int j = 0; j < m; ++j) bm.dist(i, j) = r.dist[boundary[j]];
    bm.dist(i, i) = Scalar(0);
  }
  return bm;
}

// Klein's multiple-source shortest paths around the boundary face.  A virtual
// root r0 is placed in the boundary face and joined to every boundary vertex by
// a spoke.  Moving the source from one boundary vertex to the next is a
// parametric change of two spoke lengths; the shortest-path tree is maintained
// by pivots, found with a dual tree over the faces of the augmented graph.
template <typename Scalar>
class KleinMssp {
 public:
  KleinMssp(const PlanarGraph<Scalar>& g, const std::vector<VertexId>& boundary, const PriceFunction<Scalar>& prices)
      : g_(g), boundary_(boundary), prices_(prices), emb_(g.embedding()) {
    auto [darts, idx] = boundary_face_walk(emb_, boundary);
    walk_ = idx;
    m_ = static_cast<int>(walk_.size());
    n_ = emb_.num_vertices();
    root_ = emb_.add_vertex();
    spoke_.resize(m_);
    for (int k = 0; k < m_; ++k) {
      VertexId b = boundary_[walk_[k]];
      SlotId s = emb_.add_slot(root_, b, k == 0 ? kNone : spoke_[k - 1], darts[k]);
      spoke_[k] = 2 * s;
    }
    ft_ = emb_.trace_faces();

    const int nd = emb_.num_darts();
    len_.assign(nd, Scalar(0));
    Scalar total = Scalar(0);
    const int real_darts = g_.embedding().num_darts();
    for (DartId d = 0; d < real_darts; ++d) {
      ArcId a = g_.arc_of_dart(d);
      if (a == kNone) continue;
      const auto& arc = g_.arc(a);
      Scalar c = prices_[arc.tail] + arc.weight - prices_[arc.head];
      if (c < Scalar(0)) {
        if (c < -WeightTraits<Scalar>::tolerance(original_weight_sum(g_) + Scalar(1)))
          throw InfeasiblePrices("negative reduced cost inside a piece");
        c = Scalar(0);
      }
      len_[d] = c;
      total += c;
    }
    big_ = Scalar(1) + total;
    for (DartId d = 0; d < real_darts; ++d)
      if (g_.arc_of_dart(d) == kNone) len_[d] = big_;
    for (int k = 0; k < m_; ++k) {
      len_[spoke_[k]] = k == 0 ? Scalar(0) : big_;
      len_[Embedding::twin(spoke_[k])] = Scalar(3) * big_;
    }
  }

  // Row of original-weight distances for each source in walk order.
  BoundaryMatrix<Scalar> run(MsspStats* stats, const std::vector<std::vector<int>>* path_requests = nullptr,
                             std::vector<std::vector<std::vector<ArcId>>>* paths = nullptr) {
    BoundaryMatrix<Scalar> bm;
    bm.boundary = boundary_;
    bm.dist = Matrix<Scalar>::Constant(m_, m_, infinity<Scalar>());
    if (!initialize()) {
      if (stats) ++stats->dense_fallbacks;
      return dense_all_pairs(g_, boundary_, prices_);
    }
    for (int k = 0; k < m_; ++k) {
      if (k > 0) move_source(k - 1, k);
      const int i = walk_[k];
      const VertexId src = boundary_[i];
      for (int j = 0; j < m_; ++j) {
        VertexId t = boundary_[j];
        Scalar d = tree_.path_length(t);
        if (d >= big_) continue;
        bm.dist(i, j) = d - prices_[src] + prices_[t];
      }
      bm.dist(i, i) = Scalar(0);
      if (path_requests && paths) {
        for (int j : (*path_requests)[i]) (*paths)[i].push_back(path_to(boundary_[j], k));
      }
    }
    if (stats) stats->pivots += pivots_;
    return bm;
  }

 private:
  SlotId slot(DartId d) const { return Embedding::slot_of(d); }
  int edge_node(DartId d) const { return ft_.num_faces + slot(d); }
  FaceId face(DartId d) const { return ft_.face_of_dart[d]; }

  Scalar dist(VertexId v) { return tree_.path_length(v); }

  bool initialize() {
    const int nv = emb_.num_vertices();
    const int nd = emb_.num_darts();
    std::vector<Scalar> d(nv, infinity<Scalar>());
    parent_.assign(nv, kNone);
    std::vector<char> done(nv, 0);
    using Item = std::pair<Scalar, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    d[root_] = Scalar(0);
    heap.push({Scalar(0), root_});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (done[u] || du > d[u]) continue;
      done[u] = 1;
      DartId f = emb_.first_dart(u);
      DartId e = f;
      do {
        VertexId v = emb_.head(e);
        Scalar c = du + len_[e];
        if (!done[v] && c < d[v]) {
          d[v] = c;
          parent_[v] = e;
          heap.push({c, v});
        }
        e = emb_.next_cw(e);
      } while (e != f);
    }
    for (VertexId v = 0; v < nv; ++v)
      if (!done[v]) return false;

    tree_ = PathSumTree<Scalar>(nv);
    std::vector<char> in_tree(emb_.num_slots(), 0);
    for (VertexId v = 0; v < nv; ++v) {
      if (parent_[v] == kNone) continue;
      tree_.link(v, emb_.tail(parent_[v]), len_[parent_[v]]);
      in_tree[slot(parent_[v])] = 1;
    }

    const int nf = ft_.num_faces;
    dual_ = DualPathTree<Scalar>(nf + emb_.num_slots());
    std::vector<std::vector<SlotId>> around(nf);
    for (SlotId s = 0; s < emb_.num_slots(); ++s) {
      if (in_tree[s]) continue;
      around[face(2 * s)].push_back(s);
      around[face(2 * s + 1)].push_back(s);
    }
    std::vector<char> seen(nf, 0);
    std::vector<FaceId> queue{0};
    seen[0] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      FaceId f = queue[q];
      for (SlotId s : around[f]) {
        DartId a = face(2 * s) == f ? 2 * s : 2 * s + 1;
        FaceId h = face(Embedding::twin(a));
        if (seen[h]) continue;
        seen[h] = 1;
        queue.push_back(h);
        const int x = nf + s;
        dual_.link(x, f);
        dual_.link(h, x);
        dual_.set_edge(x, slack(a, d), a, slack(Embedding::twin(a), d), Embedding::twin(a));
      }
    }
    (void)nd;
    return static_cast<int>(queue.size()) == nf;
  }

  Scalar slack(DartId e, const std::vector<Scalar>& d) const {
    return d[emb_.tail(e)] + len_[e] - d[emb_.head(e)];
  }

  Scalar live_slack(DartId e) { return dist(emb_.tail(e)) + len_[e] - dist(emb_.head(e)); }

  // Makes non-tree dart e the parent dart of its head.
  void pivot(DartId e) {
    ++pivots_;
    VertexId x = emb_.tail(e), y = emb_.head(e);
    DartId old = parent_[y];
    tree_.cut(y);
    tree_.link(y, x, len_[e]);
    parent_[y] = e;
    const int en = edge_node(e);
    dual_.cut(en, face(e));
    dual_.cut(en, face(Embedding::twin(e)));
    const int eo = edge_node(old);
    DartId a = 2 * slot(old);
    DartId b = a + 1;
    dual_.link(eo, face(a));
    dual_.link(face(b), eo);
    dual_.set_edge(eo, live_slack(a), a, live_slack(b), b);
  }

  void set_spoke_length(DartId rho, Scalar v) {
    len_[rho] = v;
    VertexId b = emb_.head(rho);
    if (parent_[b] == rho) {
      tree_.set_edge_length(b, v);
    } else {
      dual_.set_edge_value(edge_node(rho), rho, live_slack(rho));
    }
  }

  void move_source(int from, int to) {
    const DartId rho_new = spoke_[to];
    const DartId rho_old = spoke_[from];
    const VertexId b_new = emb_.head(rho_new);
    const VertexId b_old = emb_.head(rho_old);

    // Lower the new spoke to zero.
    if (parent_[b_new] != rho_new) {
      set_spoke_length(rho_new, dist(b_new));
      pivot(rho_new);
    }
    {
      const FaceId A = face(rho_new), B = face(Embedding::twin(rho_new));
      Scalar remaining = len_[rho_new];
      while (remaining > Scalar(0)) {
        auto pm = dual_.path_min(A, B);
        Scalar step = remaining;
        bool hit = pm.a_tag != -1 && pm.a < remaining;
        if (hit) step = std::max(pm.a, Scalar(0));
        len_[rho_new] -= step;
        tree_.add_edge_length(b_new, -step);
        dual_.path_add(A, B, -step, step);
        remaining -= step;
        if (!hit) break;
        pivot(pm.a_tag);
      }
      len_[rho_new] = Scalar(0);
      tree_.set_edge_length(b_new, Scalar(0));
    }

    // Raise the old spoke to the large value.
    if (parent_[b_old] != rho_old) {
      set_spoke_length(rho_old, big_);
      return;
    }
    const FaceId A = face(rho_old), B = face(Embedding::twin(rho_old));
    Scalar remaining = big_ - len_[rho_old];
    while (remaining > Scalar(0)) {
      auto pm = dual_.path_min(A, B);
      Scalar step = remaining;
      bool hit = pm.b_tag != -1 && pm.b < remaining;
      if (hit) step = std::max(pm.b, Scalar(0));
      len_[rho_old] += step;
      tree_.add_edge_length(b_old, step);
      dual_.path_add(A, B, step, -step);
      remaining -= step;
      if (!hit) break;
      DartId e = pm.b_tag;
      bool detaches = emb_.head(e) == b_old;
      pivot(e);
      if (detaches) {
        set_spoke_length(rho_old, big_);
        return;
      }
    }
    set_spoke_length(rho_old, big_);
  }

  std::vector<ArcId> path_to(VertexId t, int k) {
    std::vector<ArcId> p;
    VertexId v = t;
    while (v != root_) {
      DartId e = parent_[v];
      if (e == spoke_[k]) break;
      if (slot(e) >= g_.embedding().num_slots() || g_.arc_of_dart(e) == kNone)
        throw InternalInconsistency("shortest path uses a virtual dart");
      p.push_back(g_.arc_of_dart(e));
      v = emb_.tail(e);
    }
    if (v == root_) throw InternalInconsistency("shortest path does not start at the source");
    std::reverse(p.begin(), p.end());
    return p;
  }

  const PlanarGraph<Scalar>& g_;
  std::vector<VertexId> boundary_;
  const PriceFunction<Scalar>& prices_;
  Embedding emb_;
  Embedding::FaceTrace ft_;
  std::vector<int> walk_;
  int m_ = 0;
  int n_ = 0;
  VertexId root_ = kNone;
  std::vector<DartId> spoke_;
  std::vector<Scalar> len_;
  Scalar big_ = Scalar(0);
  std::vector<DartId> parent_;
  PathSumTree<Scalar> tree_{0};
  DualPathTree<Scalar> dual_{0};
  long long pivots_ = 0;
};

}  // namespace detail

// All-pairs boundary distances of a piece whose boundary lies on one face.
// prices is indexed by piece vertex and must be feasible for g.
template <typename Scalar>
BoundaryMatrix<Scalar> boundary_all_pairs(const PlanarGraph<Scalar>& g, const std::vector<VertexId>& boundary,
                                          const PriceFunction<Scalar>& prices, MsspMode mode = MsspMode::Dense,
                                          MsspStats* stats = nullptr) {
  if (boundary.size() < 3 || mode == MsspMode::Dense) {
    if (mode == MsspMode::Klein) detail::boundary_face_walk(g.embedding(), boundary);
    return detail::dense_all_pairs(g, boundary, prices);
  }
  detail::KleinMssp<Scalar> k(g, boundary, prices);
  return k.run(stats);
}

template <typename Scalar>
BoundaryMatrix<Scalar> boundary_all_pairs(const Piece<Scalar>& piece, const PriceFunction<Scalar>& prices,
                                          MsspMode mode = MsspMode::Dense, MsspStats* stats = nullptr) {
  return boundary_all_pairs(piece.graph, piece.boundary, prices, mode, stats);
}

// Shortest paths for the requested boundary pairs; requests[i] lists target
// indices for source index i.  Result [i][r] answers requests[i][r].  Only the
// sources that appear keep a parent tree.  Throws Unreachable.
template <typename Scalar>
std::vector<std::vector<std::vector<ArcId>>> boundary_paths(const PlanarGraph<Scalar>& g,
                                                            const std::vector<VertexId>& boundary,
                                                            const PriceFunction<Scalar>& prices,
                                                            const std::vector<std::vector<int>>& requests,
                                                            MsspMode mode = MsspMode::Dense) {
  const int m = static_cast<int>(boundary.size());
  std::vector<std::vector<std::vector<ArcId>>> out(m);
  if (mode == MsspMode::Klein && m >= 3) {
    detail::KleinMssp<Scalar> k(g, boundary, prices);
    BoundaryMatrix<Scalar> bm = k.run(nullptr, &requests, &out);
    bool complete = true;
    for (int i = 0; i < m; ++i) {
      for (std::size_t r = 0; r < requests[i].size(); ++r) {
        if (is_infinite(bm.dist(i, requests[i][r]))) throw Unreachable("boundary target unreachable in piece");
        complete = complete && r < out[i].size();
      }
    }
    if (complete) return out;
    out.assign(m, {});
  }
  Digraph<Scalar> dg = detail::piece_digraph(g);
  for (int i = 0; i < m; ++i) {
    if (requests[i].empty()) continue;
    std::vector<VertexId> targets;
    for (int j : requests[i]) targets.push_back(boundary[j]);
    SsspResult<Scalar> r = dijkstra(dg, boundary[i], prices, targets);
    for (int j : requests[i]) {
      if (!r.reachable(boundary[j])) throw Unreachable("boundary target unreachable in piece");
      out[i].push_back(r.path_to(boundary[j], dg));
    }
  }
  return out;
}

template <typename Scalar>
std::vector<ArcId> boundary_path(const PlanarGraph<Scalar>& g, const std::vector<VertexId>& boundary,
                                 const PriceFunction<Scalar>& prices, int i, int j, MsspMode mode = MsspMode::Dense) {
  std::vector<std::vector<int>> req(boundary.size());
  req[i].push_back(j);
  return boundary_paths(g, boundary, prices, req, mode)[i][0];
}

}  // namespace pgirth
