#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pgirth/embedding.hpp"
#include "pgirth/types.hpp"

namespace pgirth {

template <typename Scalar>
struct Arc {
  VertexId tail = kNone;
  VertexId head = kNone;
  Scalar weight = Scalar(0);
  bool original = true;   // false for augmentation arcs of weight W
  ArcId source = kNone;   // arc id in the input file, kNone for augmentation arcs
};

// Directed planar multigraph: an embedding plus at most one arc per dart.
// Immutable after construction.
template <typename Scalar>
class PlanarGraph {
 public:
  using scalar_type = Scalar;

  PlanarGraph() = default;

  PlanarGraph(Embedding emb, std::vector<Arc<Scalar>> arcs, std::vector<ArcId> dart_arc,
              std::vector<VertexId> labels = {})
      : emb_(std::move(emb)), arcs_(std::move(arcs)), dart_arc_(std::move(dart_arc)),
        labels_(std::move(labels)) {
    if (labels_.empty()) {
      labels_.resize(emb_.num_vertices());
      std::iota(labels_.begin(), labels_.end(), 0);
    }
    if (static_cast<int>(labels_.size()) != emb_.num_vertices())
      throw InternalInconsistency("label count does not match vertex count");
    if (static_cast<int>(dart_arc_.size()) != emb_.num_darts())
      throw InternalInconsistency("dart table does not match embedding");
    arc_dart_.assign(arcs_.size(), kNone);
    for (DartId d = 0; d < emb_.num_darts(); ++d) {
      ArcId a = dart_arc_[d];
      if (a == kNone) continue;
      if (a < 0 || a >= static_cast<ArcId>(arcs_.size()))
        throw DanglingReference("dart references unknown arc");
      if (arc_dart_[a] != kNone) throw InternalInconsistency("arc bound to two darts");
      if (arcs_[a].tail != emb_.tail(d) || arcs_[a].head != emb_.head(d))
        throw InternalInconsistency("arc endpoints disagree with dart");
      arc_dart_[a] = d;
    }
    for (std::size_t a = 0; a < arcs_.size(); ++a)
      if (arc_dart_[a] == kNone) throw InternalInconsistency("arc without a dart");
  }

  const Embedding& embedding() const { return emb_; }
  const std::vector<Arc<Scalar>>& arcs() const { return arcs_; }
  const Arc<Scalar>& arc(ArcId a) const { return arcs_[a]; }
  ArcId arc_of_dart(DartId d) const { return dart_arc_[d]; }
  DartId dart_of_arc(ArcId a) const { return arc_dart_[a]; }
  const std::vector<ArcId>& dart_arcs() const { return dart_arc_; }
  VertexId label(VertexId v) const { return labels_[v]; }
  const std::vector<VertexId>& labels() const { return labels_; }

  int num_vertices() const { return emb_.num_vertices(); }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int num_slots() const { return emb_.num_slots(); }
  int num_faces() const { return emb_.trace_faces().num_faces; }

  template <typename Other>
  PlanarGraph<Other> cast() const {
    std::vector<Arc<Other>> out;
    out.reserve(arcs_.size());
    for (const auto& a : arcs_)
      out.push_back({a.tail, a.head, static_cast<Other>(a.weight), a.original, a.source});
    return PlanarGraph<Other>(emb_, std::move(out), dart_arc_, labels_);
  }

 private:
  Embedding emb_;
  std::vector<Arc<Scalar>> arcs_;
  std::vector<ArcId> dart_arc_;
  std::vector<ArcId> arc_dart_;
  std::vector<VertexId> labels_;
};

// One arc endpoint inside a rotation list.
struct Endpoint {
  ArcId arc = kNone;
  bool at_head = false;
};

template <typename Scalar>
struct ArcSpec {
  VertexId tail;
  VertexId head;
  Scalar weight;
};

// Every input arc becomes its own embedded edge; dart 2a is the tail end of arc a.
template <typename Scalar>
PlanarGraph<Scalar> build_graph(int num_vertices, const std::vector<ArcSpec<Scalar>>& arcs,
                                const std::vector<std::vector<Endpoint>>& rotations) {
  if (num_vertices < 0) throw FormatError("negative vertex count");
  if (static_cast<int>(rotations.size()) != num_vertices)
    throw EmbeddingInvalid("rotation list count does not match vertex count");
  const int m = static_cast<int>(arcs.size());
  std::vector<std::array<VertexId, 2>> ends(m);
  std::vector<Arc<Scalar>> out(m);
  std::vector<ArcId> dart_arc(2 * m, kNone);
  for (int a = 0; a < m; ++a) {
    const auto& s = arcs[a];
    if (s.tail < 0 || s.tail >= num_vertices || s.head < 0 || s.head >= num_vertices)
      throw DanglingReference("arc " + std::to_string(a) + " references an unknown vertex");
    ends[a] = {s.tail, s.head};
    out[a] = {s.tail, s.head, s.weight, true, a};
    dart_arc[2 * a] = a;
  }
  std::vector<std::vector<DartId>> rot(num_vertices);
  for (int v = 0; v < num_vertices; ++v) {
    for (const Endpoint& ep : rotations[v]) {
      if (ep.arc < 0 || ep.arc >= m)
        throw DanglingReference("rotation of vertex " + std::to_string(v) +
                                " references unknown arc " + std::to_string(ep.arc));
      rot[v].push_back(2 * ep.arc + (ep.at_head ? 1 : 0));
    }
  }
  Embedding emb = Embedding::from_rotations(num_vertices, std::move(ends), rot);
  return PlanarGraph<Scalar>(std::move(emb), std::move(out), std::move(dart_arc));
}

template <typename Scalar>
struct Normalized {
  PlanarGraph<Scalar> graph;
  GirthValue<Scalar> selfloop_candidate;
  ArcId selfloop_arc = kNone;  // input arc id of the lightest loop
};

namespace detail {

inline std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace detail

// Drops self-loops and merges every bundle of parallel embedded edges into its
// first member, keeping the lightest arc per direction.
template <typename Scalar>
Normalized<Scalar> normalize(const PlanarGraph<Scalar>& g) {
  const Embedding& e = g.embedding();
  const int n = e.num_vertices();
  const int ns = e.num_slots();
  Normalized<Scalar> res;
  res.selfloop_candidate = GirthValue<Scalar>::plus_infinity();

  std::vector<SlotId> rep(ns, kNone);
  std::unordered_map<std::uint64_t, SlotId> first_slot;
  first_slot.reserve(2 * ns + 1);
  std::vector<char> drop(ns, 0);
  for (SlotId s = 0; s < ns; ++s) {
    auto [u, v] = e.ends(s);
    if (u == v) {
      drop[s] = 1;
      for (int side = 0; side < 2; ++side) {
        ArcId a = g.arc_of_dart(2 * s + side);
        if (a == kNone) continue;
        auto cand = GirthValue<Scalar>::finite(g.arc(a).weight);
        if (cand < res.selfloop_candidate) {
          res.selfloop_candidate = cand;
          res.selfloop_arc = g.arc(a).source;
        }
      }
      continue;
    }
    auto [it, inserted] = first_slot.emplace(detail::pair_key(u, v), s);
    rep[s] = it->second;
    if (!inserted) drop[s] = 1;
  }

  std::vector<SlotId> new_id(ns, kNone);
  std::vector<std::array<VertexId, 2>> ends;
  for (SlotId s = 0; s < ns; ++s) {
    if (drop[s]) continue;
    new_id[s] = static_cast<SlotId>(ends.size());
    ends.push_back(e.ends(s));
  }
  // best[d'] = lightest original arc travelling along new dart d'
  std::vector<ArcId> best(2 * ends.size(), kNone);
  for (SlotId s = 0; s < ns; ++s) {
    if (rep[s] == kNone) continue;
    SlotId r = rep[s];
    for (int side = 0; side < 2; ++side) {
      ArcId a = g.arc_of_dart(2 * s + side);
      if (a == kNone) continue;
      int rside = (e.tail(2 * s + side) == e.ends(r)[0]) ? 0 : 1;
      DartId nd = 2 * new_id[r] + rside;
      ArcId& b = best[nd];
      if (b == kNone || g.arc(a).weight < g.arc(b).weight ||
          (g.arc(a).weight == g.arc(b).weight && g.arc(a).source < g.arc(b).source))
        b = a;
    }
  }
  std::vector<Arc<Scalar>> arcs;
  std::vector<ArcId> dart_arc(best.size(), kNone);
  for (std::size_t d = 0; d < best.size(); ++d) {
    if (best[d] == kNone) continue;
    dart_arc[d] = static_cast<ArcId>(arcs.size());
    arcs.push_back(g.arc(best[d]));
  }
  std::vector<std::vector<DartId>> rot(n);
  for (VertexId v = 0; v < n; ++v)
    for (DartId d : e.rotation(v))
      if (!drop[Embedding::slot_of(d)]) rot[v].push_back(2 * new_id[Embedding::slot_of(d)] + (d & 1));
  Embedding ne = Embedding::from_rotations(n, std::move(ends), rot);
  res.graph = PlanarGraph<Scalar>(std::move(ne), std::move(arcs), std::move(dart_arc), g.labels());
  return res;
}

// Sum of |w| over original arcs.
template <typename Scalar>
Scalar original_weight_sum(const PlanarGraph<Scalar>& g) {
  Scalar s = Scalar(0);
  for (const auto& a : g.arcs())
    if (a.original) s += abs_weight(a.weight);
  return s;
}

// W = 1 + 2 * sum of |w| over original arcs.
template <typename Scalar>
Scalar big_weight(const PlanarGraph<Scalar>& g) {
  return Scalar(1) + Scalar(2) * original_weight_sum(g);
}

// Cycle weights at or above this value must use an augmentation arc.
template <typename Scalar>
Scalar girth_threshold(const PlanarGraph<Scalar>& g) {
  return Scalar(1) + original_weight_sum(g);
}

template <typename Scalar>
PlanarGraph<Scalar> saturate(const Embedding& emb, std::vector<Arc<Scalar>> arcs,
                             std::vector<ArcId> dart_arc, std::vector<VertexId> labels, Scalar W) {
  dart_arc.resize(emb.num_darts(), kNone);
  for (DartId d = 0; d < emb.num_darts(); ++d) {
    if (dart_arc[d] != kNone) continue;
    dart_arc[d] = static_cast<ArcId>(arcs.size());
    arcs.push_back({emb.tail(d), emb.head(d), W, false, kNone});
  }
  return PlanarGraph<Scalar>(emb, std::move(arcs), std::move(dart_arc), std::move(labels));
}

// Adds a weight-W arc on every dart that has none.
template <typename Scalar>
PlanarGraph<Scalar> saturate(const PlanarGraph<Scalar>& g, Scalar W) {
  bool full = true;
  for (ArcId a : g.dart_arcs()) full = full && a != kNone;
  if (full) return g;
  return saturate(g.embedding(), g.arcs(), g.dart_arcs(), g.labels(), W);
}

// Connects components, splits every face into triangles by ear clipping and
// adds weight-W arcs on all darts without one.  Requires a loop-free graph
// without parallel edges and at least three vertices.
template <typename Scalar>
PlanarGraph<Scalar> triangulate(const PlanarGraph<Scalar>& g, Scalar W) {
  Embedding emb = g.embedding();
  const int n = emb.num_vertices();
  if (n < 3) throw InvalidSpec("triangulation needs at least three vertices");

  std::unordered_set<std::uint64_t> adj;
  adj.reserve(4 * (emb.num_slots() + 3 * n));
  for (SlotId s = 0; s < emb.num_slots(); ++s) {
    auto [u, v] = emb.ends(s);
    if (u == v) throw InvalidSpec("triangulation input has a self-loop");
    if (!adj.insert(detail::pair_key(u, v)).second)
      throw InvalidSpec("triangulation input has parallel edges");
  }

  int ncomp = 0;
  std::vector<int> comp = emb.components(&ncomp);
  if (ncomp > 1) {
    std::vector<VertexId> rep(ncomp, kNone);
    for (VertexId v = 0; v < n; ++v)
      if (rep[comp[v]] == kNone) rep[comp[v]] = v;
    for (int c = 1; c < ncomp; ++c) {
      VertexId u = rep[0], v = rep[c];
      emb.add_slot(u, v, emb.first_dart(u), emb.first_dart(v));
      adj.insert(detail::pair_key(u, v));
    }
  }

  Embedding::FaceTrace ft = emb.trace_faces();
  std::vector<char> done(ft.num_faces, 0);
  std::vector<DartId> face;
  std::vector<int> nxt;
  const int base_darts = emb.num_darts();
  for (DartId d0 = 0; d0 < base_darts; ++d0) {
    FaceId f = ft.face_of_dart[d0];
    if (done[f]) continue;
    done[f] = 1;
    if (ft.face_size[f] <= 3) continue;
    face.clear();
    DartId d = d0;
    do {
      face.push_back(d);
      d = emb.face_next(d);
    } while (d != d0);
    int k = static_cast<int>(face.size());
    nxt.resize(k);
    for (int i = 0; i < k; ++i) nxt[i] = (i + 1) % k;
    int cur = 0;
    int fails = 0;
    while (k > 3) {
      int b = nxt[cur];
      int c = nxt[b];
      VertexId u = emb.tail(face[cur]);
      VertexId v = emb.tail(face[c]);
      if (u != v && !adj.count(detail::pair_key(u, v))) {
        SlotId s = emb.add_slot(u, v, face[cur], face[c]);
        adj.insert(detail::pair_key(u, v));
        face[cur] = 2 * s;
        nxt[cur] = c;
        --k;
        fails = 0;
      } else {
        cur = nxt[cur];
        if (++fails > k) throw InternalInconsistency("no ear found while triangulating a face");
      }
    }
  }
  return saturate(emb, g.arcs(), g.dart_arcs(), g.labels(), W);
}

// Audit helper: every face has three sides and every dart carries an arc.
template <typename Scalar>
bool is_triangulated(const PlanarGraph<Scalar>& g) {
  const Embedding& e = g.embedding();
  Embedding::FaceTrace ft = e.trace_faces();
  for (int s : ft.face_size)
    if (s != 3) return false;
  for (ArcId a : g.dart_arcs())
    if (a == kNone) return false;
  int ncomp = 0;
  e.components(&ncomp);
  return ncomp == 1;
}

}  // namespace pgirth
