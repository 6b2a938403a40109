#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pgirth/ddg.hpp"
#include "pgirth/engine.hpp"
#include "pgirth/mssp.hpp"
#include "pgirth/oracle.hpp"
#include "pgirth/types.hpp"

namespace pgirth {

template <typename Scalar>
struct CycleResult {
  GirthValue<Scalar> girth;
  std::optional<CycleWitness<Scalar>> witness;    // arc ids of the input graph
  std::optional<NegativeCycle<Scalar>> negative;  // arc ids of the input graph
  std::vector<Branch> path;
};

struct WitnessCheck {
  bool ok = true;
  std::string message;
};

// Checks that arcs form a closed, arc-simple walk of input arcs and, when
// expected is given, that its weight matches.
template <typename Scalar>
WitnessCheck check_witness(const PlanarGraph<Scalar>& g, const std::vector<ArcId>& arcs,
                           const std::optional<Scalar>& expected = std::nullopt) {
  WitnessCheck r;
  auto fail = [&](std::string m) {
    r.ok = false;
    r.message = std::move(m);
    return r;
  };
  if (arcs.empty()) return fail("empty witness");
  std::unordered_set<ArcId> seen;
  Scalar w = Scalar(0);
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    ArcId a = arcs[k];
    if (a < 0 || a >= g.num_arcs()) return fail("arc " + std::to_string(a) + " does not exist");
    if (!g.arc(a).original) return fail("arc " + std::to_string(a) + " is not an input arc");
    if (!seen.insert(a).second) return fail("arc " + std::to_string(a) + " repeats");
    ArcId b = arcs[(k + 1) % arcs.size()];
    if (b < 0 || b >= g.num_arcs()) return fail("arc " + std::to_string(b) + " does not exist");
    if (g.arc(a).head != g.arc(b).tail)
      return fail("chaining violated: arc " + std::to_string(a) + " ends at " + std::to_string(g.arc(a).head) +
                  " but arc " + std::to_string(b) + " starts at " + std::to_string(g.arc(b).tail));
    w += g.arc(a).weight;
  }
  if (expected) {
    Scalar tol = WeightTraits<Scalar>::tolerance(original_weight_sum(g));
    if (w - *expected > tol || *expected - w > tol)
      return fail("witness weight " + std::to_string(static_cast<double>(w)) + " differs from girth " +
                  std::to_string(static_cast<double>(*expected)));
  }
  return r;
}

namespace detail {

// Removes zero-weight closed subwalks until no vertex repeats.  Throws
// InternalInconsistency on a subwalk of nonzero weight.
template <typename Scalar>
std::vector<ArcId> splice_closed_walk(const PlanarGraph<Scalar>& g, const std::vector<ArcId>& walk) {
  const Scalar tol = WeightTraits<Scalar>::tolerance(original_weight_sum(g));
  std::vector<int> pos(g.num_vertices(), -1);
  std::vector<ArcId> st;
  const VertexId start = g.arc(walk.front()).tail;
  pos[start] = 0;
  for (std::size_t k = 0; k < walk.size(); ++k) {
    ArcId a = walk[k];
    st.push_back(a);
    VertexId v = g.arc(a).head;
    if (k + 1 == walk.size()) break;
    if (pos[v] == -1) {
      pos[v] = static_cast<int>(st.size());
      continue;
    }
    Scalar w = Scalar(0);
    for (std::size_t i = pos[v]; i < st.size(); ++i) w += g.arc(st[i]).weight;
    if (w > tol || w < -tol)
      throw InternalInconsistency("stitched walk contains a subcycle of nonzero weight");
    for (std::size_t i = pos[v] + 1; i < st.size(); ++i) pos[g.arc(st[i]).tail] = -1;
    st.resize(pos[v]);
  }
  return st;
}

template <typename Scalar>
std::vector<ArcId> to_input_arcs(const PlanarGraph<Scalar>& piece, const std::vector<ArcId>& arcs) {
  std::vector<ArcId> out;
  out.reserve(arcs.size());
  for (ArcId a : arcs) {
    const auto& arc = piece.arc(a);
    if (!arc.original || arc.source == kNone)
      throw InternalInconsistency("witness path uses an augmentation arc");
    out.push_back(arc.source);
  }
  return out;
}

}  // namespace detail

// Expands an H-cycle into piece paths and concatenates them.  Arc ids of the
// result index the input graph.  Throws PathWeightMismatch.
template <typename Scalar>
std::vector<ArcId> stitch(const DenseDistanceGraph<Scalar>& h, const HCycle<Scalar>& c, const LevelSplit<Scalar>& s,
                          const PriceFunction<Scalar>& global, MsspMode mode) {
  const int m = h.size();
  std::vector<std::vector<int>> req1(m), req2(m);
  for (const HEdge& e : c.edges) {
    Origin o = h.origin_of(e.from, e.to);
    if (o == Origin::Piece1) req1[e.from].push_back(e.to);
    else if (o == Origin::Piece2) req2[e.from].push_back(e.to);
    else throw InternalInconsistency("H-cycle uses an absent edge");
  }
  auto paths1 = boundary_paths(s.piece1.graph, s.piece1.boundary, piece_prices(s.piece1.graph, global), req1, mode);
  auto paths2 = boundary_paths(s.piece2.graph, s.piece2.boundary, piece_prices(s.piece2.graph, global), req2, mode);
  std::vector<std::size_t> used1(m, 0), used2(m, 0);
  std::vector<ArcId> walk;
  for (const HEdge& e : c.edges) {
    bool first = h.origin_of(e.from, e.to) == Origin::Piece1;
    const Piece<Scalar>& piece = first ? s.piece1 : s.piece2;
    const std::vector<ArcId>& p = first ? paths1[e.from][used1[e.from]++] : paths2[e.from][used2[e.from]++];
    Scalar w = Scalar(0);
    for (ArcId a : p) w += piece.graph.arc(a).weight;
    Scalar target = h.wH(e.from, e.to);
    Scalar tol = WeightTraits<Scalar>::tolerance(abs_weight(target) + Scalar(1));
    if (w - target > tol || target - w > tol)
      throw PathWeightMismatch("expanded path weight differs from its H edge");
    std::vector<ArcId> ids = detail::to_input_arcs(piece.graph, p);
    walk.insert(walk.end(), ids.begin(), ids.end());
  }
  return walk;
}

// A shortest cycle of g.  A finite girth comes with a witness; a negative
// girth comes with a negative cycle; +inf comes with neither.
template <typename Scalar>
CycleResult<Scalar> shortest_cycle(const PlanarGraph<Scalar>& g, const EngineConfig& cfg = {}) {
  GirthEngine<Scalar> engine(cfg);
  Prepared<Scalar> p = prepare(g);
  CycleResult<Scalar> res;
  res.girth = engine.girth(p, &res.path);
  if (res.girth.is_minus_infinity()) {
    res.negative = p.negative;
    for (ArcId& a : res.negative->arcs) a = g.arc(a).source == kNone ? a : g.arc(a).source;
    return res;
  }
  if (!res.girth.is_finite()) return res;
  const Scalar target = res.girth.weight();
  if (res.path.empty()) {
    CycleWitness<Scalar> w;
    w.arcs = {p.norm.selfloop_arc};
    w.weight = target;
    res.witness = w;
    return res;
  }

  EngineConfig quiet = cfg;
  quiet.stats_sink = nullptr;
  const PlanarGraph<Scalar>& ng = p.norm.graph;
  PlanarGraph<Scalar> cur = ng.num_vertices() <= 2 ? ng : triangulate(ng, p.W);
  std::vector<ArcId> walk;
  for (std::size_t depth = 0; depth < res.path.size(); ++depth) {
    Branch b = res.path[depth];
    if (b == Branch::Base) {
      std::optional<CycleWitness<Scalar>> c;
      if (cur.num_vertices() <= cfg.base_case_n || cur.num_vertices() <= 2) c = oracle_cycle(cur.num_vertices(), oracle_arcs(cur));
      else c = scan_min_cycle(cur, piece_prices(cur, p.prices));
      if (!c) throw InternalInconsistency("base case lost its cycle on replay");
      walk = detail::to_input_arcs(cur, c->arcs);
      break;
    }
    std::optional<LevelSplit<Scalar>> s = split_level(cur, static_cast<int>(depth), p.W, quiet);
    if (!s) throw InternalInconsistency("separator changed on replay");
    if (b == Branch::Cross) {
      DenseDistanceGraph<Scalar> h = level_ddg(*s, p.prices, quiet);
      std::optional<HCycle<Scalar>> hc = level_min_cycle(h, p.threshold, quiet);
      if (!hc) throw InternalInconsistency("cross cycle lost on replay");
      walk = stitch(h, *hc, *s, p.prices, cfg.mssp_mode);
      break;
    }
    Piece<Scalar> next = b == Branch::Piece1 ? std::move(s->piece1) : std::move(s->piece2);
    s.reset();
    cur = triangulate(next.graph, p.W);
  }
  if (walk.empty()) throw InternalInconsistency("replay did not reach a leaf");

  std::unordered_set<ArcId> seen;
  long long repeats = 0;
  for (ArcId a : walk)
    if (!seen.insert(a).second) ++repeats;
  if (cfg.stats_sink && repeats) cfg.stats_sink->update([&](Stats& st) { st.stitch_repeated_arcs += repeats; });

  CycleWitness<Scalar> w;
  w.arcs = detail::splice_closed_walk(g, walk);
  for (ArcId a : w.arcs) w.weight += g.arc(a).weight;
  WitnessCheck chk = check_witness(g, w.arcs, std::optional<Scalar>(target));
  if (!chk.ok) throw InternalInconsistency("stitched witness invalid: " + chk.message);
  res.witness = std::move(w);
  return res;
}

}  // namespace pgirth
