#pragma once

#include <chrono>
#include <cstdint>
#include <future>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgirth/ddg.hpp"
#include "pgirth/mssp.hpp"
#include "pgirth/oracle.hpp"
#include "pgirth/planar_graph.hpp"
#include "pgirth/separator.hpp"
#include "pgirth/shortest_paths.hpp"
#include "pgirth/types.hpp"

namespace pgirth {

// Which part of a recursion node attained its minimum.
enum class Branch : std::int8_t { Base, Cross, Piece1, Piece2 };

struct LevelRecord {
  int level = 0;
  int n = 0;
  int separator_size = 0;
  int piece1_n = 0;
  int piece2_n = 0;
  std::optional<double> cross_min;  // below-threshold minimum through the separator
  double wall_ms = 0.0;             // excluding the recursive calls
};

struct SeparatorRecord {
  int level = 0;
  int n = 0;
  int size = 0;
  int inside = 0;
  int outside = 0;
  bool within_bounds = false;
};

// Collected during one engine run.  Safe to update from parallel branches.
struct Stats {
  std::vector<LevelRecord> levels;
  std::vector<SeparatorRecord> separators;
  long long negative_reduced_cost_events = 0;
  long long monge_fallbacks = 0;
  long long separator_fallbacks = 0;
  long long klein_pivots = 0;
  long long mssp_dense_fallbacks = 0;
  long long stitch_repeated_arcs = 0;
  long long base_cases = 0;
  double total_ms = 0.0;

  void add_level(const LevelRecord& r) {
    std::lock_guard<std::mutex> lock(mu_);
    levels.push_back(r);
  }
  void add_separator(const SeparatorRecord& r) {
    std::lock_guard<std::mutex> lock(mu_);
    separators.push_back(r);
  }
  template <typename F>
  void update(F f) {
    std::lock_guard<std::mutex> lock(mu_);
    f(*this);
  }

 private:
  std::mutex mu_;
};

struct EngineConfig {
  int base_case_n = 32;
  MsspMode mssp_mode = MsspMode::Dense;
  DdgMode ddg_mode = DdgMode::Dense;
  bool parallel = false;
  std::uint64_t seed = 0;
  Stats* stats_sink = nullptr;
};

inline std::uint64_t level_seed(std::uint64_t seed, int depth) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(depth + 1);
  x ^= x >> 31;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 29;
  return x;
}

template <typename Scalar>
struct Prepared {
  Normalized<Scalar> norm;
  std::optional<NegativeCycle<Scalar>> negative;  // arcs index the input graph
  Scalar W = Scalar(1);
  Scalar threshold = Scalar(1);
  PriceFunction<Scalar> prices;  // indexed by normalized vertex id
};

// Normalizes, screens for negative cycles and computes W, the threshold and a
// global price function.
template <typename Scalar>
Prepared<Scalar> prepare(const PlanarGraph<Scalar>& g) {
  Prepared<Scalar> p;
  p.negative = detect_negative_cycle(Digraph<Scalar>::from_graph(g));
  p.norm = normalize(g);
  p.W = big_weight(p.norm.graph);
  p.threshold = girth_threshold(p.norm.graph);
  if (!p.negative) p.prices = price_function(p.norm.graph);
  return p;
}

// One recursion node: the separator, both pieces and their saturated graphs.
template <typename Scalar>
struct LevelSplit {
  SeparatorCycle separator;
  Piece<Scalar> piece1;
  Piece<Scalar> piece2;
};

template <typename Scalar>
PriceFunction<Scalar> piece_prices(const PlanarGraph<Scalar>& g, const PriceFunction<Scalar>& global) {
  PriceFunction<Scalar> p(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) p[v] = global[g.label(v)];
  return p;
}

// Splits a triangulated node.  Returns nothing when no separator makes
// progress; the caller then solves the node directly.
template <typename Scalar>
std::optional<LevelSplit<Scalar>> split_level(const PlanarGraph<Scalar>& g, int depth, Scalar W,
                                              const EngineConfig& cfg) {
  SeparatorOptions opt;
  opt.seed = level_seed(cfg.seed, depth);
  SeparatorCycle c = cycle_separator(g, opt);
  if (cfg.stats_sink) {
    SeparatorRecord r;
    r.level = depth;
    r.n = g.num_vertices();
    r.size = c.size();
    r.inside = c.inside_count;
    r.outside = c.outside_count;
    r.within_bounds = !c.empty() && meets_separator_bounds(c, g.num_vertices());
    cfg.stats_sink->add_separator(r);
  }
  if (!splits_graph(c, g.num_vertices())) {
    if (cfg.stats_sink) cfg.stats_sink->update([](Stats& s) { ++s.separator_fallbacks; });
    return std::nullopt;
  }
  auto [p1, p2] = split(g, c);
  p1.graph = saturate(p1.graph, W);
  p2.graph = saturate(p2.graph, W);
  return LevelSplit<Scalar>{std::move(c), std::move(p1), std::move(p2)};
}

template <typename Scalar>
DenseDistanceGraph<Scalar> level_ddg(const LevelSplit<Scalar>& s, const PriceFunction<Scalar>& global,
                                     const EngineConfig& cfg) {
  MsspStats ms;
  BoundaryMatrix<Scalar> b1 = boundary_all_pairs(s.piece1, piece_prices(s.piece1.graph, global), cfg.mssp_mode, &ms);
  BoundaryMatrix<Scalar> b2 = boundary_all_pairs(s.piece2, piece_prices(s.piece2.graph, global), cfg.mssp_mode, &ms);
  b1.boundary = s.separator.vertices;
  b2.boundary = s.separator.vertices;
  if (cfg.stats_sink)
    cfg.stats_sink->update([&](Stats& st) {
      st.klein_pivots += ms.pivots;
      st.mssp_dense_fallbacks += ms.dense_fallbacks;
    });
  return build_ddg(b1, b2);
}

template <typename Scalar>
std::optional<HCycle<Scalar>> level_min_cycle(const DenseDistanceGraph<Scalar>& h, Scalar threshold,
                                              const EngineConfig& cfg) {
  DdgStats ds;
  std::optional<HCycle<Scalar>> c;
  try {
    c = min_cycle(h, threshold, cfg.ddg_mode, &ds);
  } catch (const NegativeReducedCost&) {
    if (cfg.stats_sink) cfg.stats_sink->update([](Stats& st) { ++st.negative_reduced_cost_events; });
    throw;
  }
  if (cfg.stats_sink && ds.monge_fallbacks)
    cfg.stats_sink->update([&](Stats& st) { st.monge_fallbacks += ds.monge_fallbacks; });
  return c;
}

// Minimum cycle by one Dijkstra per vertex on reduced costs; used when a node
// is too large for the oracle and has no usable separator.  Arc ids index g.
template <typename Scalar>
std::optional<CycleWitness<Scalar>> scan_min_cycle(const PlanarGraph<Scalar>& g, const PriceFunction<Scalar>& prices) {
  Digraph<Scalar> dg = Digraph<Scalar>::from_graph(g);
  std::vector<std::vector<ArcId>> into(g.num_vertices());
  for (ArcId a = 0; a < g.num_arcs(); ++a) into[g.arc(a).head].push_back(a);
  std::optional<CycleWitness<Scalar>> best;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (into[v].empty()) continue;
    SsspResult<Scalar> r = dijkstra(dg, v, prices);
    for (ArcId a : into[v]) {
      VertexId u = g.arc(a).tail;
      if (!r.reachable(u)) continue;
      Scalar w = r.dist[u] + g.arc(a).weight;
      if (!best || w < best->weight) {
        best.emplace();
        best->weight = w;
        best->arcs = r.path_to(u, dg);
        best->arcs.push_back(a);
      }
    }
  }
  return best;
}

// Minimum cycle weight in a triangulated graph and the branch path that
// attains it.  weight is infinity<Scalar>() when the graph has no cycle.
template <typename Scalar>
struct RecurseResult {
  Scalar weight = infinity<Scalar>();
  std::vector<Branch> path;
};

template <typename Scalar>
class GirthEngine {
 public:
  explicit GirthEngine(EngineConfig cfg = {}) : cfg_(cfg) {
    if (cfg_.base_case_n < 4) throw InvalidSpec("base case size must be at least 4");
  }

  const EngineConfig& config() const { return cfg_; }

  GirthValue<Scalar> girth(const PlanarGraph<Scalar>& g) {
    auto t0 = std::chrono::steady_clock::now();
    Prepared<Scalar> p = prepare(g);
    GirthValue<Scalar> v = girth(p, nullptr);
    if (cfg_.stats_sink)
      cfg_.stats_sink->total_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return v;
  }

  // Classification on a prepared instance; path receives the winning branch
  // path when the minimum comes from the recursion.
  GirthValue<Scalar> girth(const Prepared<Scalar>& p, std::vector<Branch>* path) {
    if (p.negative) return GirthValue<Scalar>::minus_infinity();
    GirthValue<Scalar> best = p.norm.selfloop_candidate;
    const PlanarGraph<Scalar>& ng = p.norm.graph;
    if (ng.num_vertices() <= 2) {
      RecurseResult<Scalar> r = small_case(ng, p.threshold);
      if (!is_infinite(r.weight) && GirthValue<Scalar>::finite(r.weight) < best) {
        best = GirthValue<Scalar>::finite(r.weight);
        if (path) *path = r.path;
      }
      return best;
    }
    PlanarGraph<Scalar> tri = triangulate(ng, p.W);
    RecurseResult<Scalar> r = recurse(tri, 0, p);
    if (!is_infinite(r.weight) && r.weight < p.threshold) {
      auto cand = GirthValue<Scalar>::finite(r.weight);
      if (cand < best) {
        best = cand;
        if (path) *path = std::move(r.path);
      }
    }
    return best;
  }

  RecurseResult<Scalar> recurse(const PlanarGraph<Scalar>& g, int depth, const Prepared<Scalar>& p) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = g.num_vertices();
    if (n <= cfg_.base_case_n) return base_case(g, p);
    std::optional<LevelSplit<Scalar>> s = split_level(g, depth, p.W, cfg_);
    if (!s) return base_case(g, p);

    LevelRecord rec;
    rec.level = depth;
    rec.n = n;
    rec.separator_size = s->separator.size();
    rec.piece1_n = s->piece1.graph.num_vertices();
    rec.piece2_n = s->piece2.graph.num_vertices();

    RecurseResult<Scalar> best;
    {
      DenseDistanceGraph<Scalar> h = level_ddg(*s, p.prices, cfg_);
      std::optional<HCycle<Scalar>> c = level_min_cycle(h, p.threshold, cfg_);
      if (c) {
        best.weight = c->weight;
        best.path = {Branch::Cross};
        rec.cross_min = static_cast<double>(c->weight);
      }
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (cfg_.stats_sink) cfg_.stats_sink->add_level(rec);

    auto run_piece = [this, &p, depth](Piece<Scalar> piece) {
      PlanarGraph<Scalar> t = triangulate(piece.graph, p.W);
      piece = Piece<Scalar>{};
      return recurse(t, depth + 1, p);
    };
    RecurseResult<Scalar> r1, r2;
    if (cfg_.parallel && depth < 3) {
      auto fut = std::async(std::launch::async, run_piece, std::move(s->piece1));
      Piece<Scalar> p2 = std::move(s->piece2);
      s.reset();
      r2 = run_piece(std::move(p2));
      r1 = fut.get();
    } else {
      Piece<Scalar> p1 = std::move(s->piece1);
      Piece<Scalar> p2 = std::move(s->piece2);
      s.reset();
      r1 = run_piece(std::move(p1));
      r2 = run_piece(std::move(p2));
    }
    if (r1.weight < best.weight) {
      best.weight = r1.weight;
      best.path.assign(1, Branch::Piece1);
      best.path.insert(best.path.end(), r1.path.begin(), r1.path.end());
    }
    if (r2.weight < best.weight) {
      best.weight = r2.weight;
      best.path.assign(1, Branch::Piece2);
      best.path.insert(best.path.end(), r2.path.begin(), r2.path.end());
    }
    return best;
  }

  RecurseResult<Scalar> base_case(const PlanarGraph<Scalar>& g, const Prepared<Scalar>& p) {
    if (cfg_.stats_sink) cfg_.stats_sink->update([](Stats& s) { ++s.base_cases; });
    RecurseResult<Scalar> r;
    if (g.num_vertices() > cfg_.base_case_n) {
      auto c = scan_min_cycle(g, piece_prices(g, p.prices));
      if (c) {
        r.weight = c->weight;
        r.path = {Branch::Base};
      }
      return r;
    }
    GirthValue<Scalar> v = oracle_girth(g);
    if (v.is_minus_infinity()) throw InternalInconsistency("negative cycle inside a screened piece");
    if (v.is_finite()) {
      r.weight = v.weight();
      r.path = {Branch::Base};
    }
    return r;
  }

  static RecurseResult<Scalar> small_case(const PlanarGraph<Scalar>& g, Scalar threshold) {
    RecurseResult<Scalar> r;
    GirthValue<Scalar> v = oracle_girth(g);
    if (v.is_finite() && v.weight() < threshold) {
      r.weight = v.weight();
      r.path = {Branch::Base};
    }
    return r;
  }

 private:
  EngineConfig cfg_;
};

template <typename Scalar>
GirthValue<Scalar> girth(const PlanarGraph<Scalar>& g, const EngineConfig& cfg = {}) {
  return GirthEngine<Scalar>(cfg).girth(g);
}

inline std::string to_string(Branch b) {
  switch (b) {
    case Branch::Base: return "base";
    case Branch::Cross: return "cross";
    case Branch::Piece1: return "piece1";
    case Branch::Piece2: return "piece2";
  }
  return "?";
}

}  // namespace pgirth
