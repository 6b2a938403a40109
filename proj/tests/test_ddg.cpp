#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "helpers.hpp"
#include "pgirth/ddg.hpp"
#include "pgirth/engine.hpp"
#include "pgirth/oracle.hpp"

using namespace pgirth;
using namespace pgirth::testing;

namespace {

using I = std::int64_t;
const I kInf = infinity<I>();

BoundaryMatrix<I> bm(std::vector<std::vector<I>> rows) {
  BoundaryMatrix<I> b;
  const int m = static_cast<int>(rows.size());
  b.dist = Matrix<I>(m, m);
  for (int i = 0; i < m; ++i) {
    b.boundary.push_back(i);
    for (int j = 0; j < m; ++j) b.dist(i, j) = rows[i][j];
  }
  return b;
}

// H with both pieces given directly.
DenseDistanceGraph<I> h_of(const Matrix<I>& w1, const Matrix<I>& w2) {
  BoundaryMatrix<I> a, b;
  for (int i = 0; i < w1.rows(); ++i) a.boundary.push_back(i);
  b.boundary = a.boundary;
  a.dist = w1;
  b.dist = w2;
  return build_ddg(a, b);
}

Matrix<I> floyd(const Matrix<I>& w) {
  const int m = static_cast<int>(w.rows());
  Matrix<I> d = w;
  for (int i = 0; i < m; ++i) d(i, i) = std::min<I>(d(i, i), 0);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) d(i, j) = std::min(d(i, j), sat_add(d(i, k), d(k, j)));
  return d;
}

// min over i != j of d(i, j) + w(j, i).
I floyd_girth(const Matrix<I>& w) {
  Matrix<I> d = floyd(w);
  I best = kInf;
  for (int i = 0; i < w.rows(); ++i)
    for (int j = 0; j < w.rows(); ++j)
      if (i != j) best = std::min(best, sat_add(d(i, j), w(j, i)));
  return best;
}

// Random matrix without negative cycles: c + p(i) - p(j), some entries absent.
std::vector<I> random_potential(std::mt19937_64& rng, int m) {
  std::vector<I> p(m);
  for (auto& x : p) x = static_cast<I>(rng() % 7) - 3;
  return p;
}

Matrix<I> potential_matrix(std::mt19937_64& rng, const std::vector<I>& p, int cmax, double absent) {
  const int m = static_cast<int>(p.size());
  std::uniform_real_distribution<double> coin(0, 1);
  Matrix<I> w(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j || coin(rng) < absent) w(i, j) = kInf;
      else w(i, j) = static_cast<I>(rng() % (cmax + 1)) + p[i] - p[j];
    }
  return w;
}

// Both pieces share one potential, so H has no negative cycle.
DenseDistanceGraph<I> two_pieces(std::mt19937_64& rng, int m, int cmax, double absent) {
  std::vector<I> p = random_potential(rng, m);
  return h_of(potential_matrix(rng, p, cmax, absent), potential_matrix(rng, p, cmax, absent));
}

struct Best {
  I weight = kInf;
  int edges = 0;
};

// Exhaustive search over all simple cycles of H.
Best enumerate_cycles(const Matrix<I>& w) {
  const int m = static_cast<int>(w.rows());
  Best b;
  std::vector<int> path;
  std::vector<char> used(m, 0);
  std::function<void(int, I)> dfs = [&](int v, I acc) {
    int s = path.front();
    for (int u = 0; u < m; ++u) {
      if (is_infinite(w(v, u))) continue;
      if (u == s && path.size() >= 2) {
        I tot = acc + w(v, u);
        int e = static_cast<int>(path.size());
        if (tot < b.weight || (tot == b.weight && e < b.edges)) b = {tot, e};
      }
      if (used[u] || u < s) continue;
      used[u] = 1;
      path.push_back(u);
      dfs(u, acc + w(v, u));
      path.pop_back();
      used[u] = 0;
    }
  };
  for (int s = 0; s < m; ++s) {
    path = {s};
    used.assign(m, 0);
    used[s] = 1;
    dfs(s, 0);
  }
  return b;
}

void expect_valid_cycle(const DenseDistanceGraph<I>& h, const HCycle<I>& c) {
  ASSERT_GE(c.edge_count(), 2);
  I w = 0;
  std::vector<int> seen;
  for (int k = 0; k < c.edge_count(); ++k) {
    const HEdge& e = c.edges[k];
    EXPECT_EQ(e.to, c.edges[(k + 1) % c.edge_count()].from);
    EXPECT_FALSE(is_infinite(h.wH(e.from, e.to)));
    w += h.wH(e.from, e.to);
    seen.push_back(e.from);
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_TRUE(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  EXPECT_EQ(w, c.weight);
}

struct LevelInstance {
  Prepared<I> prep;
  PlanarGraph<I> tri;
  LevelSplit<I> split;
  DenseDistanceGraph<I> h;
};

std::optional<LevelInstance> level_instance(const GenSpec& spec, MsspMode mode = MsspMode::Dense) {
  PlanarGraph<I> g = make(spec);
  LevelInstance li;
  li.prep = prepare(g);
  if (li.prep.negative || li.prep.norm.graph.num_vertices() < 5) return std::nullopt;
  li.tri = triangulate(li.prep.norm.graph, li.prep.W);
  EngineConfig cfg;
  cfg.mssp_mode = mode;
  auto s = split_level(li.tri, 0, li.prep.W, cfg);
  if (!s) return std::nullopt;
  li.split = std::move(*s);
  li.h = level_ddg(li.split, li.prep.prices, cfg);
  return li;
}

}  // namespace

TEST(BuildDdg, EntryMinimaAndOrigins) {
  DenseDistanceGraph<I> h = build_ddg(bm({{0, 3, kInf}, {7, 0, 2}, {1, 6, 0}}), bm({{0, 5, 4}, {7, 0, 9}, {kInf, 1, 0}}));
  EXPECT_EQ(h.wH(0, 1), 3);
  EXPECT_EQ(h.origin_of(0, 1), Origin::Piece1);
  EXPECT_EQ(h.wH(0, 2), 4);
  EXPECT_EQ(h.origin_of(0, 2), Origin::Piece2);
  EXPECT_EQ(h.wH(1, 0), 7);
  EXPECT_EQ(h.origin_of(1, 0), Origin::Piece1);
  EXPECT_EQ(h.wH(2, 1), 1);
  EXPECT_NE(h.wH(0, 1), h.wH(1, 0));
  EXPECT_TRUE(is_infinite(h.wH(1, 1)));
}

TEST(BuildDdg, BothInfiniteHasNoOrigin) {
  DenseDistanceGraph<I> h = build_ddg(bm({{0, kInf}, {1, 0}}), bm({{0, kInf}, {2, 0}}));
  EXPECT_TRUE(is_infinite(h.wH(0, 1)));
  EXPECT_EQ(h.origin_of(0, 1), Origin::None);
}

TEST(BuildDdg, BoundaryMismatch) {
  BoundaryMatrix<I> a = bm({{0, 1}, {1, 0}});
  BoundaryMatrix<I> b = bm({{0, 1}, {1, 0}});
  b.boundary = {1, 0};
  EXPECT_THROW(build_ddg(a, b), BoundaryMismatch);
  EXPECT_THROW(build_ddg(a, bm({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}})), BoundaryMismatch);
}

TEST(ReduceCosts, NonnegativeAndTelescoping) {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 100; ++it) {
    int m = 2 + static_cast<int>(rng() % 12);
    DenseDistanceGraph<I> h = two_pieces(rng, m, 20, 0.2);
    std::vector<I> d = ddg_potentials(h);
    Matrix<I> r = reduce_costs(h, d);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (is_infinite(h.wH(i, j))) {
          EXPECT_TRUE(is_infinite(r(i, j)));
          continue;
        }
        EXPECT_GE(r(i, j), 0);
        for (int k = 0; k < m; ++k) {
          if (k == i || k == j || is_infinite(h.wH(j, k)) || is_infinite(h.wH(k, i))) continue;
          EXPECT_EQ(r(i, j) + r(j, k) + r(k, i), h.wH(i, j) + h.wH(j, k) + h.wH(k, i));
        }
      }
  }
}

TEST(ReduceCosts, TreeEdgeIsZero) {
  Matrix<I> w1(3, 3), w2(3, 3);
  w1 << kInf, 2, 9, kInf, kInf, -1, 4, kInf, kInf;
  w2.setConstant(kInf);
  DenseDistanceGraph<I> h = h_of(w1, w2);
  std::vector<I> d = {0, 2, 1};
  Matrix<I> r = reduce_costs(h, d);
  EXPECT_EQ(r(0, 1), 0);
  EXPECT_EQ(r(1, 2), 0);
  EXPECT_EQ(r(0, 2), 8);
}

TEST(ReduceCosts, WrongDistancesThrow) {
  Matrix<I> w(2, 2);
  w << kInf, 1, 1, kInf;
  EXPECT_THROW(reduce_matrix(w, std::vector<I>{0, 5}), NegativeReducedCost);
}

TEST(LexDijkstra, PrefersFewerHopsOnTies) {
  Matrix<I> w(3, 3);
  w << kInf, 2, 4, kInf, kInf, 2, kInf, kInf, kInf;
  LexResult<I> r = lex_dijkstra(w, 0);
  EXPECT_EQ(r.dist[2], 4);
  EXPECT_EQ(r.hops[2], 1);
  EXPECT_EQ(r.parent[2], 0);
  EXPECT_EQ(r.dist[0], 0);
  EXPECT_EQ(r.hops[0], 0);
  EXPECT_EQ(r.parent[0], -1);
}

TEST(LexDijkstra, MatchesPlainDijkstra) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    int m = 2 + static_cast<int>(rng() % 20);
    Matrix<I> w = potential_matrix(rng, random_potential(rng, m), 6, 0.3);
    std::vector<I> d = ddg_potentials(h_of(w, Matrix<I>::Constant(m, m, kInf)));
    Matrix<I> r = reduce_matrix(w, d);
    std::vector<WeightedArc<I>> arcs;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (!is_infinite(r(i, j))) arcs.push_back({i, j, r(i, j)});
    Digraph<I> g(m, arcs);
    int s = static_cast<int>(rng() % m);
    LexResult<I> lex = lex_dijkstra(r, s);
    SsspResult<I> ref = dijkstra(g, s, PriceFunction<I>(m, 0));
    Matrix<I> fl = floyd(r);
    for (int v = 0; v < m; ++v) {
      EXPECT_EQ(lex.dist[v], ref.dist[v]);
      if (!ref.reachable(v)) {
        EXPECT_EQ(lex.hops[v], -1);
        continue;
      }
      if (v != s) {
        int p = lex.parent[v];
        ASSERT_GE(p, 0);
        EXPECT_EQ(lex.dist[p] + r(p, v), lex.dist[v]);
        EXPECT_EQ(lex.hops[p] + 1, lex.hops[v]);
      }
      EXPECT_EQ(fl(s, v), lex.dist[v]);
    }
  }
}

TEST(LexDijkstra, HopsAreMinimalAmongShortest) {
  std::mt19937_64 rng(10);
  for (int it = 0; it < 100; ++it) {
    int m = 2 + static_cast<int>(rng() % 10);
    Matrix<I> w = Matrix<I>::Constant(m, m, kInf);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j && rng() % 4) w(i, j) = static_cast<I>(rng() % 3);
    LexResult<I> lex = lex_dijkstra(w, 0);
    // Bellman-Ford over (weight, hops) pairs.
    std::vector<std::pair<I, int>> best(m, {kInf, 0});
    best[0] = {0, 0};
    for (int round = 0; round < m; ++round)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (is_infinite(best[i].first) || is_infinite(w(i, j))) continue;
          std::pair<I, int> c = {best[i].first + w(i, j), best[i].second + 1};
          if (c < best[j]) best[j] = c;
        }
    for (int v = 0; v < m; ++v) {
      EXPECT_EQ(lex.dist[v], best[v].first);
      if (!is_infinite(best[v].first)) EXPECT_EQ(lex.hops[v], best[v].second);
    }
  }
}

TEST(MinCycle, TwoVertexExample) {
  Matrix<I> w1(2, 2), w2(2, 2);
  w1 << kInf, 1, 2, kInf;
  w2.setConstant(kInf);
  auto c = min_cycle(h_of(w1, w2), I(1000));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->weight, 3);
  EXPECT_EQ(c->edge_count(), 2);
}

TEST(MinCycle, AboveThresholdIsNone) {
  Matrix<I> w1(3, 3);
  w1 << kInf, 50, 50, 50, kInf, 50, 50, 50, kInf;
  DenseDistanceGraph<I> h = h_of(w1, w1);
  EXPECT_FALSE(min_cycle(h, I(100)));
  EXPECT_TRUE(min_cycle(h, I(101)));
  EXPECT_FALSE(min_cycle(h_of(Matrix<I>::Constant(1, 1, kInf), Matrix<I>::Constant(1, 1, kInf)), I(100)));
}

TEST(MinCycle, MatchesFloydWarshallOnRandomH) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    int m = 2 + static_cast<int>(rng() % 14);
    DenseDistanceGraph<I> h = two_pieces(rng, m, 10, 0.3);
    I ref = floyd_girth(h.wH);
    auto c = min_cycle(h, kInf - 1);
    if (is_infinite(ref)) {
      EXPECT_FALSE(c);
      continue;
    }
    ASSERT_TRUE(c);
    EXPECT_EQ(c->weight, ref);
    expect_valid_cycle(h, *c);
  }
}

TEST(MinCycle, ExhaustiveMinimumEdgeCountSmallH) {
  std::mt19937_64 rng(12);
  int ties = 0;
  for (int it = 0; it < 2000; ++it) {
    int m = 2 + static_cast<int>(rng() % 6);
    DenseDistanceGraph<I> h = two_pieces(rng, m, 2, 0.25);
    Best b = enumerate_cycles(h.wH);
    for (DdgMode mode : {DdgMode::Dense, DdgMode::Monge}) {
      auto c = min_cycle(h, kInf - 1, mode);
      if (is_infinite(b.weight)) {
        EXPECT_FALSE(c);
        continue;
      }
      ASSERT_TRUE(c);
      EXPECT_EQ(c->weight, b.weight);
      EXPECT_EQ(c->edge_count(), b.edges);
      expect_valid_cycle(h, *c);
    }
    if (!is_infinite(b.weight) && b.edges > 2) ++ties;
  }
  EXPECT_GT(ties, 40);
}

TEST(MinCycle, DeterministicTieBreak) {
  Matrix<I> w(3, 3);
  w << kInf, 1, 1, 1, kInf, 1, 1, 1, kInf;
  auto c = min_cycle(h_of(w, w), I(100));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->weight, 2);
  EXPECT_EQ(c->edges.front().from, 0);
  EXPECT_EQ(c->edges.front().to, 1);
}

TEST(Ddg, DistancesEqualGraphDistances) {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int it = 0; it < 40; ++it) {
    auto li = level_instance(random_spec(rng, 40, 256));
    if (!li) continue;
    auto ap = oracle_apsp(li->tri);
    ASSERT_TRUE(std::holds_alternative<DistanceTable<I>>(ap));
    const auto& dg = std::get<DistanceTable<I>>(ap).dist;
    Matrix<I> dh = floyd(li->h.wH);
    const auto& c = li->split.separator.vertices;
    for (int i = 0; i < li->h.size(); ++i)
      for (int j = 0; j < li->h.size(); ++j)
        if (i != j) EXPECT_EQ(dh(i, j), dg(c[i], c[j]));
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Ddg, MinCycleEqualsBestCycleThroughTwoSeparatorVertices) {
  std::mt19937_64 rng(14);
  int found = 0;
  for (int it = 0; it < 40; ++it) {
    auto li = level_instance(random_spec(rng, 40, 200));
    if (!li) continue;
    auto ap = oracle_apsp(li->tri);
    const auto& dg = std::get<DistanceTable<I>>(ap).dist;
    const auto& c = li->split.separator.vertices;
    I best = kInf;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        if (i != j) best = std::min(best, sat_add(dg(c[i], c[j]), dg(c[j], c[i])));
    auto hc = min_cycle(li->h, li->prep.threshold);
    if (best < li->prep.threshold) {
      ASSERT_TRUE(hc);
      EXPECT_EQ(hc->weight, best);
      ++found;
    } else {
      EXPECT_FALSE(hc);
    }
  }
  EXPECT_GT(found, 5);
}

TEST(Ddg, AcyclicInputHasNoCycleBelowThreshold) {
  std::mt19937_64 rng(15);
  for (int it = 0; it < 10; ++it) {
    GenSpec spec = random_spec(rng, 40, 150);
    spec.orientation = Orientation::Acyclic;
    auto li = level_instance(spec);
    if (!li) continue;
    EXPECT_FALSE(min_cycle(li->h, li->prep.threshold));
    EXPECT_FALSE(min_cycle(li->h, li->prep.threshold, DdgMode::Monge));
  }
}

TEST(Monge, BlocksOfGeneratedPiecesSatisfyQuadrangle) {
  std::mt19937_64 rng(16);
  long long quads = 0, bad = 0;
  for (int it = 0; it < 40; ++it) {
    auto li = level_instance(random_spec(rng, 40, 300));
    if (!li) continue;
    const int m = li->h.size();
    for (const Matrix<I>* w : {&li->h.w1, &li->h.w2}) {
      // X = [lo, mid), Y = [mid, hi) with Y read backwards, and the mirror block.
      std::function<void(int, int)> audit = [&](int lo, int hi) {
        if (hi - lo < 2) return;
        int mid = (lo + hi) / 2;
        for (int pass = 0; pass < 2; ++pass) {
          int rlo = pass ? mid : lo, rhi = pass ? hi : mid;
          int clo = pass ? lo : mid, chi = pass ? mid : hi;
          for (int x = rlo; x + 1 < rhi; ++x)
            for (int y = chi - 1; y - 1 >= clo; --y) {
              I a = (*w)(x, y), d = (*w)(x + 1, y - 1), b = (*w)(x, y - 1), c = (*w)(x + 1, y);
              ++quads;
              if (a + d > b + c) ++bad;
            }
        }
        audit(lo, mid);
        audit(mid, hi);
      };
      audit(0, m);
    }
  }
  EXPECT_GT(quads, 1000);
  EXPECT_EQ(bad, 0);
}

TEST(Monge, RunEqualsLexDijkstraOnGeneratedH) {
  std::mt19937_64 rng(17);
  int compared = 0;
  for (int it = 0; it < 40; ++it) {
    auto li = level_instance(random_spec(rng, 40, 400));
    if (!li) continue;
    const DenseDistanceGraph<I>& h = li->h;
    std::vector<I> d = ddg_potentials(h);
    Matrix<I> hp = reduce_matrix(h.wH, d);
    Matrix<I> r1 = reduce_matrix(h.w1, d), r2 = reduce_matrix(h.w2, d);
    MongeStructure<I> ms({&r1, &r2}, h.size());
    for (int s = 0; s < h.size(); ++s) {
      LexResult<I> a = ms.run(s), b = lex_dijkstra(hp, s);
      EXPECT_EQ(a.dist, b.dist);
      EXPECT_EQ(a.hops, b.hops);
      EXPECT_EQ(a.parent, b.parent);
    }
    auto c1 = min_cycle(h, li->prep.threshold, DdgMode::Dense);
    DdgStats st;
    auto c2 = min_cycle(h, li->prep.threshold, DdgMode::Monge, &st);
    EXPECT_EQ(st.monge_fallbacks, 0);
    ASSERT_EQ(c1.has_value(), c2.has_value());
    if (c1) {
      EXPECT_EQ(c1->weight, c2->weight);
      EXPECT_EQ(c1->edges, c2->edges);
    }
    ++compared;
  }
  EXPECT_GT(compared, 30);
}

TEST(Monge, SingleSourceBaseCase) {
  Matrix<I> w(2, 2);
  w << kInf, 3, 4, kInf;
  Matrix<I> z = Matrix<I>::Constant(2, 2, 10);
  MongeStructure<I> ms({&w, &z}, 2);
  LexResult<I> r = ms.run(0);
  EXPECT_EQ(r.dist[0], 0);
  EXPECT_EQ(r.hops[0], 0);
  EXPECT_EQ(r.dist[1], 3);
  EXPECT_EQ(r.parent[1], 0);
}

TEST(Monge, ViolationFallsBackToLex) {
  // The off-diagonal block [0,2) x [2,4) read with columns reversed breaks the
  // quadrangle inequality.
  Matrix<I> w(4, 4);
  w << kInf, 1, 0, 9, 1, kInf, 9, 0, 5, 5, kInf, 1, 5, 5, 1, kInf;
  Matrix<I> far = Matrix<I>::Constant(4, 4, 100);
  EXPECT_THROW(MongeStructure<I>({&w, &far}, 4), MongeViolation);
  DenseDistanceGraph<I> h = h_of(w, far);
  DdgStats st;
  auto a = min_cycle(h, I(1000), DdgMode::Monge, &st);
  auto b = min_cycle(h, I(1000), DdgMode::Dense);
  EXPECT_EQ(st.monge_fallbacks, 1);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->weight, b->weight);
  EXPECT_EQ(a->edges, b->edges);
}
