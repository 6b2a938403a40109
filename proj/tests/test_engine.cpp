#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "pgirth/engine.hpp"
#include "pgirth/oracle.hpp"

using namespace pgirth;
using namespace pgirth::testing;

namespace {

using I = std::int64_t;

EngineConfig config(MsspMode m = MsspMode::Dense, DdgMode d = DdgMode::Dense) {
  EngineConfig c;
  c.mssp_mode = m;
  c.ddg_mode = d;
  return c;
}

// r x c grid whose outer boundary is a directed unit-weight cycle; every
// interior edge points from the smaller to the larger id with weight 500.
PlanarGraph<I> planted_ring(int r, int c) {
  std::vector<Point> pts;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) pts.push_back({static_cast<double>(j), static_cast<double>(-i)});
  auto id = [c](int i, int j) { return i * c + j; };
  auto on_ring = [&](int a, int b) {
    int ia = a / c, ja = a % c, ib = b / c, jb = b % c;
    bool ea = ia == 0 || ia == r - 1 || ja == 0 || ja == c - 1;
    bool eb = ib == 0 || ib == r - 1 || jb == 0 || jb == c - 1;
    if (!ea || !eb) return false;
    return (ia == ib && (ia == 0 || ia == r - 1)) || (ja == jb && (ja == 0 || ja == c - 1));
  };
  std::vector<ArcSpec<I>> arcs;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      std::vector<int> nb;
      if (j + 1 < c) nb.push_back(id(i, j + 1));
      if (i + 1 < r) nb.push_back(id(i + 1, j));
      if (i + 1 < r && j + 1 < c) nb.push_back(id(i + 1, j + 1));
      for (int b : nb) {
        int a = id(i, j);
        if (!on_ring(a, b)) {
          arcs.push_back({a, b, 500});
          continue;
        }
        // clockwise around the ring: top row rightwards, right column down,
        // bottom row leftwards, left column up
        int ia = a / c, ib = b / c;
        bool forward = (ia == 0 && ib == 0) || (a % c == c - 1 && b % c == c - 1);
        if (forward) arcs.push_back({a, b, 1});
        else arcs.push_back({b, a, 1});
      }
    }
  return from_points(pts, arcs);
}

}  // namespace

TEST(Girth, TrivialExamples) {
  EXPECT_EQ(girth(directed_triangle()), GirthValue<I>::finite(6));
  PlanarGraph<I> neg = from_points({{0, 0}, {1, 0}}, {{0, 1, 1}, {1, 0, -2}});
  EXPECT_TRUE(girth(neg).is_minus_infinity());
  PlanarGraph<I> one = from_points({{0, 0}, {1, 0}}, {{0, 1, 1}});
  EXPECT_TRUE(girth(one).is_plus_infinity());
  std::vector<ArcSpec<I>> none;
  EXPECT_TRUE(girth(build_graph<I>(1, none, {{}})).is_plus_infinity());
  EXPECT_TRUE(girth(build_graph<I>(0, none, {})).is_plus_infinity());
}

TEST(Girth, SelfLoopCandidate) {
  std::vector<ArcSpec<I>> arcs = {{0, 1, 1}, {1, 2, 2}, {2, 0, 3}, {0, 0, 1}};
  std::vector<std::vector<Endpoint>> rot = {
      {{0, false}, {3, false}, {3, true}, {2, true}}, {{1, false}, {0, true}}, {{2, false}, {1, true}}};
  EXPECT_EQ(girth(build_graph<I>(3, arcs, rot)), GirthValue<I>::finite(1));
  arcs[3].weight = -1;
  EXPECT_TRUE(girth(build_graph<I>(3, arcs, rot)).is_minus_infinity());
  arcs[3].weight = 9;
  EXPECT_EQ(girth(build_graph<I>(3, arcs, rot)), GirthValue<I>::finite(6));
}

TEST(Girth, TwoVertexCases) {
  PlanarGraph<I> pair = from_points({{0, 0}, {1, 0}}, {{0, 1, 3}, {1, 0, 4}, {0, 1, 1}});
  EXPECT_EQ(girth(pair), GirthValue<I>::finite(5));
}

TEST(Girth, InvalidBaseCase) {
  EngineConfig c;
  c.base_case_n = 3;
  EXPECT_THROW(GirthEngine<I>{c}, InvalidSpec);
}

TEST(Girth, EqualsOracleOnGeneratedInstances) {
  std::mt19937_64 rng(31);
  int finite = 0, minus = 0, plus = 0;
  for (int it = 0; it < 300; ++it) {
    GenSpec spec = random_spec(rng, 8, 300);
    if (it % 5 == 4) spec.safety = Safety::Raw;
    PlanarGraph<I> g = make(spec);
    GirthValue<I> ref = oracle_girth(g);
    EngineConfig cfg = config(it % 2 ? MsspMode::Klein : MsspMode::Dense, it % 3 ? DdgMode::Dense : DdgMode::Monge);
    cfg.seed = rng();
    GirthValue<I> got = girth(g, cfg);
    EXPECT_EQ(got, ref) << "iteration " << it;
    finite += ref.is_finite();
    minus += ref.is_minus_infinity();
    plus += ref.is_plus_infinity();
  }
  EXPECT_GT(finite, 100);
  EXPECT_GT(minus, 5);
  EXPECT_GT(plus, 5);
}

TEST(Girth, SmallBaseCaseExercisesDeepRecursion) {
  std::mt19937_64 rng(32);
  for (int it = 0; it < 60; ++it) {
    GenSpec spec = random_spec(rng, 20, 200);
    spec.orientation = Orientation::Random;
    PlanarGraph<I> g = make(spec);
    EngineConfig cfg;
    cfg.base_case_n = 4 + static_cast<int>(rng() % 8);
    EXPECT_EQ(girth(g, cfg), oracle_girth(g));
  }
}

TEST(Girth, DoubleWeightsWithinTolerance) {
  std::mt19937_64 rng(33);
  for (int it = 0; it < 40; ++it) {
    GenSpec spec = random_spec(rng, 8, 200);
    InputGraph in = gen(spec);
    for (auto& a : in.arcs) a.real_weight = 0.37 * static_cast<double>(a.int_weight) + 0.001;
    in.integral = false;
    PlanarGraph<double> g = in.to_graph<double>();
    GirthValue<double> ref = oracle_girth(g);
    GirthValue<double> got = girth(g);
    ASSERT_EQ(ref.kind(), got.kind());
    if (ref.is_finite()) EXPECT_NEAR(got.weight(), ref.weight(), 1e-6 * std::max(1.0, std::abs(ref.weight())));
  }
}

TEST(Girth, SeedInvariance) {
  std::mt19937_64 rng(34);
  for (int it = 0; it < 40; ++it) {
    PlanarGraph<I> g = make(random_spec(rng, 40, 400));
    EngineConfig a, b;
    a.seed = 1;
    b.seed = 0xdeadbeefULL + it;
    EXPECT_EQ(girth(g, a), girth(g, b));
  }
}

TEST(Girth, ParallelMatchesSerial) {
  std::mt19937_64 rng(35);
  for (int it = 0; it < 20; ++it) {
    PlanarGraph<I> g = make(random_spec(rng, 100, 600));
    EngineConfig s, p;
    p.parallel = true;
    Prepared<I> prep = prepare(g);
    std::vector<Branch> ps, pp;
    GirthValue<I> vs = GirthEngine<I>(s).girth(prep, &ps);
    GirthValue<I> vp = GirthEngine<I>(p).girth(prep, &pp);
    EXPECT_EQ(vs, vp);
    EXPECT_EQ(ps, pp);
  }
}

TEST(Girth, ClassificationMatchesDetection) {
  std::mt19937_64 rng(36);
  for (int it = 0; it < 80; ++it) {
    GenSpec spec = random_spec(rng, 8, 200);
    spec.safety = Safety::Raw;
    spec.negative_fraction = 0.1 * static_cast<double>(it % 5);
    PlanarGraph<I> g = make(spec);
    EXPECT_EQ(girth(g).is_minus_infinity(), detect_negative_cycle(g).has_value());
  }
}

TEST(Girth, AllNegativeRawIsMinusInfinity) {
  for (Shape sh : {Shape::Grid, Shape::Wheel, Shape::Nested}) {
    GenSpec spec;
    spec.shape = sh;
    spec.rows = spec.cols = 6;
    spec.k = 12;
    spec.n = 40;
    spec.lo = spec.hi = -1;
    spec.negative_fraction = 1.0;
    spec.safety = Safety::Raw;
    EXPECT_TRUE(girth(make(spec)).is_minus_infinity());
  }
}

TEST(Recurse, BaseCaseIsOracle) {
  std::mt19937_64 rng(37);
  for (int it = 0; it < 30; ++it) {
    PlanarGraph<I> g = make(random_spec(rng, 4, 30));
    Prepared<I> p = prepare(g);
    if (p.negative || p.norm.graph.num_vertices() < 3) continue;
    PlanarGraph<I> t = triangulate(p.norm.graph, p.W);
    GirthEngine<I> e;
    RecurseResult<I> r = e.recurse(t, 0, p);
    GirthValue<I> o = oracle_girth(t);
    ASSERT_TRUE(o.is_finite());
    EXPECT_EQ(r.weight, o.weight());
    EXPECT_EQ(r.path, std::vector<Branch>{Branch::Base});
  }
}

TEST(Recurse, PlantedCrossingCycle) {
  for (auto [r, c] : {std::pair{8, 8}, std::pair{10, 12}, std::pair{14, 9}}) {
    PlanarGraph<I> g = planted_ring(r, c);
    const I ring = 2 * (r + c) - 4;
    ASSERT_EQ(oracle_girth(g), GirthValue<I>::finite(ring));
    for (MsspMode m : {MsspMode::Dense, MsspMode::Klein}) {
      Prepared<I> p = prepare(g);
      std::vector<Branch> path;
      GirthValue<I> v = GirthEngine<I>(config(m)).girth(p, &path);
      EXPECT_EQ(v, GirthValue<I>::finite(ring));
      ASSERT_FALSE(path.empty());
      EXPECT_EQ(path.back(), Branch::Cross);
    }
  }
}

TEST(Recurse, PieceMinimumEqualsPieceRecursion) {
  std::mt19937_64 rng(38);
  int piece1 = 0, cross = 0;
  for (int it = 0; it < 80; ++it) {
    GenSpec spec = random_spec(rng, 60, 300);
    spec.orientation = Orientation::Random;
    PlanarGraph<I> g = make(spec);
    Prepared<I> p = prepare(g);
    if (p.negative) continue;
    GirthEngine<I> e;
    std::vector<Branch> path;
    GirthValue<I> v = e.girth(p, &path);
    EXPECT_EQ(v, oracle_girth(g));
    if (path.empty()) continue;
    if (path.back() == Branch::Cross) ++cross;
    if (path[0] != Branch::Piece1) continue;
    ++piece1;
    PlanarGraph<I> t = triangulate(p.norm.graph, p.W);
    auto s = split_level(t, 0, p.W, EngineConfig{});
    ASSERT_TRUE(s);
    PlanarGraph<I> t1 = triangulate(s->piece1.graph, p.W);
    RecurseResult<I> r1 = e.recurse(t1, 1, p);
    EXPECT_EQ(r1.weight, v.weight());
    EXPECT_EQ(std::vector<Branch>(path.begin() + 1, path.end()), r1.path);
  }
  EXPECT_GT(piece1, 3);
  EXPECT_GT(cross, 3);
}

TEST(Stats, CountersAndRecords) {
  std::mt19937_64 rng(39);
  Stats st;
  EngineConfig cfg = config(MsspMode::Klein, DdgMode::Monge);
  cfg.stats_sink = &st;
  PlanarGraph<I> g = make(nested(400, 5));
  GirthEngine<I>(cfg).girth(g);
  EXPECT_EQ(st.negative_reduced_cost_events, 0);
  EXPECT_EQ(st.monge_fallbacks, 0);
  EXPECT_GT(st.base_cases, 0);
  EXPECT_GT(st.klein_pivots, 0);
  ASSERT_FALSE(st.levels.empty());
  ASSERT_FALSE(st.separators.empty());
  for (const auto& s : st.separators) EXPECT_TRUE(s.within_bounds);
  EXPECT_EQ(st.levels.front().level, 0);
  EXPECT_EQ(st.levels.front().n, 400);
  EXPECT_GT(st.total_ms, 0.0);
}
