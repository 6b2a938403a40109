#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "pgirth/link_cut_tree.hpp"

using namespace pgirth;

namespace {

struct NaiveForest {
  std::vector<int> parent;
  std::vector<std::int64_t> len;
  explicit NaiveForest(int n) : parent(n, -1), len(n, 0) {}
  std::int64_t depth(int x) const {
    std::int64_t s = 0;
    for (; x != -1; x = parent[x]) s += len[x];
    return s;
  }
  int root(int x) const {
    while (parent[x] != -1) x = parent[x];
    return x;
  }
  bool is_ancestor(int a, int x) const {
    for (; x != -1; x = parent[x])
      if (x == a) return true;
    return false;
  }
};

}  // namespace

TEST(PathSumTree, MatchesNaiveForest) {
  std::mt19937_64 rng(11);
  const int n = 60;
  PathSumTree<std::int64_t> t(n);
  NaiveForest f(n);
  for (int step = 0; step < 4000; ++step) {
    int x = static_cast<int>(rng() % n);
    int op = static_cast<int>(rng() % 4);
    if (op == 0 && f.parent[x] == -1) {
      int y = static_cast<int>(rng() % n);
      if (f.is_ancestor(x, y)) continue;
      std::int64_t l = static_cast<std::int64_t>(rng() % 50);
      t.link(x, y, l);
      f.parent[x] = y;
      f.len[x] = l;
    } else if (op == 1 && f.parent[x] != -1) {
      t.cut(x);
      f.parent[x] = -1;
      f.len[x] = 0;
    } else if (op == 2 && f.parent[x] != -1) {
      std::int64_t d = static_cast<std::int64_t>(rng() % 21) - 10;
      t.add_edge_length(x, d);
      f.len[x] += d;
    } else {
      ASSERT_EQ(t.path_length(x), f.depth(x));
      ASSERT_EQ(t.find_root(x), f.root(x));
    }
  }
}

TEST(DualPathTree, PathMinAndAddFollowOrientation) {
  // Path 0 - e1 - 1 - e2 - 2, edge nodes 3 and 4.
  DualPathTree<std::int64_t> t(5);
  t.link(3, 0);
  t.link(1, 3);
  t.link(4, 1);
  t.link(2, 4);
  t.set_edge(3, 5, 30, 7, 31);  // a faces node 0
  t.set_edge(4, 2, 40, 9, 41);  // a faces node 1
  auto pm = t.path_min(0, 2);
  EXPECT_EQ(pm.a, 2);
  EXPECT_EQ(pm.a_tag, 40);
  EXPECT_EQ(pm.b, 7);
  EXPECT_EQ(pm.b_tag, 31);
  auto back = t.path_min(2, 0);
  EXPECT_EQ(back.a, 7);
  EXPECT_EQ(back.a_tag, 31);
  EXPECT_EQ(back.b, 2);
  EXPECT_EQ(back.b_tag, 40);
  t.path_add(0, 2, -1, 1);
  EXPECT_EQ(t.edge_value(3, 30), 4);
  EXPECT_EQ(t.edge_value(3, 31), 8);
  EXPECT_EQ(t.edge_value(4, 40), 1);
  EXPECT_EQ(t.edge_value(4, 41), 10);
  t.path_add(2, 1, 3, 0);
  EXPECT_EQ(t.edge_value(4, 41), 13);
  EXPECT_EQ(t.edge_value(4, 40), 1);
}

TEST(DualPathTree, RandomAgainstNaive) {
  std::mt19937_64 rng(5);
  const int faces = 12;
  // A random tree on the faces with one edge node per tree edge.
  std::vector<std::array<int, 2>> ends;
  std::vector<std::array<std::int64_t, 2>> val;
  DualPathTree<std::int64_t> t(faces + faces - 1);
  for (int f = 1; f < faces; ++f) {
    int p = static_cast<int>(rng() % f);
    int e = faces + f - 1;
    t.link(e, p);
    t.link(f, e);
    std::int64_t va = static_cast<std::int64_t>(rng() % 100), vb = static_cast<std::int64_t>(rng() % 100);
    t.set_edge(e, va, 2 * e, vb, 2 * e + 1);
    ends.push_back({p, f});
    val.push_back({va, vb});
  }
  auto path = [&](int from, int to) {
    // Edges on the tree path with the side facing `from`.
    std::vector<std::vector<std::pair<int, int>>> adj(faces);
    for (int i = 0; i < faces - 1; ++i) {
      adj[ends[i][0]].push_back({ends[i][1], i});
      adj[ends[i][1]].push_back({ends[i][0], i});
    }
    std::vector<int> pe(faces, -2), pv(faces, -1);
    std::vector<int> st{from};
    pe[from] = -1;
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (auto [v, i] : adj[u])
        if (pe[v] == -2) {
          pe[v] = i;
          pv[v] = u;
          st.push_back(v);
        }
    }
    std::vector<std::pair<int, int>> out;  // (edge, side facing from)
    for (int v = to; v != from; v = pv[v]) out.push_back({pe[v], ends[pe[v]][0] == pv[v] ? 0 : 1});
    return out;
  };
  for (int step = 0; step < 2000; ++step) {
    int a = static_cast<int>(rng() % faces), b = static_cast<int>(rng() % faces);
    if (a == b) continue;
    auto p = path(a, b);
    if (rng() % 2) {
      std::int64_t da = static_cast<std::int64_t>(rng() % 11) - 5, db = static_cast<std::int64_t>(rng() % 11) - 5;
      t.path_add(a, b, da, db);
      for (auto [i, side] : p) {
        val[i][side] += da;
        val[i][side ^ 1] += db;
      }
    } else {
      auto pm = t.path_min(a, b);
      std::int64_t ma = std::int64_t(1) << 60, mb = 1LL << 60;
      for (auto [i, side] : p) {
        ma = std::min(ma, val[i][side]);
        mb = std::min(mb, val[i][side ^ 1]);
      }
      ASSERT_EQ(pm.a, ma);
      ASSERT_EQ(pm.b, mb);
    }
  }
}
