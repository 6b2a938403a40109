#pragma once

#include <array>
#include <utility>
#include <vector>

#include "pgirth/types.hpp"

namespace pgirth {

// Rooted dynamic forest.  Each node stores the length of the edge to its
// parent; path_length(v) is the sum of lengths from the root down to v.
template <typename Scalar>
class PathSumTree {
 public:
  explicit PathSumTree(int n) : ch_(n, {-1, -1}), par_(n, -1), val_(n, Scalar(0)), sum_(n, Scalar(0)) {}

  int size() const { return static_cast<int>(par_.size()); }

  // x must be a root; makes it a child of parent with the given edge length.
  void link(int x, int parent, Scalar length) {
    access(x);
    val_[x] = length;
    update(x);
    par_[x] = parent;
  }

  void cut(int x) {
    access(x);
    int l = ch_[x][0];
    if (l != -1) {
      par_[l] = -1;
      ch_[x][0] = -1;
    }
    val_[x] = Scalar(0);
    update(x);
  }

  Scalar edge_length(int x) const { return val_[x]; }

  void set_edge_length(int x, Scalar length) {
    access(x);
    val_[x] = length;
    update(x);
  }

  void add_edge_length(int x, Scalar delta) { set_edge_length(x, val_[x] + delta); }

  Scalar path_length(int x) {
    access(x);
    return sum_[x];
  }

  int find_root(int x) {
    access(x);
    while (ch_[x][0] != -1) x = ch_[x][0];
    splay(x);
    return x;
  }

 private:
  bool is_root(int x) const {
    int p = par_[x];
    return p == -1 || (ch_[p][0] != x && ch_[p][1] != x);
  }
  void update(int x) {
    sum_[x] = val_[x];
    if (ch_[x][0] != -1) sum_[x] += sum_[ch_[x][0]];
    if (ch_[x][1] != -1) sum_[x] += sum_[ch_[x][1]];
  }
  void rotate(int x) {
    int p = par_[x], g = par_[p];
    int dx = ch_[p][1] == x;
    if (!is_root(p)) ch_[g][ch_[g][1] == p] = x;
    par_[x] = g;
    int b = ch_[x][dx ^ 1];
    ch_[p][dx] = b;
    if (b != -1) par_[b] = p;
    ch_[x][dx ^ 1] = p;
    par_[p] = x;
    update(p);
    update(x);
  }
  void splay(int x) {
    while (!is_root(x)) {
      int p = par_[x];
      if (!is_root(p)) {
        int g = par_[p];
        rotate(((ch_[g][1] == p) == (ch_[p][1] == x)) ? p : x);
      }
      rotate(x);
    }
  }
  void access(int x) {
    int last = -1;
    for (int y = x; y != -1; y = par_[y]) {
      splay(y);
      ch_[y][1] = last;
      update(y);
      last = y;
    }
    splay(x);
  }

  std::vector<std::array<int, 2>> ch_;
  std::vector<int> par_;
  std::vector<Scalar> val_;
  std::vector<Scalar> sum_;
};

// Unrooted dynamic forest with re-rooting.  Nodes flagged as edges carry two
// values: `a` belongs to the side facing the node's parent in the current
// rooting and `b` to the other side, each tagged with an id.  Re-rooting swaps
// the roles of a and b along the reversed path.  Supports path minima and path
// additions for both values.
template <typename Scalar>
class DualPathTree {
 public:
  struct PathMin {
    Scalar a = infinity<Scalar>();
    int a_tag = -1;
    Scalar b = infinity<Scalar>();
    int b_tag = -1;
  };

  explicit DualPathTree(int n) : nodes_(n) {}

  int size() const { return static_cast<int>(nodes_.size()); }

  void set_edge(int x, Scalar a, int a_tag, Scalar b, int b_tag) {
    access(x);
    Node& nd = nodes_[x];
    nd.edge = true;
    nd.va = a;
    nd.ta = a_tag;
    nd.vb = b;
    nd.tb = b_tag;
    update(x);
  }

  // Value attached to the given tag at edge node x, or infinity.
  Scalar edge_value(int x, int tag) {
    access(x);
    const Node& nd = nodes_[x];
    if (nd.ta == tag) return nd.va;
    if (nd.tb == tag) return nd.vb;
    return infinity<Scalar>();
  }

  // Sets the value of one side of edge node x identified by its tag.
  void set_edge_value(int x, int tag, Scalar v) {
    access(x);
    Node& nd = nodes_[x];
    if (nd.ta == tag) nd.va = v;
    else if (nd.tb == tag) nd.vb = v;
    else throw InternalInconsistency("edge node does not carry the requested tag");
    update(x);
  }

  // Tag on the side of edge node x that faces neighbour y in the rooting at y.
  int tag_towards(int x, int y) {
    evert(y);
    access(x);
    return nodes_[x].ta;
  }

  void evert(int x) {
    access(x);
    apply_rev(x);
  }

  void link(int x, int y) {
    evert(x);
    nodes_[x].par = y;
  }

  void cut(int x, int y) {
    evert(x);
    access(y);
    Node& ny = nodes_[y];
    if (ny.ch[0] != x || nodes_[x].ch[1] != -1) throw InternalInconsistency("cut of a non-edge");
    ny.ch[0] = -1;
    nodes_[x].par = -1;
    update(y);
  }

  bool connected(int x, int y) { return find_root(x) == find_root(y); }

  // Minima over the path from -> to, with a oriented towards `from`.
  PathMin path_min(int from, int to) {
    evert(from);
    access(to);
    const Node& nd = nodes_[to];
    return {nd.ma, nd.mta, nd.mb, nd.mtb};
  }

  void path_add(int from, int to, Scalar da, Scalar db) {
    evert(from);
    access(to);
    apply_add(to, da, db);
  }

 private:
  struct Node {
    std::array<int, 2> ch{-1, -1};
    int par = -1;
    bool rev = false;
    bool edge = false;
    Scalar pa = Scalar(0), pb = Scalar(0);
    Scalar va = infinity<Scalar>(), vb = infinity<Scalar>();
    int ta = -1, tb = -1;
    Scalar ma = infinity<Scalar>(), mb = infinity<Scalar>();
    int mta = -1, mtb = -1;
  };

  bool is_root(int x) const {
    int p = nodes_[x].par;
    return p == -1 || (nodes_[p].ch[0] != x && nodes_[p].ch[1] != x);
  }
  void apply_rev(int x) {
    if (x == -1) return;
    Node& n = nodes_[x];
    std::swap(n.ch[0], n.ch[1]);
    std::swap(n.va, n.vb);
    std::swap(n.ta, n.tb);
    std::swap(n.ma, n.mb);
    std::swap(n.mta, n.mtb);
    std::swap(n.pa, n.pb);
    n.rev = !n.rev;
  }
  void apply_add(int x, Scalar da, Scalar db) {
    if (x == -1) return;
    Node& n = nodes_[x];
    if (n.edge) {
      n.va += da;
      n.vb += db;
    }
    if (n.mta != -1) n.ma += da;
    if (n.mtb != -1) n.mb += db;
    n.pa += da;
    n.pb += db;
  }
  void push(int x) {
    Node& n = nodes_[x];
    if (n.rev) {
      apply_rev(n.ch[0]);
      apply_rev(n.ch[1]);
      n.rev = false;
    }
    if (n.pa != Scalar(0) || n.pb != Scalar(0)) {
      apply_add(n.ch[0], n.pa, n.pb);
      apply_add(n.ch[1], n.pa, n.pb);
      n.pa = n.pb = Scalar(0);
    }
  }
  void update(int x) {
    Node& n = nodes_[x];
    n.ma = infinity<Scalar>();
    n.mb = infinity<Scalar>();
    n.mta = n.mtb = -1;
    if (n.edge) {
      n.ma = n.va;
      n.mta = n.ta;
      n.mb = n.vb;
      n.mtb = n.tb;
    }
    for (int c : n.ch) {
      if (c == -1) continue;
      const Node& k = nodes_[c];
      if (k.mta != -1 && (n.mta == -1 || k.ma < n.ma)) {
        n.ma = k.ma;
        n.mta = k.mta;
      }
      if (k.mtb != -1 && (n.mtb == -1 || k.mb < n.mb)) {
        n.mb = k.mb;
        n.mtb = k.mtb;
      }
    }
  }
  void rotate(int x) {
    int p = nodes_[x].par, g = nodes_[p].par;
    int dx = nodes_[p].ch[1] == x;
    if (!is_root(p)) nodes_[g].ch[nodes_[g].ch[1] == p] = x;
    nodes_[x].par = g;
    int b = nodes_[x].ch[dx ^ 1];
    nodes_[p].ch[dx] = b;
    if (b != -1) nodes_[b].par = p;
    nodes_[x].ch[dx ^ 1] = p;
    nodes_[p].par = x;
    update(p);
    update(x);
  }
  void splay(int x) {
    stack_.clear();
    int y = x;
    stack_.push_back(y);
    while (!is_root(y)) {
      y = nodes_[y].par;
      stack_.push_back(y);
    }
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) push(*it);
    while (!is_root(x)) {
      int p = nodes_[x].par;
      if (!is_root(p)) {
        int g = nodes_[p].par;
        rotate(((nodes_[g].ch[1] == p) == (nodes_[p].ch[1] == x)) ? p : x);
      }
      rotate(x);
    }
  }
  void access(int x) {
    int last = -1;
    for (int y = x; y != -1; y = nodes_[y].par) {
      splay(y);
      nodes_[y].ch[1] = last;
      update(y);
      last = y;
    }
    splay(x);
  }
  int find_root(int x) {
    access(x);
    while (true) {
      push(x);
      if (nodes_[x].ch[0] == -1) break;
      x = nodes_[x].ch[0];
    }
    splay(x);
    return x;
  }

  std::vector<Node> nodes_;
  std::vector<int> stack_;
};

}  // namespace pgirth
