#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "pgirth/mssp.hpp"
#include "pgirth/shortest_paths.hpp"
#include "pgirth/types.hpp"

namespace pgirth {

enum class DdgMode { Dense, Monge };

// Which piece attained wH(i, j).
enum class Origin : std::int8_t { None = 0, Piece1 = 1, Piece2 = 2 };

template <typename Scalar>
struct DenseDistanceGraph {
  std::vector<VertexId> boundary;
  Matrix<Scalar> w1;
  Matrix<Scalar> w2;
  Matrix<Scalar> wH;  // infinity on the diagonal
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> origin;

  int size() const { return static_cast<int>(boundary.size()); }
  Origin origin_of(int i, int j) const { return static_cast<Origin>(origin(i, j)); }
};

struct HEdge {
  int from = 0;
  int to = 0;
  bool operator==(const HEdge& o) const { return from == o.from && to == o.to; }
};

template <typename Scalar>
struct HCycle {
  std::vector<HEdge> edges;
  Scalar weight = Scalar(0);
  int edge_count() const { return static_cast<int>(edges.size()); }
};

template <typename Scalar>
struct LexResult {
  std::vector<Scalar> dist;
  std::vector<int> hops;
  std::vector<int> parent;  // -1 at the source and unreachable vertices
};

struct DdgStats {
  int monge_fallbacks = 0;
};

template <typename Scalar>
DenseDistanceGraph<Scalar> build_ddg(const BoundaryMatrix<Scalar>& m1, const BoundaryMatrix<Scalar>& m2) {
  if (m1.boundary != m2.boundary) throw BoundaryMismatch("boundary matrices use different boundary orders");
  const int m = m1.size();
  if (m1.dist.rows() != m || m1.dist.cols() != m || m2.dist.rows() != m || m2.dist.cols() != m)
    throw BoundaryMismatch("boundary matrix shape does not match its boundary");
  DenseDistanceGraph<Scalar> h;
  h.boundary = m1.boundary;
  h.w1 = m1.dist;
  h.w2 = m2.dist;
  h.wH = m1.dist.cwiseMin(m2.dist);
  h.origin.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j || (is_infinite(h.w1(i, j)) && is_infinite(h.w2(i, j)))) {
        h.wH(i, j) = infinity<Scalar>();
        h.origin(i, j) = static_cast<std::int8_t>(Origin::None);
      } else {
        h.origin(i, j) = static_cast<std::int8_t>(h.w1(i, j) <= h.w2(i, j) ? Origin::Piece1 : Origin::Piece2);
      }
    }
  }
  return h;
}

template <typename Scalar>
Digraph<Scalar> ddg_digraph(const Matrix<Scalar>& w) {
  const int m = static_cast<int>(w.rows());
  std::vector<WeightedArc<Scalar>> arcs;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && !is_infinite(w(i, j))) arcs.push_back({i, j, w(i, j)});
  return Digraph<Scalar>(m, std::move(arcs));
}

// Potentials for reduced costs: exact distances from u_1, or super-source
// distances when u_1 does not reach every vertex.  Throws NegativeCycleFound.
template <typename Scalar>
std::vector<Scalar> ddg_potentials(const DenseDistanceGraph<Scalar>& h) {
  const int m = h.size();
  if (m == 0) return {};
  Digraph<Scalar> dg = ddg_digraph(h.wH);
  auto r = sssp_general(dg, 0);
  if (std::holds_alternative<NegativeCycle<Scalar>>(r))
    throw NegativeCycleFound("dense distance graph has a negative cycle");
  auto dist = std::get<SsspResult<Scalar>>(std::move(r)).dist;
  bool all = std::none_of(dist.begin(), dist.end(), [](Scalar x) { return is_infinite(x); });
  if (all) return dist;
  auto s = detail::bellman_ford(dg, kNone);
  if (std::holds_alternative<NegativeCycle<Scalar>>(s))
    throw NegativeCycleFound("dense distance graph has a negative cycle");
  return std::get<SsspResult<Scalar>>(std::move(s)).dist;
}

// w(i, j) + d(i) - d(j); infinite entries stay infinite.  Throws
// NegativeReducedCost.
template <typename Scalar>
Matrix<Scalar> reduce_matrix(const Matrix<Scalar>& w, const std::vector<Scalar>& d) {
  const int m = static_cast<int>(w.rows());
  Scalar scale = Scalar(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!is_infinite(w(i, j))) scale = std::max(scale, abs_weight(w(i, j)));
  const Scalar tol = WeightTraits<Scalar>::tolerance(scale);
  Matrix<Scalar> out(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j || is_infinite(w(i, j))) {
        out(i, j) = infinity<Scalar>();
        continue;
      }
      Scalar c = d[i] + w(i, j) - d[j];
      if (c < Scalar(0)) {
        if (c < -tol)
          throw NegativeReducedCost("reduced cost " + std::to_string(static_cast<double>(c)) + " on H edge (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
        c = Scalar(0);
      }
      out(i, j) = c;
    }
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> reduce_costs(const DenseDistanceGraph<Scalar>& h, const std::vector<Scalar>& source_dist) {
  return reduce_matrix(h.wH, source_dist);
}

// Dijkstra on a dense nonnegative matrix ordered by (distance, hops).  Among
// optimal predecessors the parent is the one with the smallest index.
template <typename Scalar>
LexResult<Scalar> lex_dijkstra(const Matrix<Scalar>& hplus, int source) {
  const int m = static_cast<int>(hplus.rows());
  LexResult<Scalar> r;
  r.dist.assign(m, infinity<Scalar>());
  r.hops.assign(m, -1);
  r.parent.assign(m, -1);
  std::vector<char> done(m, 0);
  r.dist[source] = Scalar(0);
  r.hops[source] = 0;
  for (int it = 0; it < m; ++it) {
    int u = -1;
    for (int v = 0; v < m; ++v) {
      if (done[v] || r.hops[v] < 0) continue;
      if (u == -1 || r.dist[v] < r.dist[u] || (r.dist[v] == r.dist[u] && r.hops[v] < r.hops[u])) u = v;
    }
    if (u == -1) break;
    done[u] = 1;
    for (int v = 0; v < m; ++v) {
      if (done[v] || v == u || is_infinite(hplus(u, v))) continue;
      Scalar c = r.dist[u] + hplus(u, v);
      int ch = r.hops[u] + 1;
      if (r.hops[v] < 0 || c < r.dist[v] || (c == r.dist[v] && (ch < r.hops[v] || (ch == r.hops[v] && u < r.parent[v])))) {
        r.dist[v] = c;
        r.hops[v] = ch;
        r.parent[v] = u;
      }
    }
  }
  return r;
}

namespace detail {

// Minimum of one matrix row over column ranges, ties to the smaller column.
template <typename Scalar>
class RowMin {
 public:
  RowMin() = default;
  explicit RowMin(std::vector<Scalar> v) : n_(static_cast<int>(v.size())), val_(std::move(v)), tree_(2 * n_) {
    for (int i = 0; i < n_; ++i) tree_[n_ + i] = i;
    for (int i = n_ - 1; i > 0; --i) tree_[i] = better(tree_[2 * i], tree_[2 * i + 1]);
  }
  // Argmin over [lo, hi].
  int argmin(int lo, int hi) const {
    int best = -1;
    for (int l = lo + n_, r = hi + n_ + 1; l < r; l >>= 1, r >>= 1) {
      if (l & 1) best = best == -1 ? tree_[l] : better(best, tree_[l]), ++l;
      if (r & 1) --r, best = best == -1 ? tree_[r] : better(best, tree_[r]);
    }
    return best;
  }
  Scalar value(int c) const { return val_[c]; }

 private:
  int better(int a, int b) const {
    if (val_[b] < val_[a] || (val_[b] == val_[a] && b < a)) return b;
    return a;
  }
  int n_ = 0;
  std::vector<Scalar> val_;
  std::vector<int> tree_;
};

// A Monge block: rows and columns are global H indices; columns are stored in
// the order that makes the block Monge.
template <typename Scalar>
struct MongeBlock {
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<int> row_pos;  // global row -> local row or -1
  std::vector<RowMin<Scalar>> row_min;
};

}  // namespace detail

// Reduced per-piece matrices cut into Monge blocks by recursive bipartition of
// the cyclic boundary order.  Built once per dense distance graph and reused by
// every source.  Throws MongeViolation.
template <typename Scalar>
class MongeStructure {
 public:
  MongeStructure(const std::vector<const Matrix<Scalar>*>& mats, int m) : m_(m) {
    for (const Matrix<Scalar>* w : mats) build(*w, 0, m);
  }

  int size() const { return m_; }

  LexResult<Scalar> run(int source) const;

 private:
  void build(const Matrix<Scalar>& w, int lo, int hi) {
    if (hi - lo < 2) return;
    int mid = (lo + hi) / 2;
    add_block(w, lo, mid, mid, hi);
    add_block(w, mid, hi, lo, mid);
    build(w, lo, mid);
    build(w, mid, hi);
  }

  void add_block(const Matrix<Scalar>& w, int rlo, int rhi, int clo, int chi) {
    detail::MongeBlock<Scalar> b;
    for (int r = rlo; r < rhi; ++r) b.rows.push_back(r);
    for (int c = chi - 1; c >= clo; --c) b.cols.push_back(c);
    const int R = static_cast<int>(b.rows.size());
    const int C = static_cast<int>(b.cols.size());
    for (int x = 0; x < R; ++x)
      for (int y = 0; y < C; ++y)
        if (is_infinite(w(b.rows[x], b.cols[y]))) throw MongeViolation("infinite entry in a Monge block");
    for (int x = 0; x + 1 < R; ++x) {
      for (int y = 0; y + 1 < C; ++y) {
        Scalar lhs = w(b.rows[x], b.cols[y]) + w(b.rows[x + 1], b.cols[y + 1]);
        Scalar rhs = w(b.rows[x], b.cols[y + 1]) + w(b.rows[x + 1], b.cols[y]);
        if (lhs > rhs + WeightTraits<Scalar>::tolerance(abs_weight(lhs) + abs_weight(rhs)))
          throw MongeViolation("quadrangle inequality fails in a boundary block");
      }
    }
    b.row_pos.assign(m_, -1);
    for (int x = 0; x < R; ++x) {
      b.row_pos[b.rows[x]] = x;
      std::vector<Scalar> v(C);
      for (int y = 0; y < C; ++y) v[y] = w(b.rows[x], b.cols[y]);
      b.row_min.emplace_back(std::move(v));
    }
    blocks_.push_back(std::move(b));
  }

  int m_ = 0;
  std::vector<detail::MongeBlock<Scalar>> blocks_;
};

template <typename Scalar>
LexResult<Scalar> MongeStructure<Scalar>::run(int source) const {
  using Key = std::pair<Scalar, int>;
  struct Entry {
    Scalar d;
    int h;
    int col;  // global
    int row;  // global
    int block;
    int lo, hi;  // local column range
    bool operator>(const Entry& o) const {
      return std::tie(d, h, col, row) > std::tie(o.d, o.h, o.col, o.row);
    }
  };
  const int m = m_;
  LexResult<Scalar> r;
  r.dist.assign(m, infinity<Scalar>());
  r.hops.assign(m, -1);
  r.parent.assign(m, -1);
  std::vector<char> done(m, 0);

  struct Own {
    int row;  // local row
    int end;
  };
  std::vector<std::map<int, Own>> owners(blocks_.size());
  std::vector<std::vector<std::pair<int, int>>> owned(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) owned[b].assign(blocks_[b].rows.size(), {1, 0});

  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

  auto key = [&](const detail::MongeBlock<Scalar>& blk, int x, int y) -> Key {
    int gr = blk.rows[x];
    return {r.dist[gr] + blk.row_min[x].value(y), r.hops[gr] + 1};
  };
  auto push_range = [&](int b, int x, int lo, int hi) {
    if (lo > hi) return;
    const auto& blk = blocks_[b];
    int y = blk.row_min[x].argmin(lo, hi);
    Key k = key(blk, x, y);
    heap.push({k.first, k.second, blk.cols[y], blk.rows[x], b, lo, hi});
  };
  // True when local row x beats owner row q at column y.
  auto beats = [&](const detail::MongeBlock<Scalar>& blk, int x, int q, int y) {
    Key kx = key(blk, x, y), kq = key(blk, q, y);
    if (kx < kq) return true;
    if (kq < kx) return false;
    return blk.rows[x] < blk.rows[q];
  };

  auto activate = [&](int g) {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = blocks_[b];
      int x = blk.row_pos[g];
      if (x < 0) continue;
      const int C = static_cast<int>(blk.cols.size());
      auto& own = owners[b];
      int lo, hi;
      if (own.empty()) {
        lo = 0;
        hi = C - 1;
      } else {
        auto owner_at = [&](int y) {
          auto it = std::prev(own.upper_bound(y));
          return it->second.row;
        };
        // Columns owned by rows above x form a prefix [0, split).
        int a = 0, z = C;
        while (a < z) {
          int mid = (a + z) / 2;
          if (owner_at(mid) < x) a = mid + 1;
          else z = mid;
        }
        const int split = a;
        // Within the prefix, x wins on a suffix.
        a = 0;
        z = split;
        while (a < z) {
          int mid = (a + z) / 2;
          if (beats(blk, x, owner_at(mid), mid)) z = mid;
          else a = mid + 1;
        }
        lo = a;
        // Within the rest, x wins on a prefix.
        a = split;
        z = C;
        while (a < z) {
          int mid = (a + z) / 2;
          if (beats(blk, x, owner_at(mid), mid)) a = mid + 1;
          else z = mid;
        }
        hi = a - 1;
        if (lo > hi) continue;
        auto it = std::prev(own.upper_bound(lo));
        if (it->first < lo) {
          int q = it->second.row;
          if (it->second.end > hi) throw MongeViolation("row ownership split by a later row");
          it->second.end = lo - 1;
          owned[b][q] = {it->first, lo - 1};
          ++it;
        }
        while (it != own.end() && it->first <= hi) {
          int q = it->second.row;
          int end = it->second.end;
          it = own.erase(it);
          if (end > hi) {
            own[hi + 1] = {q, end};
            owned[b][q] = {hi + 1, end};
          } else {
            owned[b][q] = {1, 0};
          }
        }
      }
      own[lo] = {x, hi};
      owned[b][x] = {lo, hi};
      push_range(static_cast<int>(b), x, lo, hi);
    }
  };

  r.dist[source] = Scalar(0);
  r.hops[source] = 0;
  done[source] = 1;
  activate(source);
  while (!heap.empty()) {
    Entry e = heap.top();
    heap.pop();
    const auto& blk = blocks_[e.block];
    int x = blk.row_pos[e.row];
    auto [olo, ohi] = owned[e.block][x];
    int lo = std::max(e.lo, olo), hi = std::min(e.hi, ohi);
    if (lo > hi) continue;
    if (lo != e.lo || hi != e.hi) {
      push_range(e.block, x, lo, hi);
      continue;
    }
    int y = blk.row_min[x].argmin(lo, hi);
    int c = blk.cols[y];
    if (done[c]) {
      push_range(e.block, x, lo, y - 1);
      push_range(e.block, x, y + 1, hi);
      continue;
    }
    done[c] = 1;
    r.dist[c] = e.d;
    r.hops[c] = e.h;
    r.parent[c] = e.row;
    push_range(e.block, x, lo, y - 1);
    push_range(e.block, x, y + 1, hi);
    activate(c);
  }
  return r;
}

template <typename Scalar>
struct MinCycleResult {
  HCycle<Scalar> cycle;
  int source = -1;
};

// Minimum-weight cycle in H with the fewest edges among minimum-weight cycles,
// ties broken by the smallest source index.  Returns nothing when no cycle
// lies below threshold.  Throws NegativeReducedCost.
template <typename Scalar>
std::optional<HCycle<Scalar>> min_cycle(const DenseDistanceGraph<Scalar>& h, Scalar threshold,
                                        DdgMode mode = DdgMode::Dense, DdgStats* stats = nullptr) {
  const int m = h.size();
  if (m < 2) return std::nullopt;
  std::vector<Scalar> pot = ddg_potentials(h);
  Matrix<Scalar> hplus = reduce_matrix(h.wH, pot);

  std::optional<MongeStructure<Scalar>> monge;
  if (mode == DdgMode::Monge) {
    try {
      Matrix<Scalar> r1 = reduce_matrix(h.w1, pot);
      Matrix<Scalar> r2 = reduce_matrix(h.w2, pot);
      monge.emplace(std::vector<const Matrix<Scalar>*>{&r1, &r2}, m);
    } catch (const MongeViolation&) {
      if (stats) ++stats->monge_fallbacks;
    }
  }

  bool have = false;
  Scalar best_w = Scalar(0);
  int best_e = 0, best_src = -1, best_last = -1;
  LexResult<Scalar> best_tree;
  std::vector<LexResult<Scalar>> trees(m);
  if (monge) {
    try {
      for (int i = 0; i < m; ++i) trees[i] = monge->run(i);
    } catch (const MongeViolation&) {
      if (stats) ++stats->monge_fallbacks;
      monge.reset();
    }
  }
  for (int i = 0; i < m; ++i) {
    LexResult<Scalar> t = monge ? std::move(trees[i]) : lex_dijkstra(hplus, i);
    for (int j = 0; j < m; ++j) {
      if (j == i || t.hops[j] < 0 || is_infinite(hplus(j, i))) continue;
      Scalar w = t.dist[j] + hplus(j, i);
      int e = t.hops[j] + 1;
      if (!have || w < best_w || (w == best_w && e < best_e)) {
        have = true;
        best_w = w;
        best_e = e;
        best_src = i;
        best_last = j;
        best_tree = t;
      }
    }
  }
  if (!have) return std::nullopt;
  HCycle<Scalar> c;
  std::vector<int> path;
  for (int v = best_last; v != -1; v = best_tree.parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) c.edges.push_back({path[k], path[k + 1]});
  c.edges.push_back({best_last, best_src});
  for (const HEdge& e : c.edges) c.weight += h.wH(e.from, e.to);
  if (!(c.weight < threshold)) return std::nullopt;
  return c;
}

}  // namespace pgirth
