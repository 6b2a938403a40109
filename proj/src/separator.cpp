#include "pgirth/separator.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <numeric>
#include <random>
#include <unordered_set>

namespace pgirth {

namespace {

struct Tree {
  std::vector<VertexId> parent;
  std::vector<SlotId> parent_slot;
  std::vector<int> depth;
};

std::vector<int> bfs_levels(const Embedding& e, VertexId root, std::vector<VertexId>* order) {
  std::vector<int> level(e.num_vertices(), -1);
  std::vector<VertexId> q{root};
  level[root] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    VertexId v = q[h];
    DartId f = e.first_dart(v), d = f;
    do {
      VertexId w = e.head(d);
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        q.push_back(w);
      }
      d = e.next_cw(d);
    } while (d != f);
  }
  if (order) *order = std::move(q);
  return level;
}

Tree bfs_tree(const Embedding& e, VertexId root) {
  const int n = e.num_vertices();
  Tree t{std::vector<VertexId>(n, kNone), std::vector<SlotId>(n, kNone), std::vector<int>(n, -1)};
  std::vector<VertexId> q{root};
  t.depth[root] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    VertexId v = q[h];
    DartId f = e.first_dart(v), d = f;
    do {
      VertexId w = e.head(d);
      if (t.depth[w] < 0) {
        t.depth[w] = t.depth[v] + 1;
        t.parent[w] = v;
        t.parent_slot[w] = Embedding::slot_of(d);
        q.push_back(w);
      }
      d = e.next_cw(d);
    } while (d != f);
  }
  return t;
}

// Spanning tree that follows BFS level sets: each connected patch of a level
// hangs from a single edge to the previous level and is spanned inside the
// level.  Non-tree edges inside a level then close short level-local cycles.
Tree level_tree(const Embedding& e, VertexId root) {
  const int n = e.num_vertices();
  std::vector<VertexId> order;
  std::vector<int> level = bfs_levels(e, root, &order);
  Tree t{std::vector<VertexId>(n, kNone), std::vector<SlotId>(n, kNone), std::vector<int>(n, -1)};
  t.depth[root] = 0;
  std::vector<VertexId> q;
  for (VertexId s : order) {
    if (t.depth[s] >= 0) continue;
    // s is the first vertex of its patch in BFS order; attach it downward.
    DartId f = e.first_dart(s), d = f;
    do {
      VertexId w = e.head(d);
      if (level[w] == level[s] - 1 && t.depth[w] >= 0) {
        t.parent[s] = w;
        t.parent_slot[s] = Embedding::slot_of(d);
        t.depth[s] = t.depth[w] + 1;
        break;
      }
      d = e.next_cw(d);
    } while (d != f);
    if (t.depth[s] < 0) throw InternalInconsistency("level tree lost its parent");
    q.assign(1, s);
    for (std::size_t h = 0; h < q.size(); ++h) {
      VertexId v = q[h];
      DartId g0 = e.first_dart(v), x = g0;
      do {
        VertexId w = e.head(x);
        if (level[w] == level[s] && t.depth[w] < 0) {
          t.parent[w] = v;
          t.parent_slot[w] = Embedding::slot_of(x);
          t.depth[w] = t.depth[v] + 1;
          q.push_back(w);
        }
        x = e.next_cw(x);
      } while (x != g0);
    }
  }
  return t;
}

struct Candidate {
  SlotId slot = kNone;
  DartId closing = kNone;  // dart x -> y whose face is inside
  int length = 0;
  int inside = 0;
  int outside = 0;
};

int find(std::vector<int>& uf, int x) {
  while (uf[x] != x) {
    uf[x] = uf[uf[x]];
    x = uf[x];
  }
  return x;
}

// Evaluates the fundamental cycle of every non-tree edge.
void evaluate_tree(const Embedding& e, const Embedding::FaceTrace& ft, const Tree& t, VertexId root,
                   const std::function<void(const Candidate&)>& visit) {
  const int n = e.num_vertices();
  const int ns = e.num_slots();
  std::vector<char> in_tree(ns, 0);
  for (VertexId v = 0; v < n; ++v)
    if (t.parent_slot[v] != kNone) in_tree[t.parent_slot[v]] = 1;

  // Dual spanning tree on the non-tree edges.
  const int nf = ft.num_faces;
  std::vector<int> fstart(nf + 1, 0);
  for (SlotId s = 0; s < ns; ++s)
    if (!in_tree[s]) {
      ++fstart[ft.face_of_dart[2 * s] + 1];
      ++fstart[ft.face_of_dart[2 * s + 1] + 1];
    }
  for (int f = 0; f < nf; ++f) fstart[f + 1] += fstart[f];
  std::vector<SlotId> fadj(fstart[nf]);
  {
    std::vector<int> fill(fstart.begin(), fstart.end() - 1);
    for (SlotId s = 0; s < ns; ++s)
      if (!in_tree[s]) {
        fadj[fill[ft.face_of_dart[2 * s]]++] = s;
        fadj[fill[ft.face_of_dart[2 * s + 1]]++] = s;
      }
  }
  std::vector<SlotId> fparent(nf, kNone);
  std::vector<char> fseen(nf, 0);
  std::vector<int> forder{0};
  fseen[0] = 1;
  for (std::size_t h = 0; h < forder.size(); ++h) {
    int f = forder[h];
    for (int i = fstart[f]; i < fstart[f + 1]; ++i) {
      SlotId s = fadj[i];
      int g = ft.face_of_dart[2 * s] == f ? ft.face_of_dart[2 * s + 1] : ft.face_of_dart[2 * s];
      if (!fseen[g]) {
        fseen[g] = 1;
        fparent[g] = s;
        forder.push_back(g);
      }
    }
  }
  if (static_cast<int>(forder.size()) != nf) throw InternalInconsistency("cotree is not spanning");
  std::vector<int> fsize(nf, 1);
  for (int h = nf - 1; h > 0; --h) {
    int f = forder[h];
    SlotId s = fparent[f];
    int g = ft.face_of_dart[2 * s] == f ? ft.face_of_dart[2 * s + 1] : ft.face_of_dart[2 * s];
    fsize[g] += fsize[f];
  }

  // Offline lowest common ancestors (Tarjan) for the non-tree edges.
  std::vector<int> qstart(n + 1, 0);
  for (SlotId s = 0; s < ns; ++s)
    if (!in_tree[s]) {
      ++qstart[e.ends(s)[0] + 1];
      ++qstart[e.ends(s)[1] + 1];
    }
  for (int v = 0; v < n; ++v) qstart[v + 1] += qstart[v];
  std::vector<SlotId> qadj(qstart[n]);
  {
    std::vector<int> fill(qstart.begin(), qstart.end() - 1);
    for (SlotId s = 0; s < ns; ++s)
      if (!in_tree[s]) {
        qadj[fill[e.ends(s)[0]]++] = s;
        qadj[fill[e.ends(s)[1]]++] = s;
      }
  }
  std::vector<int> cstart(n + 1, 0);
  for (VertexId v = 0; v < n; ++v)
    if (t.parent[v] != kNone) ++cstart[t.parent[v] + 1];
  for (int v = 0; v < n; ++v) cstart[v + 1] += cstart[v];
  std::vector<VertexId> children(n);
  {
    std::vector<int> fill(cstart.begin(), cstart.end() - 1);
    for (VertexId v = 0; v < n; ++v)
      if (t.parent[v] != kNone) children[fill[t.parent[v]]++] = v;
  }
  std::vector<int> uf(n), anc(n);
  std::iota(uf.begin(), uf.end(), 0);
  std::iota(anc.begin(), anc.end(), 0);
  std::vector<char> black(n, 0);
  std::vector<int> lca_depth(ns, -1);
  std::vector<std::pair<VertexId, int>> stack{{root, cstart[root]}};
  while (!stack.empty()) {
    auto& [v, it] = stack.back();
    if (it < cstart[v + 1]) {
      VertexId c = children[it++];
      stack.push_back({c, cstart[c]});
      continue;
    }
    black[v] = 1;
    for (int i = qstart[v]; i < qstart[v + 1]; ++i) {
      SlotId s = qadj[i];
      VertexId w = e.ends(s)[0] == v ? e.ends(s)[1] : e.ends(s)[0];
      if (black[w] && lca_depth[s] < 0) lca_depth[s] = t.depth[anc[find(uf, w)]];
    }
    VertexId done = v;
    stack.pop_back();
    if (!stack.empty()) {
      VertexId p = stack.back().first;
      int a = find(uf, done), b = find(uf, p);
      uf[a] = b;
      anc[b] = p;
    }
  }

  for (SlotId s = 0; s < ns; ++s) {
    if (in_tree[s]) continue;
    int fa = ft.face_of_dart[2 * s], fb = ft.face_of_dart[2 * s + 1];
    int child = fparent[fa] == s ? fa : fb;
    if (fparent[child] != s) throw InternalInconsistency("cotree edge without child face");
    Candidate c;
    c.slot = s;
    c.closing = ft.face_of_dart[2 * s] == child ? 2 * s : 2 * s + 1;
    VertexId u = e.ends(s)[0], v = e.ends(s)[1];
    c.length = t.depth[u] + t.depth[v] - 2 * lca_depth[s] + 1;
    int fin = fsize[child];
    if ((fin - c.length) % 2 != 0) throw InternalInconsistency("face parity mismatch in separator");
    int interior = 1 + (fin - c.length) / 2;
    c.inside = interior + c.length;
    c.outside = n - interior;
    visit(c);
  }
}

std::vector<VertexId> cycle_of(const Embedding& e, const Tree& t, DartId closing) {
  VertexId x = e.tail(closing), y = e.head(closing);
  std::vector<VertexId> up_y, up_x;
  VertexId a = y, b = x;
  while (t.depth[a] > t.depth[b]) { up_y.push_back(a); a = t.parent[a]; }
  while (t.depth[b] > t.depth[a]) { up_x.push_back(b); b = t.parent[b]; }
  while (a != b) {
    up_y.push_back(a);
    a = t.parent[a];
    up_x.push_back(b);
    b = t.parent[b];
  }
  std::vector<VertexId> cyc = up_y;
  cyc.push_back(a);
  cyc.insert(cyc.end(), up_x.rbegin(), up_x.rend());
  return cyc;
}

void check_triangulated(const Embedding& e, const Embedding::FaceTrace& ft) {
  if (e.num_vertices() < 3) throw NotTriangulated("separator needs at least three vertices");
  for (int s : ft.face_size)
    if (s != 3) throw NotTriangulated("face of size " + std::to_string(s));
  int ncomp = 0;
  e.components(&ncomp);
  if (ncomp != 1) throw NotTriangulated("graph is disconnected");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(2 * e.num_slots());
  for (SlotId s = 0; s < e.num_slots(); ++s) {
    auto [u, v] = e.ends(s);
    if (u == v || !seen.insert(detail::pair_key(u, v)).second)
      throw NotTriangulated("underlying graph is not simple");
  }
}

}  // namespace

bool meets_separator_bounds(const SeparatorCycle& c, int n) {
  int lim = balance_limit(n);
  if (c.inside_count > lim || c.outside_count > lim) return false;
  if (n >= 32 && c.size() > size_limit(n)) return false;
  return true;
}

SeparatorCycle cycle_separator(const Embedding& e, const SeparatorOptions& opt) {
  Embedding::FaceTrace ft = e.trace_faces();
  check_triangulated(e, ft);
  const int n = e.num_vertices();

  std::vector<VertexId> roots;
  VertexId maxdeg = 0;
  int best_deg = -1;
  for (VertexId v = 0; v < n; ++v) {
    int d = e.degree(v);
    if (d > best_deg) { best_deg = d; maxdeg = v; }
  }
  roots.push_back(maxdeg);
  {
    std::vector<VertexId> order;
    bfs_levels(e, 0, &order);
    VertexId a = order.back();
    Tree ta = bfs_tree(e, a);
    VertexId b = a;
    for (VertexId v = 0; v < n; ++v)
      if (ta.depth[v] > ta.depth[b]) b = v;
    int steps = ta.depth[b] / 2;
    VertexId mid = b;
    for (int i = 0; i < steps; ++i) mid = ta.parent[mid];
    roots.push_back(mid);
  }
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<VertexId> pick(0, n - 1);
  for (int i = 0; i < opt.random_roots; ++i) roots.push_back(pick(rng));

  const int lim = balance_limit(n);
  const double slim = size_limit(n);
  auto key = [&](const Candidate& c) {
    bool balanced = c.inside <= lim && c.outside <= lim && (n < 32 || c.length <= slim);
    int worst = std::max(c.inside, c.outside);
    if (worst >= n) return std::make_tuple(2, worst, c.length);
    return balanced ? std::make_tuple(0, c.length, worst) : std::make_tuple(1, worst, c.length);
  };
  bool have = false;
  Candidate best;
  Tree best_tree;
  for (VertexId r : roots) {
    for (int kind = 0; kind < 2; ++kind) {
      Tree t = kind == 0 ? bfs_tree(e, r) : level_tree(e, r);
      bool improved = false;
      evaluate_tree(e, ft, t, r, [&](const Candidate& c) {
        if (!have || key(c) < key(best)) {
          best = c;
          have = true;
          improved = true;
        }
      });
      if (improved) best_tree = std::move(t);
    }
  }
  SeparatorCycle out;
  if (!have) return out;
  out.vertices = cycle_of(e, best_tree, best.closing);
  out.inside_count = best.inside;
  out.outside_count = best.outside;
  return out;
}

namespace detail {

CycleSides classify_cycle(const Embedding& e, const std::vector<VertexId>& cyc) {
  const int n = e.num_vertices();
  const int L = static_cast<int>(cyc.size());
  if (L < 3) throw InvalidCycle("cycle needs at least three vertices");
  CycleSides s;
  s.vertex_in.assign(n, 0);
  s.slot_in.assign(e.num_slots(), 0);
  std::vector<char> on(n, 0);
  for (VertexId v : cyc) {
    if (v < 0 || v >= n) throw InvalidCycle("cycle vertex out of range");
    if (on[v]) throw InvalidCycle("cycle repeats a vertex");
    on[v] = 1;
  }
  for (int i = 0; i < L; ++i) {
    VertexId u = cyc[i], v = cyc[(i + 1) % L];
    DartId found = kNone;
    DartId f = e.first_dart(u);
    if (f != kNone) {
      DartId d = f;
      do {
        if (e.head(d) == v) { found = d; break; }
        d = e.next_cw(d);
      } while (d != f);
    }
    if (found == kNone) throw InvalidCycle("consecutive cycle vertices are not adjacent");
    s.forward.push_back(found);
    s.slot_in[Embedding::slot_of(found)] = 2;
  }
  Embedding::FaceTrace ft = e.trace_faces();
  std::vector<DartId> face_dart(ft.num_faces, kNone);
  for (DartId d = 0; d < e.num_darts(); ++d)
    if (face_dart[ft.face_of_dart[d]] == kNone) face_dart[ft.face_of_dart[d]] = d;
  std::vector<char> inside(ft.num_faces, 0);
  std::vector<int> q;
  for (DartId d : s.forward) {
    int f = ft.face_of_dart[d];
    if (!inside[f]) { inside[f] = 1; q.push_back(f); }
  }
  for (std::size_t h = 0; h < q.size(); ++h) {
    DartId d0 = face_dart[q[h]], d = d0;
    do {
      if (s.slot_in[Embedding::slot_of(d)] != 2) {
        int g = ft.face_of_dart[Embedding::twin(d)];
        if (!inside[g]) { inside[g] = 1; q.push_back(g); }
      }
      d = e.face_next(d);
    } while (d != d0);
  }
  for (DartId d : s.forward)
    if (inside[ft.face_of_dart[Embedding::twin(d)]]) throw InvalidCycle("cycle does not separate its sides");
  for (SlotId sl = 0; sl < e.num_slots(); ++sl) {
    if (s.slot_in[sl] == 2) continue;
    char a = inside[ft.face_of_dart[2 * sl]], b = inside[ft.face_of_dart[2 * sl + 1]];
    if (a != b) throw InvalidCycle("inconsistent edge side");
    s.slot_in[sl] = a;
  }
  for (VertexId v = 0; v < n; ++v) {
    if (on[v]) { s.vertex_in[v] = 2; continue; }
    DartId f = e.first_dart(v);
    if (f == kNone) { s.vertex_in[v] = 0; continue; }
    char side = s.slot_in[Embedding::slot_of(f)];
    DartId d = f;
    do {
      char here = s.slot_in[Embedding::slot_of(d)];
      if (here == 2 || here != side) throw InvalidCycle("inconsistent vertex side");
      d = e.next_cw(d);
    } while (d != f);
    s.vertex_in[v] = side;
  }
  return s;
}

}  // namespace detail

SeparatorCycle recount_sides(const Embedding& e, const std::vector<VertexId>& cycle) {
  detail::CycleSides s = detail::classify_cycle(e, cycle);
  SeparatorCycle c;
  c.vertices = cycle;
  for (char v : s.vertex_in) {
    if (v != 0) ++c.inside_count;
    if (v != 1) ++c.outside_count;
  }
  return c;
}

}  // namespace pgirth
