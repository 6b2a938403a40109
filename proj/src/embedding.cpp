#include "pgirth/embedding.hpp"

#include <string>

namespace pgirth {

Embedding::Embedding(int num_vertices) : first_(num_vertices, kNone) {}

Embedding Embedding::from_rotations(int num_vertices,
                                    std::vector<std::array<VertexId, 2>> ends,
                                    const std::vector<std::vector<DartId>>& rotations) {
  if (static_cast<int>(rotations.size()) != num_vertices)
    throw EmbeddingInvalid("rotation count does not match vertex count");
  Embedding e(num_vertices);
  e.ends_ = std::move(ends);
  const int nd = e.num_darts();
  e.next_.assign(nd, kNone);
  e.prev_.assign(nd, kNone);
  for (const auto& se : e.ends_) {
    if (se[0] < 0 || se[0] >= num_vertices || se[1] < 0 || se[1] >= num_vertices)
      throw DanglingReference("edge endpoint out of range");
  }
  std::vector<char> seen(nd, 0);
  for (VertexId v = 0; v < num_vertices; ++v) {
    const auto& rot = rotations[v];
    for (std::size_t i = 0; i < rot.size(); ++i) {
      DartId d = rot[i];
      if (d < 0 || d >= nd) throw DanglingReference("rotation references unknown dart");
      if (seen[d]) throw EmbeddingInvalid("dart listed twice in rotations");
      if (e.tail(d) != v)
        throw EmbeddingInvalid("dart listed at vertex " + std::to_string(v) +
                               " but it leaves vertex " + std::to_string(e.tail(d)));
      seen[d] = 1;
      DartId nx = rot[(i + 1) % rot.size()];
      e.next_[d] = nx;
      e.prev_[nx] = d;
    }
    if (!rot.empty()) e.first_[v] = rot[0];
  }
  for (DartId d = 0; d < nd; ++d)
    if (!seen[d]) throw EmbeddingInvalid("edge endpoint missing from rotations");
  e.validate();
  return e;
}

int Embedding::degree(VertexId v) const {
  DartId f = first_[v];
  if (f == kNone) return 0;
  int k = 0;
  DartId d = f;
  do {
    ++k;
    d = next_[d];
  } while (d != f);
  return k;
}

std::vector<DartId> Embedding::rotation(VertexId v) const {
  std::vector<DartId> out;
  DartId f = first_[v];
  if (f == kNone) return out;
  DartId d = f;
  do {
    out.push_back(d);
    d = next_[d];
  } while (d != f);
  return out;
}

VertexId Embedding::add_vertex() {
  first_.push_back(kNone);
  return static_cast<VertexId>(first_.size() - 1);
}

void Embedding::insert_before(DartId d, VertexId v, DartId before) {
  if (before == kNone) {
    if (first_[v] != kNone) throw InternalInconsistency("insert position missing at non-isolated vertex");
    next_[d] = prev_[d] = d;
    first_[v] = d;
    return;
  }
  if (tail(before) != v) throw InternalInconsistency("insert position does not leave vertex");
  DartId p = prev_[before];
  next_[p] = d;
  prev_[d] = p;
  next_[d] = before;
  prev_[before] = d;
}

SlotId Embedding::add_slot(VertexId u, VertexId v, DartId before_u, DartId before_v) {
  SlotId s = num_slots();
  ends_.push_back({u, v});
  next_.resize(next_.size() + 2, kNone);
  prev_.resize(prev_.size() + 2, kNone);
  insert_before(2 * s, u, before_u);
  insert_before(2 * s + 1, v, before_v);
  return s;
}

Embedding::FaceTrace Embedding::trace_faces() const {
  FaceTrace t;
  const int nd = num_darts();
  t.face_of_dart.assign(nd, kNone);
  for (DartId d0 = 0; d0 < nd; ++d0) {
    if (t.face_of_dart[d0] != kNone) continue;
    int size = 0;
    DartId d = d0;
    do {
      t.face_of_dart[d] = t.num_faces;
      ++size;
      d = face_next(d);
    } while (d != d0);
    t.face_size.push_back(size);
    ++t.num_faces;
  }
  return t;
}

std::vector<int> Embedding::components(int* count) const {
  const int n = num_vertices();
  std::vector<int> comp(n, -1);
  std::vector<VertexId> stack;
  int c = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      DartId f = first_[v];
      if (f == kNone) continue;
      DartId d = f;
      do {
        VertexId w = head(d);
        if (comp[w] == -1) {
          comp[w] = c;
          stack.push_back(w);
        }
        d = next_[d];
      } while (d != f);
    }
    ++c;
  }
  if (count) *count = c;
  return comp;
}

void Embedding::validate() const {
  int ncomp = 0;
  std::vector<int> comp = components(&ncomp);
  std::vector<long long> chi(ncomp, 0);
  std::vector<char> has_edge(ncomp, 0);
  for (VertexId v = 0; v < num_vertices(); ++v) chi[comp[v]] += 1;
  for (SlotId s = 0; s < num_slots(); ++s) {
    chi[comp[ends_[s][0]]] -= 1;
    has_edge[comp[ends_[s][0]]] = 1;
  }
  FaceTrace t = trace_faces();
  std::vector<char> counted(t.num_faces, 0);
  for (DartId d = 0; d < num_darts(); ++d) {
    FaceId f = t.face_of_dart[d];
    if (!counted[f]) {
      counted[f] = 1;
      chi[comp[tail(d)]] += 1;
    }
  }
  for (int c = 0; c < ncomp; ++c) {
    long long expect = has_edge[c] ? 2 : 1;
    if (chi[c] != expect)
      throw EmbeddingInvalid("rotation system is not planar (Euler characteristic " +
                             std::to_string(chi[c]) + ")");
  }
}

}  // namespace pgirth
