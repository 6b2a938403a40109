#pragma once

#include <array>
#include <vector>

#include "pgirth/types.hpp"

namespace pgirth {

// Combinatorial embedding of an undirected multigraph.  Each embedded edge
// ("slot") s owns two darts: 2s leaves ends[s][0], 2s+1 leaves ends[s][1].
// Every vertex keeps its darts in a cyclic clockwise list.
class Embedding {
 public:
  struct FaceTrace {
    std::vector<FaceId> face_of_dart;
    std::vector<int> face_size;
    int num_faces = 0;
  };

  Embedding() = default;
  explicit Embedding(int num_vertices);

  // rotations[v] lists the darts leaving v in clockwise order.
  static Embedding from_rotations(int num_vertices,
                                  std::vector<std::array<VertexId, 2>> ends,
                                  const std::vector<std::vector<DartId>>& rotations);

  int num_vertices() const { return static_cast<int>(first_.size()); }
  int num_slots() const { return static_cast<int>(ends_.size()); }
  int num_darts() const { return 2 * num_slots(); }

  static DartId twin(DartId d) { return d ^ 1; }
  static SlotId slot_of(DartId d) { return d >> 1; }
  static DartId dart_of(SlotId s, int side) { return 2 * s + side; }

  VertexId tail(DartId d) const { return ends_[d >> 1][d & 1]; }
  VertexId head(DartId d) const { return ends_[d >> 1][(d & 1) ^ 1]; }
  const std::array<VertexId, 2>& ends(SlotId s) const { return ends_[s]; }

  DartId next_cw(DartId d) const { return next_[d]; }
  DartId prev_cw(DartId d) const { return prev_[d]; }
  DartId face_next(DartId d) const { return next_[twin(d)]; }
  DartId first_dart(VertexId v) const { return first_[v]; }
  int degree(VertexId v) const;

  std::vector<DartId> rotation(VertexId v) const;

  VertexId add_vertex();
  // Inserts a new edge u-v.  Its dart at u goes immediately before before_u in
  // the clockwise order at u (kNone when u is isolated); likewise at v.
  // Returns the new slot, whose dart 2s leaves u.
  SlotId add_slot(VertexId u, VertexId v, DartId before_u, DartId before_v);

  FaceTrace trace_faces() const;

  // Connected components of the underlying graph (isolated vertices count).
  std::vector<int> components(int* count) const;

  // Throws EmbeddingInvalid unless every component is a genus-0 embedding.
  void validate() const;

 private:
  void insert_before(DartId d, VertexId v, DartId before);

  std::vector<std::array<VertexId, 2>> ends_;
  std::vector<DartId> next_;
  std::vector<DartId> prev_;
  std::vector<DartId> first_;
};

}  // namespace pgirth
