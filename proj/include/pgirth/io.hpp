#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pgirth/planar_graph.hpp"

namespace pgirth {

struct InputArc {
  VertexId tail = kNone;
  VertexId head = kNone;
  std::int64_t int_weight = 0;
  double real_weight = 0.0;
};

// A graph file as written: arcs indexed by id and per-vertex clockwise
// endpoint lists.
struct InputGraph {
  int num_vertices = 0;
  std::vector<InputArc> arcs;
  std::vector<std::vector<Endpoint>> rotations;
  bool integral = true;  // every weight parsed as a decimal integer

  template <typename Scalar>
  std::vector<ArcSpec<Scalar>> arc_specs() const {
    std::vector<ArcSpec<Scalar>> out;
    out.reserve(arcs.size());
    for (const auto& a : arcs) {
      Scalar w;
      if constexpr (std::is_integral_v<Scalar>)
        w = static_cast<Scalar>(a.int_weight);
      else
        w = integral ? static_cast<Scalar>(a.int_weight) : static_cast<Scalar>(a.real_weight);
      out.push_back({a.tail, a.head, w});
    }
    return out;
  }

  template <typename Scalar>
  PlanarGraph<Scalar> to_graph() const {
    return build_graph<Scalar>(num_vertices, arc_specs<Scalar>(), rotations);
  }
};

// Throws FormatError on malformed text.
InputGraph parse_graph(std::istream& in);
InputGraph parse_graph_text(const std::string& text);
InputGraph read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const InputGraph& g);
std::string graph_to_text(const InputGraph& g);

// Shortest round-trip decimal form; integers print without a fraction.
std::string format_weight(double w);
std::string format_weight(std::int64_t w);

// Witness files hold one "c <arc_id>" line per arc; other lines are ignored.
std::vector<ArcId> parse_witness(std::istream& in);
std::vector<ArcId> read_witness_file(const std::string& path);

}  // namespace pgirth
