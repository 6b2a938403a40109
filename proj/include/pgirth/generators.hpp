#pragma once

#include <cstdint>
#include <string>

#include "pgirth/io.hpp"

namespace pgirth {

enum class Shape { Grid, Wheel, Nested };
enum class Safety { Screened, Raw };
enum class Orientation { Both, Random, Acyclic };

struct GenSpec {
  Shape shape = Shape::Grid;
  int rows = 3;
  int cols = 3;
  int k = 8;   // wheel rim size
  int n = 9;   // nested triangulation size
  int lo = -8;
  int hi = 32;
  double negative_fraction = 0.2;
  Safety safety = Safety::Screened;
  Orientation orientation = Orientation::Both;
  std::uint64_t seed = 0;

  int num_vertices() const;
};

// Embedded digraph with integer weights.  Throws InvalidSpec.
InputGraph gen(const GenSpec& spec);

Shape parse_shape(const std::string& s);
Safety parse_safety(const std::string& s);
Orientation parse_orientation(const std::string& s);
std::string to_string(Shape s);
std::string to_string(Safety s);
std::string to_string(Orientation o);

}  // namespace pgirth
