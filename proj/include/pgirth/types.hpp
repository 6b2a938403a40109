#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace pgirth {

using VertexId = std::int32_t;
using ArcId = std::int32_t;
using DartId = std::int32_t;
using SlotId = std::int32_t;
using FaceId = std::int32_t;

inline constexpr std::int32_t kNone = -1;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Arithmetic conventions for the two supported weight types.  Integer weights
// are exact; the infinity sentinel sits far enough below the type maximum that
// adding any two finite path weights never overflows.
template <typename Scalar>
struct WeightTraits;

template <>
struct WeightTraits<std::int64_t> {
  static constexpr bool exact = true;
  static constexpr std::int64_t infinity() {
    return std::numeric_limits<std::int64_t>::max() / 4;
  }
  static constexpr std::int64_t tolerance(std::int64_t) { return 0; }
};

template <>
struct WeightTraits<double> {
  static constexpr bool exact = false;
  static constexpr double infinity() {
    return std::numeric_limits<double>::infinity();
  }
  static double tolerance(double scale) {
    return 1e-9 * std::max(1.0, std::abs(scale));
  }
};

template <typename Scalar>
constexpr Scalar infinity() {
  return WeightTraits<Scalar>::infinity();
}

template <typename Scalar>
constexpr bool is_infinite(Scalar x) {
  return x >= WeightTraits<Scalar>::infinity();
}

// Saturating addition: inf + x = inf.
template <typename Scalar>
constexpr Scalar sat_add(Scalar a, Scalar b) {
  if (is_infinite(a) || is_infinite(b)) return infinity<Scalar>();
  return a + b;
}

template <typename Scalar>
Scalar abs_weight(Scalar x) {
  return x < Scalar(0) ? -x : x;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmbeddingInvalid : public Error {
 public:
  using Error::Error;
};
class DanglingReference : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};
class NotTriangulated : public Error {
 public:
  using Error::Error;
};
class InvalidCycle : public Error {
 public:
  using Error::Error;
};
class InfeasiblePrices : public Error {
 public:
  using Error::Error;
};
class NegativeCycleFound : public Error {
 public:
  using Error::Error;
};
class BoundaryNotOnOneFace : public Error {
 public:
  using Error::Error;
};
class Unreachable : public Error {
 public:
  using Error::Error;
};
class BoundaryMismatch : public Error {
 public:
  using Error::Error;
};
class NegativeReducedCost : public Error {
 public:
  using Error::Error;
};
class MongeViolation : public Error {
 public:
  using Error::Error;
};
class PathWeightMismatch : public Error {
 public:
  using Error::Error;
};
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};
class CapExceeded : public Error {
 public:
  using Error::Error;
};
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// Girth of a digraph: the weight of a shortest cycle, +inf when acyclic and
// -inf when some cycle has negative weight.
template <typename Scalar>
class GirthValue {
 public:
  enum class Kind { Finite, PlusInfinity, MinusInfinity };

  GirthValue() = default;

  static GirthValue finite(Scalar w) { return GirthValue(Kind::Finite, w); }
  static GirthValue plus_infinity() { return GirthValue(Kind::PlusInfinity, Scalar(0)); }
  static GirthValue minus_infinity() { return GirthValue(Kind::MinusInfinity, Scalar(0)); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_plus_infinity() const { return kind_ == Kind::PlusInfinity; }
  bool is_minus_infinity() const { return kind_ == Kind::MinusInfinity; }

  Scalar weight() const {
    if (kind_ != Kind::Finite) throw std::logic_error("girth is not finite");
    return weight_;
  }

  // Total order: -inf < finite < +inf.
  friend bool operator<(const GirthValue& a, const GirthValue& b) {
    if (a.kind_ != b.kind_) return rank(a.kind_) < rank(b.kind_);
    return a.kind_ == Kind::Finite && a.weight_ < b.weight_;
  }
  friend bool operator==(const GirthValue& a, const GirthValue& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.weight_ == b.weight_);
  }

 private:
  GirthValue(Kind k, Scalar w) : kind_(k), weight_(w) {}
  static int rank(Kind k) {
    switch (k) {
      case Kind::MinusInfinity: return 0;
      case Kind::Finite: return 1;
      case Kind::PlusInfinity: return 2;
    }
    return 2;
  }

  Kind kind_ = Kind::PlusInfinity;
  Scalar weight_ = Scalar(0);
};

template <typename Scalar>
GirthValue<Scalar> min(const GirthValue<Scalar>& a, const GirthValue<Scalar>& b) {
  return b < a ? b : a;
}

}  // namespace pgirth
