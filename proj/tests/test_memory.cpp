#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <new>

#include "helpers.hpp"
#include "pgirth/cycle_extract.hpp"
#include "pgirth/engine.hpp"

namespace {

std::atomic<long> live{0};
std::atomic<long> peak{0};

void note_alloc(std::size_t n) {
  long now = live.fetch_add(static_cast<long>(n)) + static_cast<long>(n);
  long p = peak.load();
  while (now > p && !peak.compare_exchange_weak(p, now)) {
  }
}

}  // namespace

void* operator new(std::size_t n) {
  void* p = std::malloc(n + 16);
  if (!p) throw std::bad_alloc();
  *static_cast<std::size_t*>(p) = n;
  note_alloc(n);
  return static_cast<char*>(p) + 16;
}

void operator delete(void* p) noexcept {
  if (!p) return;
  char* base = static_cast<char*>(p) - 16;
  live.fetch_sub(static_cast<long>(*reinterpret_cast<std::size_t*>(base)));
  std::free(base);
}

void operator delete(void* p, std::size_t) noexcept { operator delete(p); }
void* operator new[](std::size_t n) { return operator new(n); }
void operator delete[](void* p) noexcept { operator delete(p); }
void operator delete[](void* p, std::size_t) noexcept { operator delete(p); }

using namespace pgirth;
using namespace pgirth::testing;

namespace {

using I = std::int64_t;

// Least-squares slope of log(peak bytes above the input) against log(n).
double peak_exponent(MsspMode mssp, DdgMode ddg, bool witness) {
  std::vector<double> xs, ys;
  for (int side : {32, 45, 64, 90}) {
    GenSpec spec;
    spec.shape = Shape::Grid;
    spec.rows = side;
    spec.cols = side;
    spec.seed = static_cast<std::uint64_t>(side);
    PlanarGraph<I> g = make(spec);
    EngineConfig cfg;
    cfg.mssp_mode = mssp;
    cfg.ddg_mode = ddg;
    long base = live.load();
    peak.store(base);
    if (witness) {
      CycleResult<I> r = shortest_cycle(g, cfg);
      EXPECT_TRUE(r.witness);
    } else {
      GirthEngine<I>(cfg).girth(g);
    }
    double used = static_cast<double>(peak.load() - base);
    xs.push_back(std::log(static_cast<double>(g.num_vertices())));
    ys.push_back(std::log(used));
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) mx += xs[k], my += ys[k];
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST(PeakMemory, DenseGirthIsLinear) {
  double e = peak_exponent(MsspMode::Dense, DdgMode::Dense, false);
  RecordProperty("exponent", std::to_string(e));
  EXPECT_LE(e, 1.1);
}

TEST(PeakMemory, FastPathGirthIsLinear) {
  double e = peak_exponent(MsspMode::Klein, DdgMode::Monge, false);
  RecordProperty("exponent", std::to_string(e));
  EXPECT_LE(e, 1.1);
}

TEST(PeakMemory, WitnessExtractionIsLinear) {
  double e = peak_exponent(MsspMode::Dense, DdgMode::Dense, true);
  RecordProperty("exponent", std::to_string(e));
  EXPECT_LE(e, 1.1);
}
