#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "sglab/kernels.hpp"
#include "sglab/rng.hpp"

using namespace sglab;
namespace k = sglab::kernels;

namespace {

struct Lanes {
  std::vector<double> x;
  std::vector<std::uint64_t> xi;
  std::vector<std::uint8_t> sym;

  explicit Lanes(std::size_t n, std::uint64_t seed) {
    RngCursor rng(seed, 55);
    x.resize(n);
    xi.resize(n);
    sym.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.next_uniform();
      xi[i] = rng.next_below(0xffffffffull);
      sym[i] = static_cast<std::uint8_t>(1 + rng.next_below(2));
    }
    // exercise the boundary lanes too
    if (n > 4) {
      x[0] = 0.0;
      x[1] = 0.9999999999999999;
      x[2] = 0.5;
      xi[0] = 0;
      xi[1] = 0xfffffffeull;
    }
  }
};

}  // namespace

TEST_CASE("scalar and simd kernels agree bit for bit") {
  if (!k::avx2_available()) {
    MESSAGE("avx2 not available; equivalence suite skipped");
    return;
  }
  const k::Ops& s = k::scalar();
  const k::Ops& v = k::avx2();
  const double table[3] = {0.0, 2.0, 3.0};
  const std::uint32_t deg[3] = {0, 2, 3};
  const std::uint64_t q = 0xffffffffull;

  for (std::size_t n : {std::size_t(1), std::size_t(5), std::size_t(64), std::size_t(1003)}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      Lanes base(n, seed);

      SUBCASE("") {}  // keep doctest happy about loop structure

      {
        auto a = base.x, b = base.x;
        for (int rep = 0; rep < 8; ++rep) {
          s.step_linear(a.data(), n, 3.0);
          v.step_linear(b.data(), n, 3.0);
        }
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
      }
      {
        auto a = base.x, b = base.x;
        for (int rep = 0; rep < 8; ++rep) {
          s.step_logistic(a.data(), n);
          v.step_logistic(b.data(), n);
        }
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
      }
      {
        auto a = base.x, b = base.x;
        for (int rep = 0; rep < 8; ++rep) {
          s.step_rotation(a.data(), n, 0.376);
          v.step_rotation(b.data(), n, 0.376);
        }
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
      }
      {
        auto a = base.x, b = base.x;
        for (int rep = 0; rep < 8; ++rep) {
          s.step_table(a.data(), base.sym.data(), n, table);
          v.step_table(b.data(), base.sym.data(), n, table);
        }
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
      }
      {
        std::vector<double> a(n, 0.0), b(n, 0.0);
        for (int rep = 0; rep < 8; ++rep) {
          s.accum_table(a.data(), base.sym.data(), n, table);
          v.accum_table(b.data(), base.sym.data(), n, table);
        }
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);
      }
      {
        k::ArcSpan arcs[2] = {{0.93, 0.2}, {0.4, 0.05}};
        std::vector<std::uint8_t> a(n, 9), b(n, 7);
        s.mask_in_arcs(base.x.data(), n, arcs, 2, a.data());
        v.mask_in_arcs(base.x.data(), n, arcs, 2, b.data());
        CHECK(std::memcmp(a.data(), b.data(), n) == 0);
      }
      {
        auto a = base.xi, b = base.xi;
        for (int rep = 0; rep < 8; ++rep) {
          s.step_modq_table(a.data(), base.sym.data(), n, deg, q);
          v.step_modq_table(b.data(), base.sym.data(), n, deg, q);
        }
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(std::uint64_t)) == 0);
      }
      {
        auto a = base.xi, b = base.xi;
        for (int rep = 0; rep < 8; ++rep) {
          s.step_modq(a.data(), n, 3, q);
          v.step_modq(b.data(), n, 3, q);
        }
        CHECK(std::memcmp(a.data(), b.data(), n * sizeof(std::uint64_t)) == 0);
      }
      {
        k::RangeU64 ranges[2] = {{0, q / 4}, {q - 17, q}};
        std::vector<std::uint8_t> a(n, 9), b(n, 7);
        s.mask_in_ranges(base.xi.data(), n, ranges, 2, a.data());
        v.mask_in_ranges(base.xi.data(), n, ranges, 2, b.data());
        CHECK(std::memcmp(a.data(), b.data(), n) == 0);
      }
    }
  }
}

TEST_CASE("modq kernels compute the exact remainder") {
  const k::Ops& s = k::scalar();
  const k::Ops& v = k::avx2_available() ? k::avx2() : k::scalar();
  const std::uint64_t q = (1ull << 32) - 1ull;
  std::vector<std::uint64_t> edge = {0, 1, 2, q - 1, q - 2, q / 2, q / 3, 12345};
  for (std::uint32_t kdeg : {2u, 3u, 5u, 63u}) {
    auto a = edge, b = edge;
    s.step_modq(a.data(), a.size(), kdeg, q);
    v.step_modq(b.data(), b.size(), kdeg, q);
    for (std::size_t i = 0; i < edge.size(); ++i) {
      CHECK(a[i] == (edge[i] * kdeg) % q);
      CHECK(b[i] == a[i]);
    }
  }
}

TEST_CASE("dispatch respects force_scalar") {
  k::force_scalar(true);
  CHECK(std::string(k::active().name) == "scalar");
  k::force_scalar(false);
  if (k::avx2_available()) CHECK(std::string(k::active().name) == "avx2");
}
