#pragma once

#include <cstddef>
#include <cstdint>

namespace sglab::kernels {

// Non-wrapping arc [start, start+length), length == 1 meaning everything.
struct ArcSpan {
  double start;
  double length;
};

// Half-open integer range [lo, hi) of scaled circle coordinates.
struct RangeU64 {
  std::uint64_t lo;
  std::uint64_t hi;
};

// Batch kernels over contiguous lanes. Scalar and SIMD variants implement the
// same IEEE operation sequence and must produce bit-identical outputs; the
// equivalence suite asserts exactly that.
struct Ops {
  const char* name;

  // x[i] = k*x[i] mod 1
  void (*step_linear)(double* x, std::size_t n, double k);
  // x[i] = (4*x[i])*(1-x[i])
  void (*step_logistic)(double* x, std::size_t n);
  // x[i] = x[i]+alpha mod 1
  void (*step_rotation)(double* x, std::size_t n, double alpha);
  // x[i] = table[sym[i]]*x[i] mod 1 (per-lane degree)
  void (*step_table)(double* x, const std::uint8_t* sym, std::size_t n, const double* table);
  // acc[i] += table[sym[i]]
  void (*accum_table)(double* acc, const std::uint8_t* sym, std::size_t n, const double* table);
  // out[i] = 1 iff x[i] lies in some arc (half-open)
  void (*mask_in_arcs)(const double* x, std::size_t n, const ArcSpan* arcs, std::size_t m,
                       std::uint8_t* out);
  // x[i] = (x[i] * deg[sym[i]]) mod q, exact integer arithmetic; requires
  // x[i] < q < 2^32 and degrees < 64.
  void (*step_modq_table)(std::uint64_t* x, const std::uint8_t* sym, std::size_t n,
                          const std::uint32_t* deg, std::uint64_t q);
  // x[i] = (x[i] * k) mod q
  void (*step_modq)(std::uint64_t* x, std::size_t n, std::uint32_t k, std::uint64_t q);
  // out[i] = 1 iff x[i] lies in some range (half-open)
  void (*mask_in_ranges)(const std::uint64_t* x, std::size_t n, const RangeU64* ranges,
                         std::size_t m, std::uint8_t* out);
};

const Ops& scalar();
const Ops& avx2();  // callable only when avx2_available()
bool avx2_available();

// Active variant: AVX2 when the CPU supports it and scalar was not forced.
const Ops& active();
void force_scalar(bool on);

}  // namespace sglab::kernels
