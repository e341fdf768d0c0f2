#include <atomic>

#include "sglab/kernels.hpp"

namespace sglab::kernels {

namespace {
std::atomic<bool> g_force_scalar{false};
}

bool avx2_available() {
#if defined(__AVX2__) || defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Ops& active() {
  if (g_force_scalar.load(std::memory_order_relaxed)) return scalar();
  if (avx2_available()) return avx2();
  return scalar();
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

}  // namespace sglab::kernels
