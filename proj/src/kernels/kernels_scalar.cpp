#include <cmath>

#include "sglab/kernels.hpp"

namespace sglab::kernels {

namespace {

void s_step_linear(double* x, std::size_t n, double k) {
  for (std::size_t i = 0; i < n; ++i) {
    double y = x[i] * k;
    x[i] = y - std::floor(y);
  }
}

void s_step_logistic(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (4.0 * x[i]) * (1.0 - x[i]);
  }
}

void s_step_rotation(double* x, std::size_t n, double alpha) {
  for (std::size_t i = 0; i < n; ++i) {
    double y = x[i] + alpha;
    x[i] = y - std::floor(y);
  }
}

void s_step_table(double* x, const std::uint8_t* sym, std::size_t n, const double* table) {
  for (std::size_t i = 0; i < n; ++i) {
    double y = x[i] * table[sym[i]];
    x[i] = y - std::floor(y);
  }
}

void s_accum_table(double* acc, const std::uint8_t* sym, std::size_t n, const double* table) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += table[sym[i]];
}

void s_mask_in_arcs(const double* x, std::size_t n, const ArcSpan* arcs, std::size_t m,
                    std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t hit = 0;
    for (std::size_t a = 0; a < m; ++a) {
      double u = x[i] - arcs[a].start;
      if (u < 0.0) u += 1.0;
      hit |= static_cast<std::uint8_t>(u < arcs[a].length);
    }
    out[i] = hit;
  }
}

void s_step_modq_table(std::uint64_t* x, const std::uint8_t* sym, std::size_t n,
                       const std::uint32_t* deg, std::uint64_t q) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (x[i] * deg[sym[i]]) % q;
  }
}

void s_step_modq(std::uint64_t* x, std::size_t n, std::uint32_t k, std::uint64_t q) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (x[i] * k) % q;
  }
}

void s_mask_in_ranges(const std::uint64_t* x, std::size_t n, const RangeU64* ranges,
                      std::size_t m, std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t hit = 0;
    for (std::size_t r = 0; r < m; ++r) {
      hit |= static_cast<std::uint8_t>(x[i] >= ranges[r].lo && x[i] < ranges[r].hi);
    }
    out[i] = hit;
  }
}

}  // namespace

const Ops& scalar() {
  static const Ops ops = {
      "scalar",        s_step_linear, s_step_logistic,   s_step_rotation, s_step_table,
      s_accum_table,   s_mask_in_arcs, s_step_modq_table, s_step_modq,    s_mask_in_ranges,
  };
  return ops;
}

}  // namespace sglab::kernels
