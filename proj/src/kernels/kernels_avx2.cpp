#include "sglab/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cstring>

namespace sglab::kernels {

namespace {

// 2^52; or-ing into the mantissa turns a small non-negative integer into a
// double after subtracting it back, and vice versa.
const __m256d kMagic = _mm256_set1_pd(4503599627370496.0);

inline __m256d u64_to_f64(__m256i v) {
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, _mm256_castpd_si256(kMagic))),
                       kMagic);
}

inline __m256i f64_to_u64(__m256d v) {
  return _mm256_and_si256(_mm256_castpd_si256(_mm256_add_pd(v, kMagic)),
                          _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll));
}

inline __m128i load_sym4(const std::uint8_t* sym) {
  std::uint32_t packed;
  std::memcpy(&packed, sym, 4);
  return _mm_cvtepu8_epi32(_mm_cvtsi32_si128(static_cast<int>(packed)));
}

inline void store_mask4(std::uint8_t* out, __m256d hit) {
  int bits = _mm256_movemask_pd(hit);
  out[0] = static_cast<std::uint8_t>(bits & 1);
  out[1] = static_cast<std::uint8_t>((bits >> 1) & 1);
  out[2] = static_cast<std::uint8_t>((bits >> 2) & 1);
  out[3] = static_cast<std::uint8_t>((bits >> 3) & 1);
}

void v_step_linear(double* x, std::size_t n, double k) {
  const __m256d kk = _mm256_set1_pd(k);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d y = _mm256_mul_pd(v, kk);
    y = _mm256_sub_pd(y, _mm256_floor_pd(y));
    _mm256_storeu_pd(x + i, y);
  }
  if (i < n) scalar().step_linear(x + i, n - i, k);
}

void v_step_logistic(double* x, std::size_t n) {
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d y = _mm256_mul_pd(_mm256_mul_pd(four, v), _mm256_sub_pd(one, v));
    _mm256_storeu_pd(x + i, y);
  }
  if (i < n) scalar().step_logistic(x + i, n - i);
}

void v_step_rotation(double* x, std::size_t n, double alpha) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d y = _mm256_add_pd(_mm256_loadu_pd(x + i), a);
    y = _mm256_sub_pd(y, _mm256_floor_pd(y));
    _mm256_storeu_pd(x + i, y);
  }
  if (i < n) scalar().step_rotation(x + i, n - i, alpha);
}

void v_step_table(double* x, const std::uint8_t* sym, std::size_t n, const double* table) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d deg = _mm256_i32gather_pd(table, load_sym4(sym + i), 8);
    __m256d y = _mm256_mul_pd(_mm256_loadu_pd(x + i), deg);
    y = _mm256_sub_pd(y, _mm256_floor_pd(y));
    _mm256_storeu_pd(x + i, y);
  }
  if (i < n) scalar().step_table(x + i, sym + i, n - i, table);
}

void v_accum_table(double* acc, const std::uint8_t* sym, std::size_t n, const double* table) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_i32gather_pd(table, load_sym4(sym + i), 8);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), t));
  }
  if (i < n) scalar().accum_table(acc + i, sym + i, n - i, table);
}

void v_mask_in_arcs(const double* x, std::size_t n, const ArcSpan* arcs, std::size_t m,
                    std::uint8_t* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d hit = _mm256_setzero_pd();
    for (std::size_t a = 0; a < m; ++a) {
      __m256d u = _mm256_sub_pd(v, _mm256_set1_pd(arcs[a].start));
      __m256d neg = _mm256_cmp_pd(u, zero, _CMP_LT_OQ);
      u = _mm256_add_pd(u, _mm256_and_pd(neg, one));
      __m256d in = _mm256_cmp_pd(u, _mm256_set1_pd(arcs[a].length), _CMP_LT_OQ);
      hit = _mm256_or_pd(hit, in);
    }
    store_mask4(out + i, hit);
  }
  if (i < n) scalar().mask_in_arcs(x + i, n - i, arcs, m, out + i);
}

// Exact (x*deg) mod q for x < q < 2^32, deg < 64: the product fits 2^38, the
// float-division quotient is fixed up to the true remainder.
inline __m256i modq_product(__m256i prod, __m256i qv, __m256d qd) {
  __m256d pd = u64_to_f64(prod);
  __m256d t = _mm256_floor_pd(_mm256_div_pd(pd, qd));
  __m256i tq = _mm256_mul_epu32(f64_to_u64(t), qv);
  __m256i r = _mm256_sub_epi64(prod, tq);
  __m256i neg = _mm256_cmpgt_epi64(_mm256_setzero_si256(), r);
  r = _mm256_add_epi64(r, _mm256_and_si256(neg, qv));
  __m256i ge = _mm256_cmpgt_epi64(r, _mm256_sub_epi64(qv, _mm256_set1_epi64x(1)));
  r = _mm256_sub_epi64(r, _mm256_and_si256(ge, qv));
  return r;
}

void v_step_modq_table(std::uint64_t* x, const std::uint8_t* sym, std::size_t n,
                       const std::uint32_t* deg, std::uint64_t q) {
  const __m256i qv = _mm256_set1_epi64x(static_cast<long long>(q));
  const __m256d qd = _mm256_set1_pd(static_cast<double>(q));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i d32 = _mm_i32gather_epi32(reinterpret_cast<const int*>(deg), load_sym4(sym + i), 4);
    __m256i d64 = _mm256_cvtepu32_epi64(d32);
    __m256i xv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    __m256i prod = _mm256_mul_epu32(xv, d64);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(x + i), modq_product(prod, qv, qd));
  }
  if (i < n) scalar().step_modq_table(x + i, sym + i, n - i, deg, q);
}

void v_step_modq(std::uint64_t* x, std::size_t n, std::uint32_t k, std::uint64_t q) {
  const __m256i qv = _mm256_set1_epi64x(static_cast<long long>(q));
  const __m256d qd = _mm256_set1_pd(static_cast<double>(q));
  const __m256i kv = _mm256_set1_epi64x(static_cast<long long>(k));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i xv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    __m256i prod = _mm256_mul_epu32(xv, kv);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(x + i), modq_product(prod, qv, qd));
  }
  if (i < n) scalar().step_modq(x + i, n - i, k, q);
}

void v_mask_in_ranges(const std::uint64_t* x, std::size_t n, const RangeU64* ranges,
                      std::size_t m, std::uint8_t* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i xv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    __m256i hit = _mm256_setzero_si256();
    for (std::size_t r = 0; r < m; ++r) {
      __m256i lo = _mm256_set1_epi64x(static_cast<long long>(ranges[r].lo));
      __m256i hi = _mm256_set1_epi64x(static_cast<long long>(ranges[r].hi));
      __m256i ge_lo = _mm256_andnot_si256(_mm256_cmpgt_epi64(lo, xv), _mm256_set1_epi64x(-1));
      __m256i lt_hi = _mm256_cmpgt_epi64(hi, xv);
      hit = _mm256_or_si256(hit, _mm256_and_si256(ge_lo, lt_hi));
    }
    store_mask4(out + i, _mm256_castsi256_pd(hit));
  }
  if (i < n) scalar().mask_in_ranges(x + i, n - i, ranges, m, out + i);
}

}  // namespace

const Ops& avx2() {
  static const Ops ops = {
      "avx2",          v_step_linear,  v_step_logistic,   v_step_rotation, v_step_table,
      v_accum_table,   v_mask_in_arcs, v_step_modq_table, v_step_modq,     v_mask_in_ranges,
  };
  return ops;
}

}  // namespace sglab::kernels

#else  // !__AVX2__

namespace sglab::kernels {

const Ops& avx2() { return scalar(); }

}  // namespace sglab::kernels

#endif
