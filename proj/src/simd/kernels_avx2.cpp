// Compiled with -mavx2; only reached after a runtime CPU check.
#include "fpp/simd.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace fpp::simd::avx2 {

namespace {

// min(x, y) returning x when y is not smaller, matching `if (v < out) out = v`.
inline __m256d keep_smaller(__m256d current, __m256d candidate) {
  const __m256d lt = _mm256_cmp_pd(candidate, current, _CMP_LT_OQ);
  return _mm256_blendv_pd(current, candidate, lt);
}

void min_plus_accumulate(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, keep_smaller(_mm256_loadu_pd(out + i), v));
  }
  for (; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < out[i]) out[i] = v;
  }
}

void min_plus_broadcast(double* out, const double* a, double c, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_loadu_pd(a + i), cv);
    _mm256_storeu_pd(out + i, keep_smaller(_mm256_loadu_pd(out + i), v));
  }
  for (; i < n; ++i) {
    const double v = a[i] + c;
    if (v < out[i]) out[i] = v;
  }
}

double min_plus_reduce(const double* a, const double* b, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_set1_pd(best);
    for (; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
      acc = keep_smaller(acc, v);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (double x : lanes) {
      if (x < best) best = x;
    }
  }
  for (; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < best) best = v;
  }
  return best;
}

void weighted_l1_row(double* out, const double* const* coords, const double* query, const double* weights,
                     std::size_t dim, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(coords[k] + j), _mm256_set1_pd(query[k]));
      const __m256d absd = _mm256_andnot_pd(sign_mask, diff);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(weights[k]), absd));
    }
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc = acc + weights[k] * std::fabs(coords[k][j] - query[k]);
    out[j] = acc;
  }
}

std::size_t argmin(const double* a, std::size_t n) {
  if (n == 0) return 0;
  double best = a[0];
  std::size_t i = 0;
  if (n >= 8) {
    __m256d acc = _mm256_set1_pd(best);
    for (; i + 4 <= n; i += 4) acc = keep_smaller(acc, _mm256_loadu_pd(a + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (double x : lanes) {
      if (x < best) best = x;
    }
  }
  for (; i < n; ++i) {
    if (a[i] < best) best = a[i];
  }
  // First index holding the minimum.
  const __m256d target = _mm256_set1_pd(best);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(a + j), target, _CMP_EQ_OQ));
    if (mask != 0) return j + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  for (; j < n; ++j) {
    if (a[j] == best) return j;
  }
  return 0;
}

}  // namespace

const KernelTable table{min_plus_accumulate, min_plus_broadcast, min_plus_reduce, weighted_l1_row, argmin};

}  // namespace fpp::simd::avx2
