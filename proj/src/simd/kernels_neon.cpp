#include "fpp/simd.hpp"

#include <arm_neon.h>

#include <cmath>
#include <limits>

namespace fpp::simd::neon {

namespace {

inline float64x2_t keep_smaller(float64x2_t current, float64x2_t candidate) {
  const uint64x2_t lt = vcltq_f64(candidate, current);
  return vbslq_f64(lt, candidate, current);
}

void min_plus_accumulate(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(out + i, keep_smaller(vld1q_f64(out + i), v));
  }
  for (; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < out[i]) out[i] = v;
  }
}

void min_plus_broadcast(double* out, const double* a, double c, std::size_t n) {
  const float64x2_t cv = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vaddq_f64(vld1q_f64(a + i), cv);
    vst1q_f64(out + i, keep_smaller(vld1q_f64(out + i), v));
  }
  for (; i < n; ++i) {
    const double v = a[i] + c;
    if (v < out[i]) out[i] = v;
  }
}

double min_plus_reduce(const double* a, const double* b, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < best) best = v;
  }
  return best;
}

void weighted_l1_row(double* out, const double* const* coords, const double* query, const double* weights,
                     std::size_t dim, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const float64x2_t diff = vsubq_f64(vld1q_f64(coords[k] + j), vdupq_n_f64(query[k]));
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(weights[k]), vabsq_f64(diff)));
    }
    vst1q_f64(out + j, acc);
  }
  for (; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) acc = acc + weights[k] * std::fabs(coords[k][j] - query[k]);
    out[j] = acc;
  }
}

std::size_t argmin(const double* a, std::size_t n) {
  if (n == 0) return 0;
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (a[i] < a[best]) best = i;
  }
  return best;
}

}  // namespace

const KernelTable table{min_plus_accumulate, min_plus_broadcast, min_plus_reduce, weighted_l1_row, argmin};

}  // namespace fpp::simd::neon
