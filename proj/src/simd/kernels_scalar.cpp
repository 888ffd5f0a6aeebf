#include "fpp/simd.hpp"

#include <cmath>
#include <limits>

namespace fpp::simd::scalar {

namespace {

void min_plus_accumulate(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = a[i] + b[i];
    if (v < out[i]) out[i] = v;
  }
}

void min_plus_broadcast(double* out, const double* a, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
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
  for (std::size_t j = 0; j < n; ++j) {
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

}  // namespace fpp::simd::scalar
