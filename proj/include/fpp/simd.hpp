#pragma once

// Data-parallel inner kernels shared by the shortest-path, hub, continuous
// metric and highway-recursion code. Every kernel has a scalar reference
// implementation; vector variants must return bit-identical results.

#include <cstddef>
#include <span>

namespace fpp::simd {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

struct KernelTable {
  // out[i] = min(out[i], a[i] + b[i])
  void (*min_plus_accumulate)(double* out, const double* a, const double* b, std::size_t n);
  // out[i] = min(out[i], a[i] + c)
  void (*min_plus_broadcast)(double* out, const double* a, double c, std::size_t n);
  // min_i a[i] + b[i]  (+inf when n == 0)
  double (*min_plus_reduce)(const double* a, const double* b, std::size_t n);
  // out[j] = sum_k weights[k] * |coords[k][j] - query[k]|, summed in k order
  void (*weighted_l1_row)(double* out, const double* const* coords, const double* query, const double* weights,
                          std::size_t dim, std::size_t n);
  // first index of the minimum; n when n == 0
  std::size_t (*argmin)(const double* a, std::size_t n);
};

const KernelTable& kernels(Isa isa);

/// Kernel set selected at startup: the widest supported ISA, unless the
/// environment variable FPP_SIMD names another one ("scalar", "avx2", "neon").
Isa active_isa();
const KernelTable& active();

/// Overrides the active ISA (tests and benchmarks). Throws when unsupported.
void set_active_isa(Isa isa);

inline void min_plus_accumulate(std::span<double> out, std::span<const double> a, std::span<const double> b) {
  active().min_plus_accumulate(out.data(), a.data(), b.data(), out.size());
}
inline void min_plus_broadcast(std::span<double> out, std::span<const double> a, double c) {
  active().min_plus_broadcast(out.data(), a.data(), c, out.size());
}
inline double min_plus_reduce(std::span<const double> a, std::span<const double> b) {
  return active().min_plus_reduce(a.data(), b.data(), a.size());
}
inline std::size_t argmin(std::span<const double> a) { return active().argmin(a.data(), a.size()); }

namespace scalar {
extern const KernelTable table;
}
#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
extern const KernelTable table;
}
#endif
#if defined(__aarch64__)
namespace neon {
extern const KernelTable table;
}
#endif

}  // namespace fpp::simd
