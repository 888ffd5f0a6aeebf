#include "fpp/errors.hpp"
#include "fpp/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace fpp::simd {

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(FPP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(FPP_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) throw SchemaError(std::string("SIMD kernels not available: ") + isa_name(isa));
  switch (isa) {
#if defined(FPP_HAVE_AVX2)
    case Isa::avx2: return avx2::table;
#endif
#if defined(FPP_HAVE_NEON)
    case Isa::neon: return neon::table;
#endif
    default: return scalar::table;
  }
}

namespace {

Isa detect() {
  if (const char* env = std::getenv("FPP_SIMD")) {
    const std::string name(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa) && isa_supported(isa)) return isa;
    }
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

const KernelTable& active() { return kernels(active_isa()); }

void set_active_isa(Isa isa) {
  kernels(isa);  // throws when unsupported
  current().store(isa, std::memory_order_relaxed);
}

}  // namespace fpp::simd
