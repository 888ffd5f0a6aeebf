#include "doctest.h"

#include "fpp/simd.hpp"
#include "fpp/stats.hpp"

#include <cstring>
#include <limits>
#include <vector>

using namespace fpp;

namespace {

std::vector<double> random_row(std::size_t n, std::uint64_t& state, bool with_inf) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = uniform01(state) * 10.0 - 2.0;
    if (with_inf && uniform01(state) < 0.2) x = std::numeric_limits<double>::infinity();
  }
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<simd::Isa> vector_isas() {
  std::vector<simd::Isa> out;
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon})
    if (simd::isa_supported(isa)) out.push_back(isa);
  return out;
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar is always supported and selectable") {
  CHECK(simd::isa_supported(simd::Isa::scalar));
  const auto before = simd::active_isa();
  simd::set_active_isa(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  simd::set_active_isa(before);
}

TEST_CASE("vector kernels match the scalar reference bit for bit") {
  const auto& ref = simd::kernels(simd::Isa::scalar);
  std::uint64_t state = 2024;
  for (auto isa : vector_isas()) {
    const auto& k = simd::kernels(isa);
    INFO(simd::isa_name(isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 17u, 64u, 129u}) {
      for (bool inf : {false, true}) {
        const auto a = random_row(n, state, inf), b = random_row(n, state, inf), o = random_row(n, state, inf);
        auto o1 = o, o2 = o;
        ref.min_plus_accumulate(o1.data(), a.data(), b.data(), n);
        k.min_plus_accumulate(o2.data(), a.data(), b.data(), n);
        CHECK(same_bits(o1, o2));

        o1 = o, o2 = o;
        ref.min_plus_broadcast(o1.data(), a.data(), 0.37, n);
        k.min_plus_broadcast(o2.data(), a.data(), 0.37, n);
        CHECK(same_bits(o1, o2));

        const double r1 = ref.min_plus_reduce(a.data(), b.data(), n);
        const double r2 = k.min_plus_reduce(a.data(), b.data(), n);
        CHECK(std::memcmp(&r1, &r2, sizeof r1) == 0);

        CHECK(ref.argmin(a.data(), n) == k.argmin(a.data(), n));

        for (std::size_t dim : {1u, 2u, 3u}) {
          std::vector<std::vector<double>> coords;
          std::vector<const double*> ptrs;
          for (std::size_t d = 0; d < dim; ++d) coords.push_back(random_row(n, state, false));
          for (auto& c : coords) ptrs.push_back(c.data());
          const auto q = random_row(dim, state, false);
          const auto wts = random_row(dim, state, false);
          std::vector<double> w1(n), w2(n);
          ref.weighted_l1_row(w1.data(), ptrs.data(), q.data(), wts.data(), dim, n);
          k.weighted_l1_row(w2.data(), ptrs.data(), q.data(), wts.data(), dim, n);
          CHECK(same_bits(w1, w2));
        }
      }
    }
  }
}

TEST_CASE("argmin returns the first minimum") {
  const std::vector<double> a = {3, 1, 2, 1, 1, 5, 1, 0.5, 0.5};
  for (auto isa : {simd::Isa::scalar, simd::Isa::avx2, simd::Isa::neon}) {
    if (!simd::isa_supported(isa)) continue;
    CHECK(simd::kernels(isa).argmin(a.data(), a.size()) == 7);
    CHECK(simd::kernels(isa).argmin(a.data(), 0) == 0);
  }
}

TEST_CASE("scalar reference semantics") {
  const auto& k = simd::kernels(simd::Isa::scalar);
  std::vector<double> out = {5, 5, 5};
  const std::vector<double> a = {1, 7, 2}, b = {1, 1, 4};
  k.min_plus_accumulate(out.data(), a.data(), b.data(), 3);
  CHECK(out == std::vector<double>{2, 5, 5});
  CHECK(k.min_plus_reduce(a.data(), b.data(), 3) == 2.0);
  CHECK(k.min_plus_reduce(a.data(), b.data(), 0) == std::numeric_limits<double>::infinity());
}

}  // TEST_SUITE
