#include "doctest.h"

#include "fpp/errors.hpp"
#include "fpp/model.hpp"
#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace fpp;

TEST_SUITE("model") {

TEST_CASE("deterministic field on a small box") {
  const LatticeBox box(2, 3);
  CHECK(box.edge_count() == 24);
  const auto w = sample_weights(EdgeDistribution::deterministic(1.0), box, 7);
  const auto ws = w.edge_weights();
  CHECK(ws.size() == 24);
  for (double x : ws) CHECK(x == 1.0);
}

TEST_CASE("edge count formula and unit edges") {
  for (int d : {2, 3})
    for (int n : {1, 2, 5}) {
      const LatticeBox box(d, n);
      CHECK(box.edge_count() == static_cast<std::size_t>(d * n * std::pow(n + 1, d - 1)));
      for (auto [lower, axis] : box.edges()) {
        auto v = box.vertex(lower);
        auto u = v;
        u[static_cast<std::size_t>(axis)] += 1;
        CHECK(box.contains(u));
        CHECK(l1_distance(u, v) == 1);
      }
    }
}

TEST_CASE("two-point weights stay in the support") {
  const auto dist = EdgeDistribution::two_point(1, 2, Rational(1, 2));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto w = sample_weights(dist, LatticeBox(2, 1), s);
    for (double x : w.edge_weights()) CHECK((x == 1.0 || x == 2.0));
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const auto dist = EdgeDistribution::uniform(0.5, 3.0);
  const LatticeBox box(3, 4);
  CHECK(sample_weights(dist, box, 42) == sample_weights(dist, box, 42));
  CHECK(!(sample_weights(dist, box, 42) == sample_weights(dist, box, 43)));
}

TEST_CASE("enlarging the box keeps shared edge weights") {
  const auto dist = EdgeDistribution::exponential(1.0, 0.2);
  const LatticeBox small(2, 3), large(2, 6);
  const auto ws = sample_weights(dist, small, 9);
  const auto wl = sample_weights(dist, large, 9);
  for (auto [lower, axis] : small.edges()) {
    const auto v = small.vertex(lower);
    CHECK(ws.weight(lower, axis) == wl.weight(large.index(v), axis));
  }
}

TEST_CASE("weights are at least the support infimum") {
  for (const auto& dist : {EdgeDistribution::uniform(0.3, 1.0), EdgeDistribution::exponential(2.0, 0.7),
                           EdgeDistribution::two_point(1, 5, Rational(1, 3))}) {
    const auto w = sample_weights(dist, LatticeBox(2, 8), 3);
    for (double x : w.edge_weights()) CHECK(x >= dist.support_infimum());
  }
}

TEST_CASE("support infimum matches the declared law") {
  CHECK(EdgeDistribution::deterministic(2.5).support_infimum() == 2.5);
  CHECK(EdgeDistribution::two_point(3, 1, Rational(1, 4)).support_infimum() == 1.0);
  CHECK(EdgeDistribution::uniform(0.25, 2).support_infimum() == 0.25);
  CHECK(EdgeDistribution::exponential(3.0, 0.5).support_infimum() == 0.5);
  CHECK(EdgeDistribution::finite({{4.0, Rational(1, 2)}, {0.5, Rational(1, 2)}}).support_infimum() == 0.5);
}

TEST_CASE("moment class consistent with kind") {
  CHECK(EdgeDistribution::deterministic(1).moment_class() == MomentClass::bounded);
  CHECK(EdgeDistribution::uniform(0, 1).has_all_exponential_moments());
  CHECK(EdgeDistribution::two_point(1, 2, Rational(1, 2)).has_all_exponential_moments());
  CHECK(!EdgeDistribution::exponential(1.0).has_all_exponential_moments());
  CHECK(EdgeDistribution::exponential(1.0).truncated(3.0).moment_class() == MomentClass::bounded);
}

TEST_CASE("subcritical atom check") {
  CHECK(subcritical_atom_check(EdgeDistribution::two_point(1, 2, Rational(1, 2)), 2));
  CHECK(!subcritical_atom_check(EdgeDistribution::two_point(0, 1, Rational(3, 5)), 2));
  CHECK(!subcritical_atom_check(EdgeDistribution::deterministic(0), 2));
  CHECK(subcritical_atom_check(EdgeDistribution::two_point(0, 1, Rational(1, 5)), 3));
  CHECK(!subcritical_atom_check(EdgeDistribution::two_point(0, 1, Rational(1, 4)), 3));
  CHECK_THROWS_AS(bond_percolation_threshold(4), std::domain_error);
}

TEST_CASE("truncation") {
  const auto t = truncate(EdgeDistribution::two_point(1, 5, Rational(1, 2)), 2);
  CHECK(t.is_finite_support());
  CHECK(t.exact_atom_mass(1.0) == Rational(1, 2));
  CHECK(t.exact_atom_mass(2.0) == Rational(1, 2));
  CHECK(t.support_supremum() == 2.0);
  CHECK(truncate(EdgeDistribution::deterministic(3), 10) == EdgeDistribution::deterministic(3));
  CHECK_THROWS_AS(truncate(EdgeDistribution::uniform(1, 2), 0.5), SchemaError);
}

TEST_CASE("truncated exponential against min of independent samples") {
  const auto t = truncate(EdgeDistribution::exponential(1.0), 1.0);
  CHECK(t.atom_mass(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  std::mt19937_64 rng(12345);
  std::exponential_distribution<double> e(1.0);
  const int N = 100000;
  std::vector<double> xs(N);
  for (double& x : xs) x = std::min(e(rng), 1.0);
  std::sort(xs.begin(), xs.end());
  for (double q : {0.1, 0.3, 0.5, 0.8, 0.999, 1.0}) {
    const double emp = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), q) - xs.begin()) / N;
    CHECK(std::abs(emp - t.cdf(q)) < 0.01);
  }
}

TEST_CASE("truncated field is the edgewise minimum") {
  const auto dist = EdgeDistribution::uniform(0.0, 4.0);
  const auto w = sample_weights(dist, LatticeBox(2, 6), 5);
  const auto wt = w.truncated(1.5);
  const auto a = w.edge_weights(), b = wt.edge_weights();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == std::min(a[i], 1.5));
}

TEST_CASE("derived seeds give uncorrelated fields") {
  // Smoke test: |r| below 4 / sqrt(N) for adjacent replicate indices.
  const auto dist = EdgeDistribution::uniform(0.0, 1.0);
  const LatticeBox box(2, 40);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto a = sample_weights(dist, box, derive_seed(99, k)).edge_weights();
    const auto b = sample_weights(dist, box, derive_seed(99, k + 1)).edge_weights();
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
    ma /= a.size(), mb /= b.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 4.0 / std::sqrt(static_cast<double>(a.size())));
  }
}

TEST_CASE("sampled law matches the distribution") {
  const auto dist = EdgeDistribution::finite({{1.0, Rational(1, 5)}, {2.0, Rational(3, 10)}, {3.0, Rational(1, 2)}});
  const auto w = sample_weights(dist, LatticeBox(2, 100), 1).edge_weights();
  double ones = 0;
  for (double x : w) ones += x == 1.0;
  const double p = ones / w.size();
  CHECK(std::abs(p - 0.2) < 4 * binomial_se(0.2, w.size()));
}

}  // TEST_SUITE
