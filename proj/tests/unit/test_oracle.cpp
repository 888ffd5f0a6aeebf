#include "doctest.h"

#include "fpp/errors.hpp"
#include "fpp/model.hpp"
#include "fpp/oracle.hpp"
#include "fpp/passage_time.hpp"

#include <cmath>
#include <functional>

using namespace fpp;

namespace {

const auto kTwoPoint = EdgeDistribution::two_point(1, 2, Rational(1, 2));

double dfs_time(const WeightField& w, const Vertex& x, const Vertex& y) {
  const LatticeBox& box = w.box();
  std::vector<char> seen(box.vertex_count(), 0);
  double best = kInf;
  std::function<void(const Vertex&, double)> go = [&](const Vertex& v, double t) {
    if (t >= best) return;
    if (v == y) {
      best = t;
      return;
    }
    seen[box.index(v)] = 1;
    for (int a = 0; a < box.dim(); ++a)
      for (int s : {-1, 1}) {
        Vertex u = v;
        u[static_cast<std::size_t>(a)] += s;
        if (box.contains(u) && !seen[box.index(u)]) go(u, t + w.edge_weight(v, u));
      }
    seen[box.index(v)] = 0;
  };
  go(x, 0.0);
  return best;
}

// P(T(x, y) <= t) by direct enumeration of a two-valued law.
Rational enumerate_two_point(const LatticeBox& box, double lo, double hi, const Rational& p, const Vertex& x,
                             const Vertex& y, double t) {
  const auto edges = box.edges();
  Rational total = 0;
  WeightField w(box, EdgeDistribution::deterministic(lo));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    Rational prob = 1;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const bool high = (mask >> e) & 1;
      w.set_weight(edges[e].first, edges[e].second, high ? hi : lo);
      prob *= high ? Rational(1) - p : p;
    }
    if (dfs_time(w, x, y) <= t) total += prob;
  }
  return total;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("unit-box fixtures") {
  const LatticeBox box(2, 1);
  const auto a = exact_event_probability(EventSpec::passage_at_most({0, 0}, {1, 0}, 1), kTwoPoint, box);
  const auto b = exact_event_probability(EventSpec::passage_at_most({0, 0}, {1, 1}, 2), kTwoPoint, box);
  CHECK(a.p == Rational(1, 2));
  CHECK(b.p == Rational(7, 16));
  CHECK(a.configurations == 16);
  CHECK(b.denominator() == 16);
  CHECK(enumerate_two_point(box, 1, 2, Rational(1, 2), {0, 0}, {1, 0}, 1) == Rational(1, 2));
  CHECK(enumerate_two_point(box, 1, 2, Rational(1, 2), {0, 0}, {1, 1}, 2) == Rational(7, 16));
}

TEST_CASE("enumeration matches an independent enumerator") {
  const LatticeBox box(2, 2);
  const Rational p(1, 3);
  const auto dist = EdgeDistribution::two_point(1, 3, p);
  for (const auto& [y, t] : std::vector<std::pair<Vertex, double>>{{{2, 2}, 5}, {{1, 2}, 4}, {{2, 0}, 3}, {{2, 1}, 6}}) {
    const auto lib = exact_event_probability(EventSpec::passage_at_most({0, 0}, y, t), dist, box);
    CHECK(lib.p == enumerate_two_point(box, 1, 3, p, {0, 0}, y, t));
  }
}

TEST_CASE("sure event") {
  const LatticeBox box(2, 2);
  const double t = 2 * 2.0 * 2 * 2;
  CHECK(exact_event_probability(EventSpec::passage_at_most({0, 0}, {2, 2}, t), kTwoPoint, box).p == 1);
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(
      exact_event_probability(EventSpec::passage_at_most({0, 0}, {1, 1}, 2), kTwoPoint, LatticeBox(2, 3), 1000),
      BudgetExceeded);
  CHECK_THROWS_AS(exact_event_probability(EventSpec::passage_at_most({0, 0}, {1, 1}, 2),
                                          EdgeDistribution::uniform(0, 1), LatticeBox(2, 1)),
                  SchemaError);
  CHECK(configuration_count(kTwoPoint, LatticeBox(2, 2)) == std::uint64_t{1} << 12);
}

TEST_CASE("exact passage time law") {
  const LatticeBox box(2, 1);
  const auto law = exact_passage_time_law(kTwoPoint, box, {0, 0}, {1, 1});
  Rational total = 0;
  for (const auto& q : law.probabilities) total += q;
  CHECK(total == 1);
  CHECK(law.cdf(2.0) == Rational(7, 16));
  CHECK(law.values.front() == 2.0);
  CHECK(law.upper(2.0) == 1);
}

TEST_CASE("passage events are decreasing") {
  const LatticeBox box(2, 2);
  const auto ev = EventSpec::passage_at_most({0, 0}, {2, 1}, 4.0);
  CHECK(ev.decreasing());
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto w = sample_weights(kTwoPoint, box, s);
    const bool before = ev(w);
    for (auto [lower, axis] : box.edges()) {
      auto heavier = w;
      heavier.set_weight(lower, axis, w.weight(lower, axis) + 1.0);
      if (!before) CHECK(!ev(heavier));
    }
  }
}

TEST_CASE("crude lower bound") {
  auto crude = crude_lower_bound(kTwoPoint, {0, 0}, {1, 0}, 1);
  REQUIRE(crude.exact);
  CHECK(*crude.exact == Rational(1, 2));
  CHECK(crude_lower_bound(kTwoPoint, {0, 0}, {3, 2}, 2.0).value == 1.0);
  CHECK(crude_lower_bound(kTwoPoint, {1, 1}, {1, 1}, 1.5).value == 1.0);
  CHECK_THROWS_AS(crude_lower_bound(kTwoPoint, {0, 0}, {1, 0}, 0.5), SchemaError);
}

TEST_CASE("crude bound never exceeds the exact probability") {
  const auto dist = EdgeDistribution::finite({{1, Rational(1, 4)}, {2, Rational(1, 4)}, {4, Rational(1, 2)}});
  const LatticeBox box(2, 2);
  for (const Vertex& v : {Vertex{1, 0}, Vertex{1, 1}, Vertex{2, 1}, Vertex{2, 2}})
    for (double t : {1.0, 1.5, 2.0, 3.0}) {
      const int l1 = l1_distance(Vertex{0, 0}, v);
      const auto bound = crude_lower_bound(dist, {0, 0}, v, t);
      const auto exact =
          exact_event_probability(EventSpec::passage_at_most({0, 0}, v, t * l1), dist, box);
      REQUIRE(bound.exact);
      CHECK(*bound.exact <= exact.p);
    }
}

TEST_CASE("FKG on a thin strip") {
  const LatticeBox box(2, 2);
  const auto strip = thin_strip(2, 2);
  const auto r = fkg_supermultiplicativity_check(kTwoPoint, box, {1, 0}, {1, 0}, 1, 1, strip);
  CHECK(r.slack >= 0);
  CHECK(r.slack == r.joint - r.first * r.second);
  const auto huge = fkg_supermultiplicativity_check(kTwoPoint, box, {1, 0}, {1, 0}, 100, 100, strip);
  CHECK(huge.joint == 1);
  CHECK(huge.slack == 0);
  const auto det = fkg_supermultiplicativity_check(EdgeDistribution::deterministic(1), box, {1, 0}, {0, 1}, 1, 1);
  CHECK(det.first == 1);
  CHECK(det.second == 1);
  CHECK(det.slack == 0);
}

TEST_CASE("FKG grid") {
  const auto rep = fkg_grid_check(kTwoPoint, LatticeBox(2, 2), {1, 0}, {1, 1}, {1, 1.5, 2, 3}, {2, 2.5, 3, 4},
                                  thin_strip(2, 2));
  CHECK(rep.checked == 16);
  CHECK(rep.violations == 0);
  CHECK(rep.min_slack >= 0);
}

TEST_CASE("thin strip sequence is supermultiplicative") {
  const double zeta = 1.25;
  std::vector<Rational> p(6);
  for (int n = 1; n <= 5; ++n) p[n] = thin_strip_probability(kTwoPoint, 2, n, zeta);
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; m + n <= 5; ++n) CHECK(p[m + n] >= p[m] * p[n]);
}

TEST_CASE("Cramer rate") {
  CHECK(cramer_rate(EdgeDistribution::deterministic(2), 2.5) == 0.0);
  CHECK(cramer_rate(kTwoPoint, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(cramer_rate(kTwoPoint, 1.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(cramer_rate(kTwoPoint, 0.9), SchemaError);
  // Independent Legendre transform by a fine lambda grid.
  for (double zeta : {1.1, 1.25, 1.4}) {
    double best = 0;
    for (int k = 0; k <= 400000; ++k) {
      const double l = k * 1e-4;
      best = std::max(best, -l * zeta - std::log(0.5 * std::exp(-l) + 0.5 * std::exp(-2 * l)));
    }
    CHECK(cramer_rate(kTwoPoint, zeta) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("single path rate from the binomial law") {
  for (int n : {1, 4, 9})
    for (double zeta : {1.0, 1.3, 1.6}) {
      double p = 0;
      for (int k = 0; k <= n; ++k)
        if (n + k <= n * zeta + 1e-12) p += std::tgamma(n + 1) / (std::tgamma(k + 1) * std::tgamma(n - k + 1)) / std::pow(2.0, n);
      CHECK(single_path_rate(kTwoPoint, n, zeta) == doctest::Approx(-std::log(p) / n).epsilon(1e-12));
    }
}

TEST_CASE("Chernoff bound") {
  const double l = 0.3, eps = 2.0, n = 16, hops = 4;
  const double mgf = 0.5 * (std::exp(l) + std::exp(2 * l));
  CHECK(chernoff_upper_tail(kTwoPoint, l, eps, n, hops) ==
        doctest::Approx(std::exp(-l * eps * n) * std::pow(mgf, hops)).epsilon(1e-14));
  CHECK(chernoff_upper_tail(kTwoPoint, 1e-9, eps, n, hops) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(chernoff_upper_tail(EdgeDistribution::exponential(1.0), 2.0, eps, n, hops), SchemaError);
  CHECK_THROWS_AS(chernoff_upper_tail(kTwoPoint, 0.0, eps, n, hops), SchemaError);
  const std::vector<double> grid = {0.1, 0.5, 1.0, 2.0};
  const auto best = chernoff_optimize(kTwoPoint, eps, n, hops, grid);
  for (double g : grid) CHECK(best.bound <= chernoff_upper_tail(kTwoPoint, g, eps, n, hops));
}

TEST_CASE("log Laplace transform") {
  CHECK(log_laplace(kTwoPoint, 0.7) ==
        doctest::Approx(std::log(0.5 * std::exp(-0.7) + 0.5 * std::exp(-1.4))).epsilon(1e-14));
  CHECK(std::isfinite(log_laplace(kTwoPoint, 5000.0)));
}

TEST_CASE("Monte Carlo agrees with exact values") {
  const LatticeBox box(2, 2);
  int fixtures = 0;
  for (const Vertex& y : {Vertex{1, 0}, Vertex{1, 1}, Vertex{2, 1}, Vertex{2, 2}})
    for (double t : {2.0, 3.0, 4.0}) {
      const auto ev = EventSpec::passage_at_most({0, 0}, y, t);
      const double exact = exact_event_probability(ev, kTwoPoint, box).value();
      const auto mc = monte_carlo_frequency(ev, kTwoPoint, box, 3000, 100 + fixtures);
      const double se = std::sqrt(exact * (1 - exact) / mc.samples);
      CHECK(std::abs(mc.p - exact) <= 3 * se + 1e-15);
      ++fixtures;
    }
}

}  // TEST_SUITE
