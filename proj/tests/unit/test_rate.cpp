#include "doctest.h"

#include "fpp/errors.hpp"
#include "fpp/oracle.hpp"
#include "fpp/rate.hpp"

#include <cmath>

using namespace fpp;

namespace {

const auto kTwoPoint = EdgeDistribution::two_point(1, 2, Rational(1, 2));

RatePoint synthetic(Vertex x, double zeta, int n, double value, double half_width = 0.0) {
  RatePoint p;
  p.x = std::move(x);
  p.zeta = zeta;
  p.n = n;
  p.estimate = value;
  p.ci = {value - half_width, value + half_width};
  p.method = RateMethod::exact_oracle;
  return p;
}

}  // namespace

TEST_SUITE("rate") {

TEST_CASE("sure event has rate zero") {
  const auto r = estimate_rate_point(EdgeDistribution::deterministic(1), {1, 0}, 1.5, 4, 200, 1);
  CHECK(r.p == 1.0);
  CHECK(r.estimate == 0.0);
  CHECK(!r.censored);
}

TEST_CASE("exact unit-box rate") {
  const auto r = exact_rate_point(kTwoPoint, {1, 0}, 1.0, 1);
  CHECK(r.estimate == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(r.ci.lo == r.ci.hi);
  CHECK(r.method == RateMethod::exact_oracle);
}

TEST_CASE("domain and budget") {
  CHECK_THROWS_AS(estimate_rate_point(kTwoPoint, {1, 0}, 0.9, 2, 10, 1), SchemaError);
  CHECK_NOTHROW(estimate_rate_point(kTwoPoint, {1, 0}, 1.0, 2, 10, 1));
  CHECK_THROWS_AS(estimate_rate_point(kTwoPoint, {1, 1}, 1.9, 2, 10, 1), SchemaError);
  CHECK_THROWS_AS(estimate_rate_point(kTwoPoint, {1, 0}, 1.5, 100, 10, 1, 0, 1000), BudgetExceeded);
}

TEST_CASE("rate is non-increasing in zeta within the interval") {
  double prev_hi = INFINITY;
  for (double zeta : {1.1, 1.2, 1.35, 1.5, 1.7}) {
    const auto r = estimate_rate_point(kTwoPoint, {1, 0}, zeta, 4, 1500, 5);
    CHECK(r.ci.lo <= prev_hi);
    prev_hi = r.ci.hi;
  }
}

TEST_CASE("zero hits are censored") {
  const auto r = estimate_rate_point(kTwoPoint, {1, 0}, 1.0, 12, 50, 3);
  CHECK(r.hits == 0);
  CHECK(r.censored);
  CHECK(r.estimate == r.ci.lo);
  CHECK(r.estimate == doctest::Approx(-std::log(wilson_interval(0, 50).hi) / 12).epsilon(1e-12));
  CHECK(std::isinf(r.ci.hi));
}

TEST_CASE("Fekete envelope") {
  std::vector<RatePoint> ladder = {synthetic({1, 0}, 1.2, 1, 0.9), synthetic({1, 0}, 1.2, 2, 0.7),
                                   synthetic({1, 0}, 1.2, 3, 0.72)};
  const auto env = fekete_envelope(ladder);
  CHECK(env.best.estimate == 0.7);
  CHECK(env.running == std::vector<double>{0.9, 0.7, 0.7});
  CHECK_THROWS_AS(fekete_envelope({}), SchemaError);
  std::vector<RatePoint> det;
  for (int n : {1, 2, 4}) det.push_back(estimate_rate_point(EdgeDistribution::deterministic(1), {1, 0}, 1.0, n, 20, 1));
  CHECK(fekete_envelope(det).best.estimate == 0.0);
}

TEST_CASE("exact ladder respects supermultiplicativity") {
  // Box of side 2 holds the box of side 1 and a translate of it: p_2 >= p_1^2.
  const auto r1 = exact_rate_point(kTwoPoint, {1, 0}, 1.25, 1);
  const auto r2 = exact_rate_point(kTwoPoint, {1, 0}, 1.25, 2);
  CHECK(2 * r2.estimate <= 2 * r1.estimate + 1e-12);
  CHECK(fekete_envelope({r1, r2}).best.estimate == std::min(r1.estimate, r2.estimate));
}

TEST_CASE("extension: homogeneity") {
  const auto s = extend_surface({synthetic({1, 0}, 1.2, 4, 0.3)});
  CHECK(s.lookup({2, 0}, 2.4).value == 0.6);
  CHECK(s.lookup({-2, 0}, 2.4).value == 0.6);
  CHECK_THROWS_AS(s.lookup({0, -3}, 3.6), SchemaError);
  const auto p = primitive_ray({-4, 6});
  CHECK(p.first == Vertex{2, 3});
  CHECK(p.second == 2);
}

TEST_CASE("extension: reflection symmetry") {
  const auto s = extend_surface({synthetic({1, 0}, 1.2, 4, 0.3), synthetic({-1, 0}, 1.2, 4, 0.25)});
  CHECK(s.lookup({1, 0}, 1.2).value == 0.25);
  CHECK(s.lookup({-1, 0}, 1.2).value == 0.25);
  CHECK(!s.changes().empty());
}

TEST_CASE("extension never increases values and yields the invariants") {
  std::vector<RatePoint> raw;
  // Not monotone, not convex, with a scaled duplicate.
  const double vals[] = {0.8, 0.5, 0.55, 0.1, 0.12, 0.0};
  const double zs[] = {1.05, 1.15, 1.25, 1.35, 1.45, 1.6};
  for (int i = 0; i < 6; ++i) raw.push_back(synthetic({1, 0}, zs[i], 4, vals[i]));
  raw.push_back(synthetic({1, 1}, 2.2, 4, 0.9));
  raw.push_back(synthetic({2, 0}, 2.3, 4, 0.9));
  const auto s = extend_surface(raw);
  CHECK(s.invariant_violation().empty());
  for (const auto& p : raw) {
    const auto look = s.lookup(p.x, p.zeta);
    CHECK(look.value <= p.estimate + 1e-15);
  }
  for (const auto& ch : s.changes()) CHECK(ch.after <= ch.before);
}

TEST_CASE("extension conflicts and censoring") {
  CHECK_THROWS_AS(extend_surface({synthetic({1, 0}, 1.2, 4, 0.3, 0.01), synthetic({1, 0}, 1.2, 4, 0.5, 0.01)}),
                  SchemaError);
  CHECK_NOTHROW(extend_surface({synthetic({1, 0}, 1.2, 4, 0.3, 0.01), synthetic({1, 0}, 1.2, 8, 0.5, 0.01)}));
  auto c = synthetic({1, 0}, 1.0, 12, 0.2);
  c.censored = true;
  const auto s = extend_surface({c, synthetic({1, 0}, 1.3, 4, 0.1)});
  CHECK(s.censored().size() == 1);
  CHECK(s.find({1, 0})->cells.size() == 1);
  CHECK(s.lookup({1, 0}, 1.0).below_grid);
}

TEST_CASE("time constant") {
  const auto det = estimate_time_constant(EdgeDistribution::deterministic(1.5), {1, 1}, {2, 4}, 5, 1);
  CHECK(det.mu == 3.0);
  const auto tc = estimate_time_constant(kTwoPoint, {1, 0}, {4, 8, 16, 32}, 200, 3);
  CHECK(tc.bracket.lo == 1.0);
  CHECK(tc.bracket.hi == 1.5);
  CHECK(tc.bracket.contains(tc.mu));
  for (std::size_t i = 1; i < tc.per_n.size(); ++i) {
    const double slack = 2 * (tc.per_n[i].ci.width() + tc.per_n[i - 1].ci.width()) / 2;
    CHECK(tc.per_n[i].mean <= tc.per_n[i - 1].mean + slack);
    CHECK(tc.per_n[i].mean >= 1.0);
  }
}

TEST_CASE("zero set") {
  SUBCASE("deterministic law") {
    std::vector<RatePoint> raw;
    for (double z : {1.0, 1.2, 1.5}) raw.push_back(estimate_rate_point(EdgeDistribution::deterministic(1), {1, 0}, z, 4, 50, 1));
    const auto s = extend_surface(raw);
    const auto tc = estimate_time_constant(EdgeDistribution::deterministic(1), {1, 0}, {4}, 10, 1);
    CHECK(zero_set_check(s, tc, 1.0, 0.1).pass);
  }
  SUBCASE("two-point law, positive below and near zero above") {
    const int n = 8;
    std::vector<RatePoint> raw;
    for (double z : {1.0, 1.1, 1.6, 1.8})
      raw.push_back(estimate_rate_point(kTwoPoint, {1, 0}, z, n, 2000, static_cast<std::uint64_t>(z * 100)));
    const auto s = extend_surface(raw);
    const auto tc = estimate_time_constant(kTwoPoint, {1, 0}, {8, 16, 32}, 200, 2);
    const auto rep = zero_set_check(s, tc, 1.0, 0.15, std::log(2.0) / n);
    CHECK(rep.pass);
    CHECK(rep.zero_checked >= 1);
    CHECK(rep.positive_checked >= 1);
  }
  SUBCASE("missing ray") {
    const auto s = extend_surface({synthetic({0, 1}, 1.2, 4, 0.3)});
    const auto tc = estimate_time_constant(kTwoPoint, {1, 0}, {4}, 10, 1);
    CHECK_THROWS_AS(zero_set_check(s, tc, 1.0, 0.1), SchemaError);
  }
}

TEST_CASE("crude bound dominates the surface") {
  std::vector<RatePoint> raw;
  for (double t : {1.0, 1.25, 1.5}) raw.push_back(exact_rate_point(kTwoPoint, {1, 0}, t, 2));
  const auto s = extend_surface(raw);
  for (double t : {1.0, 1.25, 1.5}) {
    const double bound = -std::log(kTwoPoint.mass_between(1.0, t));
    CHECK(s.lookup({1, 0}, t).value <= bound + 1e-15);
  }
}

}  // TEST_SUITE
