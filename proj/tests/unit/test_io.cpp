#include "doctest.h"

#include "fpp/errors.hpp"
#include "fpp/json_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace fpp;

TEST_SUITE("io") {

TEST_CASE("distribution round trip") {
  const std::vector<EdgeDistribution> laws = {
      EdgeDistribution::deterministic(1.5),
      EdgeDistribution::two_point(1, 2, Rational(7, 16)),
      EdgeDistribution::uniform(0.5, 2.0),
      EdgeDistribution::uniform(0.5, 2.0).truncated(1.5),
      EdgeDistribution::exponential(2.0, 0.25),
      EdgeDistribution::finite({{1.0, Rational(1, 3)}, {1.5, Rational(1, 6)}, {3.0, Rational(1, 2)}}),
  };
  for (const auto& law : laws) {
    const json j = to_json(law);
    INFO(j.dump());
    const auto back = distribution_from_json(j);
    CHECK(back == law);
    CHECK(to_json(back) == j);
    CHECK(distribution_from_json(json::parse(j.dump())) == law);
  }
  CHECK(to_json(laws[1])["p"] == "7/16");
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(distribution_from_json(json{{"kind", "deterministic"}, {"c", 1}, {"colour", "red"}}), SchemaError);
  CHECK_THROWS_AS(distribution_from_json(json{{"kind", "lognormal"}}), SchemaError);
  CHECK_THROWS_AS(distribution_from_json(json{{"kind", "two-point"}, {"a", 1}, {"b", 2}}), SchemaError);
  CHECK_THROWS_AS(metric_from_json(json{{"norm", {1, 1}}, {"highways", json::array()}, {"extra", 0}}), SchemaError);
  CHECK_THROWS_AS(require_field(json::object(), "x", "here"), SchemaError);
  try {
    reject_unknown_fields(json{{"a", 1}, {"zz", 2}}, {"a"}, "thing");
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
}

TEST_CASE("metric and network round trip") {
  const NormPlusHighways D(WeightedL1({1.0, 1.5}),
                           {Highway(LipschitzPath({{0.1, 0.2}, {0.5, 0.2}, {0.5, 0.7}}), std::vector<double>{0.5, 0.25})});
  const json j = to_json(D);
  const auto back = metric_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back({0.1, 0.2}, {0.5, 0.7}) == D({0.1, 0.2}, {0.5, 0.7}));

  HighwayNetwork net;
  net.highways = D.highways();
  net.diagnostics = {0.5, 1e-4};
  net.converged = true;
  net.eval_m = 6;
  net.P = 4;
  net.candidates_used = 3;
  const json nj = to_json(net);
  const auto nb = network_from_json(json::parse(nj.dump()));
  CHECK(to_json(nb) == nj);
  CHECK(nb.eval_m == 6);
  CHECK(nb.diagnostics == net.diagnostics);
}

TEST_CASE("rate point and surface round trip") {
  RatePoint p;
  p.x = {1, 2};
  p.zeta = 3.25;
  p.n = 8;
  p.estimate = 0.125;
  p.ci = {0.1, 0.15};
  p.method = RateMethod::monte_carlo;
  p.hits = 40;
  p.samples = 1000;
  p.p = 0.04;
  p.seed = 99;
  const json j = to_json(p);
  CHECK(to_json(rate_point_from_json(json::parse(j.dump()))) == j);

  RatePoint c = p;
  c.zeta = 3.0;
  c.censored = true;
  c.hits = 0;
  c.ci = {0.3, std::numeric_limits<double>::infinity()};
  const json cj = to_json(c);
  const auto cb = rate_point_from_json(json::parse(cj.dump()));
  CHECK(std::isinf(cb.ci.hi));
  CHECK(cb.censored);

  const auto s = extend_surface({p, c});
  const json sj = to_json(s);
  CHECK(to_json(surface_from_json(json::parse(sj.dump()))) == sj);
}

TEST_CASE("csv and number formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

  std::ostringstream os;
  RatePoint p;
  p.x = {1, 0};
  p.zeta = 1.5;
  p.n = 2;
  write_rate_points_csv(os, {p});
  CHECK(os.str().find('\n') != std::string::npos);
}

TEST_CASE("FNV-1a") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

}  // TEST_SUITE
