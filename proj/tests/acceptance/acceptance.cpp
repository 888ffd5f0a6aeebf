// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any failure.

#include "fpp/errors.hpp"
#include "fpp/functional.hpp"
#include "fpp/geometry.hpp"
#include "fpp/model.hpp"
#include "fpp/oracle.hpp"
#include "fpp/passage_time.hpp"
#include "fpp/rate.hpp"
#include "fpp/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace fpp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int l1(const Vertex& a, const Vertex& b) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Deterministic law: the rescaled metric is c |floor(nx) - floor(ny)|_1 / n.

Outcome ac1() {
  const auto t0 = Clock::now();
  std::size_t pairs = 0, bad = 0;
  for (double c : {1.0, 1.5}) {
    const auto law = EdgeDistribution::deterministic(c);
    for (int d : {2, 3})
      for (int n : {1, 2, 3, 4, 8, 16, 32, 64}) {
        const LatticeBox box(d, n);
        const auto w = sample_weights(law, box, 11);
        std::set<std::size_t> src;
        for (std::size_t i = 0; i < (std::size_t{1} << d); ++i) {
          Vertex v(static_cast<std::size_t>(d));
          for (int k = 0; k < d; ++k) v[static_cast<std::size_t>(k)] = (i >> k & 1) ? n : 0;
          src.insert(box.index(v));
        }
        std::mt19937_64 rng(static_cast<std::uint64_t>(d * 1000 + n));
        std::uniform_int_distribution<std::size_t> pick(0, box.vertex_count() - 1);
        for (int k = 0; k < 6; ++k) src.insert(pick(rng));
        const RescaledMetric T(w, std::vector<std::size_t>(src.begin(), src.end()));
        for (std::size_t s : src)
          for (std::size_t t = 0; t < box.vertex_count(); ++t) {
            const double expect = c * l1(box.vertex(s), box.vertex(t)) / n;
            ++pairs;
            if (T.grid(s, t) != expect) ++bad;
          }
      }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 10.0, std::to_string(pairs) + " grid pairs, " + std::to_string(bad) + " mismatches, " +
                                       fmt("%.2f s (limit 10 s)", secs)};
}

// ---------------------------------------------------------------------------
// Exact enumeration fixtures and Monte-Carlo agreement.

struct EventFixture {
  EdgeDistribution law;
  int d, n;
  Vertex x, y;
  double t;
};

Outcome ac2() {
  const auto half = EdgeDistribution::two_point(1, 2, Rational(1, 2));
  const LatticeBox unit(2, 1);
  const auto a = exact_event_probability(EventSpec::passage_at_most({0, 0}, {1, 0}, 1), half, unit);
  const auto b = exact_event_probability(EventSpec::passage_at_most({0, 0}, {1, 1}, 2), half, unit);
  Outcome out;
  out.pass = a.p == Rational(1, 2) && b.p == Rational(7, 16);
  std::ostringstream os;
  os << "P=" << to_string(a.p) << ", " << to_string(b.p) << "; ";

  std::vector<EventFixture> fx;
  const std::vector<EdgeDistribution> laws = {
      half, EdgeDistribution::two_point(1, 3, Rational(1, 3)), EdgeDistribution::two_point(0.5, 2, Rational(3, 4)),
      EdgeDistribution::finite({{1, Rational(1, 4)}, {2, Rational(1, 2)}, {4, Rational(1, 4)}})};
  for (const auto& law : laws) {
    fx.push_back({law, 2, 1, {0, 0}, {1, 0}, 1.5});
    fx.push_back({law, 2, 1, {0, 0}, {1, 1}, 3.5});
    fx.push_back({law, 2, 2, {0, 0}, {2, 0}, 3.0});
    fx.push_back({law, 2, 2, {0, 0}, {2, 2}, 6.0});
    fx.push_back({law, 2, 2, {0, 1}, {2, 1}, 3.5});
    fx.push_back({law, 3, 1, {0, 0, 0}, {1, 1, 1}, 4.0});
  }
  const std::size_t samples = 4000;
  std::size_t within = 0, nontrivial = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const auto& f = fx[i];
    const LatticeBox box(f.d, f.n);
    const auto ev = EventSpec::passage_at_most(f.x, f.y, f.t);
    const double p = exact_event_probability(ev, f.law, box).value();
    const auto mc = monte_carlo_frequency(ev, f.law, box, samples, 1000 + i);
    const double se = binomial_se(p, samples);
    if (p > 0.0 && p < 1.0) ++nontrivial;
    const double z = se > 0 ? std::abs(mc.p - p) / se : (mc.p == p ? 0.0 : INFINITY);
    worst = std::max(worst, z);
    if (z <= 3.0) ++within;
  }
  out.pass = out.pass && within == fx.size() && fx.size() >= 20;
  os << within << "/" << fx.size() << " MC fixtures within 3 SE (" << nontrivial << " with 0<p<1), worst "
     << fmt("%.2f SE", worst);
  out.detail = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Product inequality on thin strips, exhaustive threshold grids.

Outcome ac3() {
  struct Fx {
    EdgeDistribution law;
    int n;
    Vertex x1, x2;
  };
  const std::vector<Fx> fx = {
      {EdgeDistribution::two_point(1, 2, Rational(1, 2)), 4, {2, 0}, {2, 0}},
      {EdgeDistribution::two_point(1, 3, Rational(1, 3)), 4, {1, 0}, {3, 0}},
      {EdgeDistribution::two_point(1, 2, Rational(7, 16)), 5, {2, 0}, {3, 0}},
      {EdgeDistribution::two_point(1, 2, Rational(1, 2)), 4, {2, 1}, {2, 0}},
      {EdgeDistribution::finite({{1, Rational(1, 3)}, {1.5, Rational(1, 3)}, {2.5, Rational(1, 3)}}), 3, {1, 0}, {2, 0}},
  };
  std::size_t checked = 0, violations = 0;
  Rational min_slack = 1;
  for (const auto& f : fx) {
    // Every half-integer threshold up to the largest possible passage time.
    const double top = f.law.support_supremum() * (3 * f.n + 1);
    std::vector<double> ts;
    for (double t = 0.0; t <= top; t += 0.5) ts.push_back(t);
    const auto r = fkg_grid_check(f.law, LatticeBox(2, f.n), f.x1, f.x2, ts, ts, thin_strip(2, f.n));
    checked += r.checked;
    violations += r.violations;
    min_slack = std::min(min_slack, r.min_slack);
  }
  return {violations == 0 && min_slack >= 0 && checked > 0,
          std::to_string(checked) + " (t1, t2) pairs on " + std::to_string(fx.size()) + " strips, " +
              std::to_string(violations) + " violations, min slack " + to_string(min_slack)};
}

// ---------------------------------------------------------------------------
// Single-path lower bound against exact probabilities.

Outcome ac4() {
  const std::vector<EdgeDistribution> laws = {
      EdgeDistribution::two_point(1, 2, Rational(1, 2)), EdgeDistribution::two_point(1, 3, Rational(7, 16)),
      EdgeDistribution::finite({{1, Rational(1, 4)}, {2, Rational(1, 2)}, {4, Rational(1, 4)}})};
  std::size_t checked = 0, violations = 0;
  for (const auto& law : laws)
    for (auto [d, n] : {std::pair{2, 1}, {2, 2}, {3, 1}}) {
      if (law.atoms().size() > 2 && n > 1) continue;
      const LatticeBox box(d, n);
      std::vector<std::pair<Vertex, Vertex>> pairs;
      for (std::size_t u = 0; u < box.vertex_count(); ++u)
        for (std::size_t v = u + 1; v < box.vertex_count(); ++v) pairs.emplace_back(box.vertex(u), box.vertex(v));
      std::vector<Observable> obs;
      for (const auto& [u, v] : pairs) obs.push_back([u, v](const WeightField& w) { return passage_time(w, u, v); });
      const auto laws_of = exact_observable_laws(obs, law, box);
      const double a = law.support_infimum(), b = law.support_supremum();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const int k = l1(pairs[i].first, pairs[i].second);
        for (double t = a; t <= b + 0.5; t += 0.25) {
          const auto bound = crude_lower_bound(law, pairs[i].first, pairs[i].second, t);
          const Rational exact = laws_of[i].cdf(t * k);
          ++checked;
          if (!bound.exact || *bound.exact > exact) ++violations;
        }
      }
    }
  return {violations == 0, std::to_string(checked) + " (fixture, pair, t) comparisons in exact rationals, " +
                               std::to_string(violations) + " violations"};
}

// ---------------------------------------------------------------------------
// Truncated discrete versus continuous extension.

Outcome ac5() {
  const std::vector<EdgeDistribution> laws = {EdgeDistribution::two_point(1, 3, Rational(1, 2)),
                                              EdgeDistribution::exponential(1.0), EdgeDistribution::uniform(0.0, 4.0)};
  std::size_t runs = 0, violations = 0;
  double worst_ratio = 0.0;
  std::uint64_t seed = 500;
  int cell = 0;
  for (int d : {2, 3})
    for (int n : {4, 8, 16})
      for (double b : {1.0, 2.0}) {
        // 4 cells of 9 and 8 cells of 8 realizations.
        const int reps = cell++ < 4 ? 9 : 8;
        for (int r = 0; r < reps; ++r, ++seed) {
          const auto& law = laws[seed % laws.size()];
          const auto w = sample_weights(law, LatticeBox(d, n), seed).truncated(b);
          GapOptions opt;
          opt.seed = seed;
          const auto g = uniform_gap(w, b, opt);
          const double bound = 2.0 * b * d / n;
          ++runs;
          worst_ratio = std::max(worst_ratio, g.gap / bound);
          if (g.gap > bound || g.bound != bound) ++violations;
        }
      }
  return {violations == 0 && runs >= 100, std::to_string(runs) + " realizations over 12 (d, n, b) cells, " +
                                               std::to_string(violations) + " violations, worst gap/bound " +
                                               fmt("%.3f", worst_ratio)};
}

// ---------------------------------------------------------------------------
// Highway chains and networks.

Highway seg(Point a, Point b, double lambda) { return Highway(LipschitzPath({std::move(a), std::move(b)}), lambda); }

std::vector<std::pair<std::string, NormPlusHighways>> network_fixtures() {
  return {
      {"plain", NormPlusHighways(WeightedL1::l1(2), {})},
      {"diagonal", NormPlusHighways(WeightedL1::l1(2), {seg({0, 0}, {1, 1}, 0.5)})},
      {"two-highways", NormPlusHighways(WeightedL1::l1(2), {seg({0.1, 0.25}, {0.6, 0.25}, 0.5),
                                                            seg({0.75, 0.4}, {0.75, 0.95}, 0.3)})},
      {"weighted-norm", NormPlusHighways(WeightedL1({1.0, 2.0}), {seg({0.2, 0.1}, {0.2, 0.9}, 0.4)})},
      {"polyline", NormPlusHighways(WeightedL1::l1(2), {Highway(LipschitzPath({{0.1, 0.1}, {0.5, 0.1}, {0.5, 0.6}}),
                                                                std::vector<double>{0.6, 0.3})})},
      {"anti-diagonal", NormPlusHighways(WeightedL1::l1(2), {seg({0.9, 0.1}, {0.1, 0.9}, 0.7)})},
  };
}

Outcome ac6() {
  std::size_t pair_checks = 0, mono_bad = 0, lower_bad = 0, diag_bad = 0;
  std::ostringstream os;
  double worst_final = 0.0;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const auto& [name, D] : network_fixtures()) {
    // Chain built from the metric's own highways.
    HwChain chain(D.norm(), {});
    for (const auto& h : D.highways()) chain = hw_insert(chain, h, D);
    auto pts = grid_points(2, 5);
    for (int k = 0; k < 24; ++k) pts.push_back({U(rng), U(rng)});
    const auto tables = chain.level_tables(pts);
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = D.row(pts[i], pts);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < tables.size(); ++k) {
          ++pair_checks;
          // D is evaluated along a different summation order; allow rounding only.
          if (tables[k][i * m + j] < row[j] * (1 - 1e-12) - 1e-15) ++lower_bad;
          if (k > 0 && tables[k][i * m + j] > tables[k - 1][i * m + j]) ++mono_bad;
        }
    }
    NetworkOptions opt;
    opt.seeds = D.highways();
    const auto net = build_highway_network(D, opt);
    for (std::size_t k = 1; k < net.diagnostics.size(); ++k)
      if (net.diagnostics[k] > net.diagnostics[k - 1]) ++diag_bad;
    const double final_gap = net.diagnostics.empty() ? INFINITY : net.diagnostics.back();
    worst_final = std::max(worst_final, final_gap);
    if (!(final_gap <= 1e-3)) ++diag_bad;
    os << name << ":K=" << net.highways.size() << " ";
  }
  os << "| " << pair_checks << " chain checks, " << mono_bad << " increases, " << lower_bad << " below D; "
     << diag_bad << " diagnostic failures, worst final sup gap " << fmt("%.2e", worst_final);
  return {mono_bad == 0 && lower_bad == 0 && diag_bad == 0, os.str()};
}

// ---------------------------------------------------------------------------
// Three expressions of the functional.

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}); }

Outcome ac7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::size_t configs = 0, rejected = 0, families = 0, fail_sum = 0, fail_sup = 0, fail_attain = 0;
  double worst = 0.0;
  while (configs < 24) {
    const WeightedL1 g({0.5 + 1.5 * U(rng), 0.5 + 1.5 * U(rng)});
    const int k = 1 + static_cast<int>(U(rng) * 3);
    std::vector<Highway> hs;
    for (int i = 0; i < k; ++i) {
      Point a{0.05 + 0.9 * U(rng), 0.05 + 0.9 * U(rng)}, b{0.05 + 0.9 * U(rng), 0.05 + 0.9 * U(rng)};
      if (U(rng) < 0.4) {
        const auto axis = static_cast<std::size_t>(U(rng) < 0.5);
        b[axis] = a[axis];
      }
      hs.push_back(seg(a, b, 0.2 + 0.7 * U(rng)));
    }
    std::vector<LipschitzPath> paths;
    for (const auto& h : hs) paths.push_back(h.path());
    if (!disjointness_violation(paths).empty()) {
      ++rejected;
      continue;
    }
    std::optional<NormPlusHighways> D;
    try {
      D.emplace(g, hs);
    } catch (const SchemaError&) {
      ++rejected;
      continue;
    }
    bool geodesic = true;
    for (const auto& h : hs) geodesic = geodesic && geodesy_violation(h, g, *D, 8).empty();
    if (!geodesic) {
      ++rejected;
      continue;
    }
    const AnalyticRate J(g, 0.5 + U(rng));
    FunctionalReport r;
    try {
      r = functional_report(*D, J);
    } catch (const SchemaError&) {
      ++rejected;
      continue;
    }
    ++configs;
    const double rel = std::abs(r.geodesic_sum - r.intrinsic) / std::max(1e-300, std::abs(r.geodesic_sum));
    worst = std::max(worst, rel);
    if (!close_rel(r.geodesic_sum, r.intrinsic, 1e-9)) ++fail_sum;
    if (!close_rel(r.sup_lower_bound, r.geodesic_sum, 1e-9)) ++fail_attain;
    // Random admissible families: sub-segments of highways and off-road segments.
    for (int f = 0; f < 6; ++f) {
      std::vector<LipschitzPath> fam;
      for (const auto& h : hs)
        if (U(rng) < 0.7) {
          double s0 = U(rng), s1 = U(rng);
          if (s0 > s1) std::swap(s0, s1);
          if (s1 - s0 > 1e-3) fam.push_back(h.path().sub(s0 * h.path().length(), s1 * h.path().length()));
        }
      fam.push_back(LipschitzPath({{U(rng), U(rng)}, {U(rng), U(rng)}}));
      if (!disjointness_violation(fam).empty()) continue;
      ++families;
      const double v = functional_sup_lower_bound(*D, J, fam);
      if (v > r.geodesic_sum * (1 + 1e-9)) ++fail_sup;
    }
  }
  const NormPlusHighways diag(WeightedL1::l1(2), {seg({0, 0}, {1, 1}, 0.5)});
  const auto dr = functional_report(diag, AnalyticRate(WeightedL1::l1(2)));
  const bool diag_ok = dr.geodesic_sum == 1.0;
  std::ostringstream os;
  os << configs << " random configurations (" << rejected << " non-geodesic or overlapping draws skipped), worst |sum - "
     << "intrinsic| rel " << fmt("%.1e", worst) << "; " << families << " families, " << fail_sup
     << " above the sum; network attains in " << configs - fail_attain << "/" << configs << "; diagonal = "
     << fmt("%.17g", dr.geodesic_sum);
  return {configs >= 20 && fail_sum == 0 && fail_sup == 0 && fail_attain == 0 && diag_ok, os.str()};
}

// ---------------------------------------------------------------------------
// Slowing a highway strictly lowers the functional.

NormPlusHighways scaled(const NormPlusHighways& D, double factor, std::size_t which) {
  std::vector<Highway> hs;
  for (std::size_t i = 0; i < D.highways().size(); ++i) {
    const auto& h = D.highways()[i];
    std::vector<double> l = h.lambdas();
    if (which == i || which == D.highways().size())
      for (double& x : l) x *= factor;
    hs.emplace_back(h.path(), l);
  }
  return NormPlusHighways(D.norm(), hs);
}

Outcome ac8() {
  std::size_t probes = 0, strict = 0;
  double min_margin = INFINITY;
  for (const auto& [name, D] : network_fixtures()) {
    if (D.highways().empty()) continue;
    const AnalyticRate J(D.norm());
    for (double factor : {0.9, 0.6})
      for (std::size_t which = 0; which <= D.highways().size(); ++which) {
        const auto faster = scaled(D, factor, which);
        const auto p = strict_monotonicity_probe(faster, D, J);
        ++probes;
        min_margin = std::min(min_margin, p.value_first - p.value_second);
        if (p.strict && p.value_first - p.value_second > 1e-9) ++strict;
      }
    // Removing every highway.
    const NormPlusHighways plain(D.norm(), {});
    const auto p = strict_monotonicity_probe(D, plain, J);
    ++probes;
    min_margin = std::min(min_margin, p.value_first - p.value_second);
    if (p.strict && p.value_first - p.value_second > 1e-9) ++strict;
  }
  return {strict == probes, std::to_string(strict) + "/" + std::to_string(probes) + " probes strict, min margin " +
                                fmt("%.3e", min_margin) + " (required > 1e-9)"};
}

// ---------------------------------------------------------------------------
// Rate surface laws.

Outcome ac9() {
  std::ostringstream os;
  bool pass = true;
  struct Fx {
    EdgeDistribution law;
    std::uint64_t seed;
  };
  const std::vector<Fx> fx = {{EdgeDistribution::two_point(1, 2, Rational(1, 2)), 91},
                              {EdgeDistribution::two_point(1, 3, Rational(2, 3)), 92}};
  for (const auto& f : fx) {
    const double a = f.law.support_infimum();
    const double b = f.law.support_supremum();
    const int n = 8;
    std::vector<RatePoint> raw;
    std::uint64_t seed = f.seed;
    const std::vector<Vertex> rays = {{1, 0}, {0, 1}, {1, 1}, {-1, 0}, {2, 1}};
    for (const auto& x : rays) {
      const double norm = l1(x, Vertex(x.size(), 0));
      for (double s : {1.0, 1.1, 1.25, 1.4, 1.6, 1.8}) {
        const double zeta = a * norm + (s - 1.0) * (b - a) * norm;
        raw.push_back(estimate_rate_point(f.law, x, zeta, n, 1500, ++seed));
      }
    }
    for (int m : {1, 2})
      for (double s : {1.0, 1.25, 1.5}) raw.push_back(exact_rate_point(f.law, {1, 0}, a + (s - 1.0) * (b - a), m));
    const auto surface = extend_surface(raw);

    // Table laws, checked cell by cell.
    std::size_t law_bad = 0;
    for (const auto& ray : surface.rays()) {
      for (const auto& c : ray.cells)
        if (!(c.value >= 0.0)) ++law_bad;
      for (std::size_t i = 1; i < ray.cells.size(); ++i)
        if (ray.cells[i].value > ray.cells[i - 1].value) ++law_bad;
      for (std::size_t i = 1; i + 1 < ray.cells.size(); ++i) {
        const auto &l = ray.cells[i - 1], &c = ray.cells[i], &r = ray.cells[i + 1];
        const double chord = l.value + (r.value - l.value) * (c.zeta - l.zeta) / (r.zeta - l.zeta);
        if (c.value > chord * (1 + 1e-12) + 1e-15) ++law_bad;
      }
      for (const auto& c : ray.cells) {
        Vertex neg = ray.ray, dbl = ray.ray;
        for (int& v : neg) v = -v;
        for (int& v : dbl) v *= 2;
        if (surface.lookup(neg, c.zeta).value != c.value) ++law_bad;
        if (surface.lookup(dbl, 2 * c.zeta).value != 2 * c.value) ++law_bad;
      }
    }
    if (!surface.invariant_violation().empty()) ++law_bad;

    // Zero set against the time constant.
    const auto tc = estimate_time_constant(f.law, {1, 0}, {8, 16, 32}, 200, f.seed);
    const auto zs = zero_set_check(surface, tc, a, 0.15, std::log(2.0) / n);

    // Finite-n single-path rate dominates the box rate on the e1 ray.
    std::size_t cramer_checked = 0, cramer_bad = 0;
    for (const auto& p : raw) {
      if (p.x != Vertex{1, 0}) continue;
      const double bound = single_path_rate(f.law, p.n, p.zeta);
      ++cramer_checked;
      if (p.ci.lo > bound * (1 + 1e-12)) ++cramer_bad;
    }
    pass = pass && law_bad == 0 && zs.pass && cramer_bad == 0;
    os << f.law.param_b() << "-law: " << law_bad << " table violations, zero set " << (zs.pass ? "ok" : "FAIL") << " ("
       << zs.zero_checked << " zero, " << zs.positive_checked << " positive cells, mu " << fmt("%.3f", tc.mu)
       << "), Cramer " << cramer_checked - cramer_bad << "/" << cramer_checked << "; ";
  }
  return {pass, os.str()};
}

// ---------------------------------------------------------------------------
// Disjoint paths, validated independently of the library's own check.

std::string check_paths(const Vertex& x, const Vertex& y, int n, const std::vector<DiscretePath>& ps) {
  const int d = static_cast<int>(x.size());
  if (static_cast<int>(ps.size()) != d) return "wrong path count";
  const int k = l1(x, y);
  std::set<Vertex> seen;
  for (const auto& p : ps) {
    if (p.empty() || p.front() != x || p.back() != y) return "wrong endpoints";
    const int len = static_cast<int>(p.size()) - 1;
    if (len != k && len != k + 2) return "bad length";
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (int c : p[i])
        if (c < 0 || c > n) return "leaves the box";
      if (i > 0 && l1(p[i], p[i - 1]) != 1) return "not a unit step";
      if (i > 0 && i + 1 < p.size() && !seen.insert(p[i]).second) return "interior vertex shared or repeated";
    }
  }
  return "";
}

Outcome ac10() {
  const auto t0 = Clock::now();
  std::size_t pairs = 0, failures = 0;
  std::string first;
  for (int d : {2, 3}) {
    const LatticeBox box(d, 4);
    for (std::size_t i = 0; i < box.vertex_count(); ++i)
      for (std::size_t j = 0; j < box.vertex_count(); ++j) {
        if (i == j) continue;
        const Vertex x = box.vertex(i), y = box.vertex(j);
        ++pairs;
        std::string why;
        try {
          const auto ps = disjoint_paths(x, y, box);
          why = check_paths(x, y, 4, ps);
          if (why.empty()) why = validate_disjoint_paths(x, y, box, ps);
        } catch (const std::exception& e) {
          why = e.what();
        }
        if (!why.empty() && failures++ == 0) first = why;
      }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 60.0, std::to_string(pairs) + " ordered pairs x != y, " + std::to_string(failures) +
                                           " failures" + (first.empty() ? "" : " (" + first + ")") + ", " +
                                           fmt("%.2f s (limit 60 s)", secs)};
}

// ---------------------------------------------------------------------------
// Upper-tail exponential bound on path sums.

Outcome ac11() {
  struct Fx {
    std::string name;
    EdgeDistribution law;
    std::vector<double> lambdas;
  };
  const std::vector<Fx> fx = {
      {"exp(1)", EdgeDistribution::exponential(1.0), {0.2, 0.5, 0.8}},
      {"exp(2)+0.5", EdgeDistribution::exponential(2.0, 0.5), {0.5, 1.0, 1.5}},
      {"uniform(0,2)", EdgeDistribution::uniform(0.0, 2.0), {0.5, 1.0, 2.0}},
      {"two-point(1,2)", EdgeDistribution::two_point(1, 2, Rational(1, 2)), {0.5, 1.0, 2.0}},
  };
  const std::size_t samples = 10000;
  std::size_t cases = 0, nontrivial = 0, bad = 0;
  double worst = 0.0;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const auto& f : fx) {
    const double mean = f.law.mean();
    for (int n : {4, 8, 16}) {
      // Sums of n independent edge weights.
      std::vector<double> sums(samples);
      for (auto& s : sums) {
        s = 0.0;
        for (int i = 0; i < n; ++i) s += f.law.quantile(U(rng));
      }
      for (double factor : {1.25, 1.5, 2.0}) {
        const double eps = factor * mean;
        std::size_t hits = 0;
        for (double s : sums) hits += s >= eps * n;
        const double freq = static_cast<double>(hits) / samples;
        for (double lambda : f.lambdas) {
          const double bound = chernoff_upper_tail(f.law, lambda, eps, n, n);
          ++cases;
          if (bound < 1.0) ++nontrivial;
          if (freq > bound) ++bad;
          if (bound > 0) worst = std::max(worst, freq / bound);
        }
      }
    }
  }
  return {bad == 0, std::to_string(cases) + " (law, lambda, eps, n) cases, " + std::to_string(nontrivial) +
                        " with bound < 1, " + std::to_string(bad) + " violations, worst freq/bound " +
                        fmt("%.3f", worst) + ", 10^4 samples each"};
}

// ---------------------------------------------------------------------------
// Hub frequency; a qualitative finite-n reflection of the asymptotic claim.

Outcome ac12() {
  const std::vector<EdgeDistribution> laws = {EdgeDistribution::two_point(1, 2, Rational(1, 2)),
                                              EdgeDistribution::two_point(0.5, 20, Rational(3, 4))};
  const std::size_t samples = 200;
  bool pass = true;
  std::ostringstream os;
  for (const auto& law : laws) {
    const double kappa = law.mean() + 3.0;
    os << "kappa=" << kappa << ":";
    for (int n : {4, 6, 8}) {
      const LatticeBox box(2, n);
      const Vertex x{n / 2, n / 2};
      std::size_t hits = 0;
      for (std::size_t s = 0; s < samples; ++s) {
        const auto w = sample_weights(law, box, derive_seed(1200 + static_cast<std::uint64_t>(n), s));
        hits += hub_check(x, w, kappa).verdict;
      }
      const auto ci = wilson_interval(hits, samples);
      pass = pass && ci.lo > 0.0;
      os << " n=" << n << " " << fmt("%.3f", static_cast<double>(hits) / samples) << " [" << fmt("%.3f", ci.lo)
         << "," << fmt("%.3f", ci.hi) << "]";
    }
    os << "; ";
  }
  os << "(qualitative: finite n only)";
  return {pass, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 deterministic-law exactness", ac1},  {"AC2 oracle equalities", ac2},
      {"AC3 product inequality", ac3},           {"AC4 crude bound", ac4},
      {"AC5 truncation gap bound", ac5},         {"AC6 highway machinery", ac6},
      {"AC7 three-formula consistency", ac7},    {"AC8 strict monotonicity", ac8},
      {"AC9 rate-surface laws", ac9},            {"AC10 disjoint paths", ac10},
      {"AC11 upper-tail bound", ac11},           {"AC12 hub frequency", ac12},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
