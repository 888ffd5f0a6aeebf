#include "fpp/errors.hpp"
#include "fpp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpp {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

double rate_of(double p, int n) {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return kInfinity;
  return -std::log(p) / n;
}

struct Setup {
  LatticeBox box;
  Vertex origin;
  Vertex target;
};

Setup setup(const EdgeDistribution& dist, const Vertex& x, double zeta, int n, std::size_t budget) {
  if (x.empty()) throw SchemaError("direction must be nonempty");
  if (n < 1) throw SchemaError("scale n must be positive");
  int top = 0;
  int norm = 0;
  for (int c : x) {
    top = std::max(top, std::abs(c));
    norm += std::abs(c);
  }
  if (top == 0) throw SchemaError("direction must be nonzero");
  if (zeta < dist.support_infimum() * norm) throw SchemaError("zeta lies below a |x|_1");
  const int side = n * top;
  double vertices = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) vertices *= side + 1;
  if (vertices > static_cast<double>(budget)) throw BudgetExceeded("box exceeds the vertex budget");
  Setup s{LatticeBox(static_cast<int>(x.size()), side), Vertex(x.size(), 0), Vertex(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) s.target[i] = n * std::abs(x[i]);
  return s;
}

}  // namespace

std::string to_string(RateMethod m) {
  switch (m) {
    case RateMethod::monte_carlo: return "monte-carlo";
    case RateMethod::exact_oracle: return "exact-oracle";
    case RateMethod::cramer_bound: return "cramer-bound";
    case RateMethod::crude_bound: return "crude-bound";
  }
  return "unknown";
}

RateMethod rate_method_from_string(const std::string& s) {
  for (RateMethod m : {RateMethod::monte_carlo, RateMethod::exact_oracle, RateMethod::cramer_bound,
                       RateMethod::crude_bound})
    if (to_string(m) == s) return m;
  throw SchemaError("unknown rate method: " + s);
}

RatePoint estimate_rate_point(const EdgeDistribution& dist, const Vertex& x, double zeta, int n, std::size_t samples,
                              std::uint64_t seed, int threads, std::size_t box_budget) {
  if (samples == 0) throw SchemaError("samples must be positive");
  const Setup s = setup(dist, x, zeta, n, box_budget);
  const EventSpec event = EventSpec::passage_at_most(s.origin, s.target, n * zeta);
  const MonteCarloFrequency f = monte_carlo_frequency(event, dist, s.box, samples, seed, threads);
  RatePoint r;
  r.x = x;
  r.zeta = zeta;
  r.n = n;
  r.method = RateMethod::monte_carlo;
  r.hits = f.hits;
  r.samples = f.samples;
  r.p = f.p;
  r.seed = seed;
  r.ci = {rate_of(f.ci.hi, n), rate_of(f.ci.lo, n)};
  if (f.hits == 0) {
    r.censored = true;
    r.estimate = r.ci.lo;
  } else {
    r.estimate = rate_of(f.p, n);
  }
  return r;
}

RatePoint exact_rate_point(const EdgeDistribution& dist, const Vertex& x, double zeta, int n, std::uint64_t cap,
                           int threads) {
  const Setup s = setup(dist, x, zeta, n, kDefaultBoxBudget);
  const EventSpec event = EventSpec::passage_at_most(s.origin, s.target, n * zeta);
  const ExactProbability p = exact_event_probability(event, dist, s.box, cap, threads);
  RatePoint r;
  r.x = x;
  r.zeta = zeta;
  r.n = n;
  r.method = RateMethod::exact_oracle;
  r.p = p.value();
  r.samples = p.configurations;
  r.estimate = rate_of(r.p, n);
  r.ci = {r.estimate, r.estimate};
  return r;
}

FeketeEnvelope fekete_envelope(const std::vector<RatePoint>& ladder) {
  if (ladder.empty()) throw SchemaError("empty n-ladder");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i].x != ladder[0].x || ladder[i].zeta != ladder[0].zeta)
      throw SchemaError("ladder points must share x and zeta");
    if (ladder[i].n <= ladder[i - 1].n) throw SchemaError("ladder must have increasing n");
  }
  FeketeEnvelope env;
  RatePoint best = ladder.front();
  double upper = kInfinity, ci_lo = kInfinity, ci_hi = kInfinity;
  double censored_floor = kInfinity;
  for (const auto& p : ladder) {
    ci_lo = std::min(ci_lo, p.ci.lo);
    if (p.censored) {
      censored_floor = std::min(censored_floor, p.estimate);
    } else {
      ci_hi = std::min(ci_hi, p.ci.hi);
      if (p.estimate < upper) {
        upper = p.estimate;
        best = p;
      }
    }
    env.running.push_back(std::isfinite(upper) ? upper : censored_floor);
  }
  if (!std::isfinite(upper)) {
    best.censored = true;
    best.estimate = censored_floor;
  }
  best.ci = {ci_lo, ci_hi};
  env.best = best;
  return env;
}

}  // namespace fpp
