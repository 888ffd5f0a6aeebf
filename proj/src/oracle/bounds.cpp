#include "fpp/errors.hpp"
#include "fpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace fpp {

BoundValue crude_lower_bound(const EdgeDistribution& dist, const Vertex& u, const Vertex& v, double t) {
  const double a = dist.support_infimum();
  if (t < a) throw SchemaError("crude_lower_bound: t below the support infimum");
  const int len = l1_distance(u, v);
  BoundValue out;
  if (auto mass = dist.exact_mass_between(a, t)) {
    Rational p = 1;
    for (int i = 0; i < len; ++i) p *= *mass;
    out.exact = p;
    out.value = to_double(p);
  } else {
    out.value = std::pow(dist.mass_between(a, t), len);
  }
  return out;
}

namespace {

std::vector<Observable> fkg_observables(const LatticeBox& box, const Region& region, const Vertex& x1,
                                        const Vertex& x2) {
  const auto d = static_cast<std::size_t>(box.dim());
  if (x1.size() != d || x2.size() != d) throw SchemaError("fkg check: dimension mismatch");
  const Vertex o(d, 0);
  Vertex s(d);
  for (std::size_t i = 0; i < d; ++i) s[i] = x1[i] + x2[i];
  for (const Vertex* p : std::initializer_list<const Vertex*>{&o, &x1, &x2, &s}) {
    if (!region.contains(*p)) throw SchemaError("fkg check: point or translate outside the region");
  }
  auto pt = [&region](Vertex a, Vertex b) -> Observable {
    return [&region, a = std::move(a), b = std::move(b)](const WeightField& w) {
      return restricted_passage_time(region, a, b, w, false, QueueKind::binary_heap).time;
    };
  };
  return {pt(o, s), pt(o, x1), pt(x1, s), pt(o, x2)};
}

}  // namespace

FkgReport fkg_supermultiplicativity_check(const EdgeDistribution& dist, const LatticeBox& box, const Vertex& x1,
                                          const Vertex& x2, double t1, double t2, std::optional<Region> region,
                                          std::uint64_t cap) {
  const Region r = region ? *region : Region::full(box);
  const auto laws = exact_observable_laws(fkg_observables(box, r, x1, x2), dist, box, cap, 0, region ? &r : nullptr);
  FkgReport rep;
  rep.x1 = x1;
  rep.x2 = x2;
  rep.t1 = t1;
  rep.t2 = t2;
  rep.joint = laws[0].cdf(t1 + t2);
  rep.first = laws[1].cdf(t1);
  rep.second = laws[2].cdf(t2);
  rep.second_at_origin = laws[3].cdf(t2);
  rep.slack = rep.joint - rep.first * rep.second;
  return rep;
}

FkgGridReport fkg_grid_check(const EdgeDistribution& dist, const LatticeBox& box, const Vertex& x1, const Vertex& x2,
                             const std::vector<double>& t1s, const std::vector<double>& t2s,
                             std::optional<Region> region, std::uint64_t cap) {
  const Region r = region ? *region : Region::full(box);
  const auto laws = exact_observable_laws(fkg_observables(box, r, x1, x2), dist, box, cap, 0, region ? &r : nullptr);
  FkgGridReport rep;
  bool first = true;
  for (double t1 : t1s) {
    const Rational pa = laws[1].cdf(t1);
    for (double t2 : t2s) {
      const Rational slack = laws[0].cdf(t1 + t2) - pa * laws[2].cdf(t2);
      ++rep.checked;
      if (slack < 0) ++rep.violations;
      if (first || slack < rep.min_slack) {
        rep.min_slack = slack;
        rep.argmin_t1 = t1;
        rep.argmin_t2 = t2;
        first = false;
      }
    }
  }
  return rep;
}

Region thin_strip(int d, int n) {
  const LatticeBox box(d, n);
  Vertex lo(static_cast<std::size_t>(d), 0);
  Vertex hi(static_cast<std::size_t>(d), std::min(1, n));
  hi[0] = n;
  return Region::cylinder(box, lo, hi);
}

Rational thin_strip_probability(const EdgeDistribution& dist, int d, int n, double zeta, std::uint64_t cap) {
  const LatticeBox box(d, n);
  const Region strip = thin_strip(d, n);
  Vertex target(static_cast<std::size_t>(d), 0);
  target[0] = n;
  const ExactLaw law = exact_passage_time_law(dist, box, Vertex(static_cast<std::size_t>(d), 0), target, strip, cap);
  return law.cdf(n * zeta);
}

double log_laplace(const EdgeDistribution& dist, double lambda) {
  if (lambda < 0.0) throw SchemaError("log_laplace: lambda must be nonnegative");
  if (lambda == 0.0) return 0.0;
  switch (dist.kind()) {
    case DistributionKind::deterministic: return -lambda * dist.param_a();
    case DistributionKind::two_point:
    case DistributionKind::finite: {
      const auto atoms = dist.atoms();
      double top = -kInf;
      for (const auto& at : atoms) top = std::max(top, std::log(to_double(at.probability)) - lambda * at.value);
      double sum = 0.0;
      for (const auto& at : atoms) sum += std::exp(std::log(to_double(at.probability)) - lambda * at.value - top);
      return top + std::log(sum);
    }
    case DistributionKind::uniform: {
      const double lo = dist.param_a();
      const double hi = dist.param_b();
      const double c = dist.cap() ? std::min(*dist.cap(), hi) : hi;
      const double width = hi - lo;
      const double body = -std::expm1(-lambda * (c - lo)) / (lambda * width);
      const double tail = (hi - c) / width * std::exp(-lambda * (c - lo));
      return -lambda * lo + std::log(body + tail);
    }
    case DistributionKind::exponential: {
      const double rate = dist.param_a();
      const double shift = dist.param_b();
      const double ratio = rate / (rate + lambda);
      if (!dist.cap()) return -lambda * shift + std::log(ratio);
      const double q = std::exp(-(rate + lambda) * (*dist.cap() - shift));
      return -lambda * shift + std::log(ratio * (1.0 - q) + q);
    }
  }
  return 0.0;
}

double cramer_rate(const EdgeDistribution& dist, double zeta) {
  const double a = dist.support_infimum();
  if (!(zeta >= a)) throw SchemaError("cramer_rate: zeta below the support infimum");
  if (zeta >= dist.mean()) return 0.0;
  if (zeta == a) {
    const double atom = dist.atom_mass(a);
    return atom > 0.0 ? -std::log(atom) : kInf;
  }
  auto f = [&](double lambda) { return -lambda * zeta - log_laplace(dist, lambda); };
  double hi = 1.0;
  while (f(hi) >= f(hi / 2.0) && hi < 1e18) hi *= 2.0;
  double lo = 0.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 400 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max({0.0, f1, f2, f(0.5 * (lo + hi))});
}

double single_path_rate(const EdgeDistribution& dist, int n, double zeta) {
  if (!dist.is_finite_support()) throw SchemaError("single_path_rate: finite-support law required");
  if (n < 1) throw SchemaError("single_path_rate: n must be positive");
  const auto atoms = dist.atoms();
  const std::size_t k = atoms.size();
  const double limit = n * zeta;
  const double slack = 1e-12 * std::max(1.0, std::fabs(limit));
  std::vector<int> counts(k, 0);
  long double total = 0.0L;
  // Enumerate compositions of n into k parts.
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == k) {
      counts[j] = left;
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += counts[i] * atoms[i].value;
      if (sum > limit + slack) return;
      long double logp = std::lgamma(static_cast<long double>(n) + 1.0L);
      for (std::size_t i = 0; i < k; ++i) {
        logp -= std::lgamma(static_cast<long double>(counts[i]) + 1.0L);
        logp += counts[i] * std::log(static_cast<long double>(to_double(atoms[i].probability)));
      }
      total += std::exp(logp);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[j] = c;
      rec(j + 1, left - c);
    }
  };
  rec(0, n);
  if (total <= 0.0L) return kInf;
  return static_cast<double>(-std::log(total) / n);
}

double chernoff_upper_tail(const EdgeDistribution& dist, double lambda, double eps, double n, double hops) {
  if (!(lambda > 0.0)) throw SchemaError("chernoff_upper_tail: lambda must be positive");
  const double m = dist.mgf(lambda);
  if (!std::isfinite(m)) throw SchemaError("chernoff_upper_tail: moment generating function diverges at lambda");
  return std::exp(-lambda * eps * n + hops * std::log(m));
}

ChernoffOptimum chernoff_optimize(const EdgeDistribution& dist, double eps, double n, double hops,
                                  const std::vector<double>& lambdas) {
  ChernoffOptimum best;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0) || !std::isfinite(dist.mgf(lambda))) continue;
    const double b = chernoff_upper_tail(dist, lambda, eps, n, hops);
    if (b < best.bound) best = {lambda, b};
  }
  return best;
}

}  // namespace fpp
