#include "fpp/errors.hpp"
#include "fpp/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fpp {

namespace {

struct Interval1 {
  double a, b;
  double lo, hi;
};

LengthResult dyadic_length(const Pseudometric& D, const LipschitzPath& gamma, double rel_tol, int max_depth) {
  LengthResult r;
  double previous = -1.0;
  for (int level = 0; level <= max_depth; ++level) {
    const std::size_t parts = std::size_t{1} << level;
    double total = 0.0;
    for (std::size_t i = 0; i < gamma.pieces(); ++i) {
      const double s0 = gamma.position(i);
      const double s1 = gamma.position(i + 1);
      Point prev = gamma.breakpoints()[i];
      for (std::size_t k = 1; k <= parts; ++k) {
        const Point next = k == parts ? gamma.breakpoints()[i + 1]
                                      : gamma.at(s0 + (s1 - s0) * static_cast<double>(k) / static_cast<double>(parts));
        total += D(prev, next);
        ++r.evaluations;
        prev = next;
      }
    }
    r.value = r.lower = total;
    r.refinements = level;
    if (level > 0 && std::abs(total - previous) <= rel_tol * std::max(total, 1e-300)) return r;
    previous = total;
  }
  throw ConvergenceError("d_length: dyadic refinements did not settle", r.lower, r.upper);
}

}  // namespace

LengthResult d_length(const Pseudometric& D, const LipschitzPath& gamma, double rel_tol, int max_depth) {
  std::vector<Interval1> cells;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i < gamma.pieces(); ++i) {
    const Point& a = gamma.breakpoints()[i];
    const Point& b = gamma.breakpoints()[i + 1];
    const double hi = D.segment_length_bound(a, b);
    if (!std::isfinite(hi)) return dyadic_length(D, gamma, rel_tol, max_depth);
    cells.push_back({gamma.position(i), gamma.position(i + 1), D(a, b), hi});
    ++evaluations;
  }
  const double L = gamma.length();
  for (int depth = 0;; ++depth) {
    double lo = 0.0, hi = 0.0;
    for (const auto& c : cells) {
      lo += c.lo;
      hi += c.hi;
    }
    const double scale = std::max(hi, 1e-300);
    if (hi - lo <= rel_tol * scale) {
      LengthResult r;
      r.value = r.lower = lo;
      r.upper = std::max(lo, hi);
      r.refinements = depth;
      r.evaluations = evaluations;
      return r;
    }
    if (depth == max_depth) throw ConvergenceError("d_length: bracket did not close within max depth", lo, hi);
    std::vector<Interval1> next;
    next.reserve(cells.size() * 2);
    for (const auto& c : cells) {
      const double allowance = 0.5 * rel_tol * scale * (c.b - c.a) / L;
      if (c.hi - c.lo <= allowance) {
        next.push_back(c);
        continue;
      }
      const double m = 0.5 * (c.a + c.b);
      const Point pa = gamma.at(c.a), pm = gamma.at(m), pb = gamma.at(c.b);
      next.push_back({c.a, m, D(pa, pm), D.segment_length_bound(pa, pm)});
      next.push_back({m, c.b, D(pm, pb), D.segment_length_bound(pm, pb)});
      evaluations += 2;
    }
    cells = std::move(next);
  }
}

namespace {

double richardson(const std::vector<double>& v) {
  if (v.size() < 2) return v.back();
  return 2.0 * v[v.size() - 1] - v[v.size() - 2];
}

}  // namespace

DerivativeResult metric_derivative(const Pseudometric& D, const LipschitzPath& gamma, double t, double h0, int levels,
                                   double tol) {
  const double L = gamma.length();
  if (!(t > 0.0 && t < L)) throw SchemaError("metric derivative needs an interior parameter");
  if (levels < 2) throw SchemaError("metric derivative needs at least two ladder levels");
  const double hmax = std::min({h0, t, L - t});
  std::vector<double> sym, fwd, bwd;
  const Point z = gamma.at(t);
  for (int k = 0; k < levels; ++k) {
    const double h = std::ldexp(hmax, -k);
    const Point a = gamma.at(t - h), b = gamma.at(t + h);
    sym.push_back(D(a, b) / (2.0 * h));
    fwd.push_back(D(z, b) / h);
    bwd.push_back(D(a, z) / h);
  }
  DerivativeResult r;
  r.value = richardson(sym);
  r.forward = richardson(fwd);
  r.backward = richardson(bwd);
  r.spread = std::abs(sym[sym.size() - 1] - sym[sym.size() - 2]);
  const double scale = std::max(1.0, std::abs(r.value));
  r.differentiable = std::abs(r.forward - r.backward) <= tol * scale && r.spread <= tol * scale;
  return r;
}

GradientResult gradient_by_paths(const NormPlusHighways& D, const Point& z, const Point& u) {
  if (u.size() != z.size()) throw SchemaError("direction dimension differs from the point");
  if (std::all_of(u.begin(), u.end(), [](double c) { return c == 0.0; }))
    throw SchemaError("gradient direction must be nonzero");
  const WeightedL1& g = D.norm();
  GradientResult r;
  r.value = g(u);
  const auto locs = D.locate(z);
  if (locs.empty()) return r;
  if (locs.size() > 1 || locs[0].at_breakpoint) {
    r.kind = GradientResult::Kind::boundary;
    r.warning = "point is a highway endpoint or junction; returning the norm value";
    return r;
  }
  r.kind = GradientResult::Kind::on_highway;
  const Highway& h = D.highways()[locs[0].highway];
  const Point v = h.path().velocity(locs[0].piece);
  double uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  const double scale = std::sqrt(uu * vv);
  bool parallel = true;
  for (std::size_t i = 0; i < u.size() && parallel; ++i)
    for (std::size_t j = i + 1; j < u.size() && parallel; ++j)
      parallel = std::abs(u[i] * v[j] - u[j] * v[i]) <= 1e-12 * scale;
  if (parallel) r.value = h.lambda(locs[0].piece) * g(u);
  return r;
}

GradientResult gradient_by_paths(const GridPseudometric& D, const Point& z, const Point& u) {
  if (u.size() != z.size()) throw SchemaError("direction dimension differs from the point");
  double top = 0.0;
  for (double c : u) top = std::max(top, std::abs(c));
  if (top == 0.0) throw SchemaError("gradient direction must be nonzero");
  const double t = 1.0 / (D.resolution() * top);
  Point w(z.size());
  bool inside = true;
  for (std::size_t i = 0; i < z.size(); ++i) {
    w[i] = z[i] + t * u[i];
    inside = inside && w[i] >= 0.0 && w[i] <= 1.0;
  }
  if (!inside)
    for (std::size_t i = 0; i < z.size(); ++i) w[i] = z[i] - t * u[i];
  GradientResult r;
  r.kind = GradientResult::Kind::probe_upper_bound;
  r.value = D(z, w) / t;
  r.warning = "straight-probe value at the grid scale; an upper bound only";
  return r;
}

}  // namespace fpp
