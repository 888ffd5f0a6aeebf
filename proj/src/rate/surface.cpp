#include "fpp/errors.hpp"
#include "fpp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace fpp {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

std::string key_text(const Vertex& x, double zeta) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << "; " << zeta << ")";
  return os.str();
}

bool disjoint(const Interval& a, const Interval& b) { return a.hi < b.lo || b.hi < a.lo; }

// Smallest c with c r' >= r componentwise, or +inf when none.
double covering_scale(const Vertex& r, const Vertex& other) {
  double c = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) continue;
    if (other[i] == 0) return kInfinity;
    c = std::max(c, static_cast<double>(r[i]) / other[i]);
  }
  return c;
}

}  // namespace

std::pair<Vertex, int> primitive_ray(const Vertex& x) {
  Vertex r(x.size());
  int g = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[i] = std::abs(x[i]);
    g = std::gcd(g, r[i]);
  }
  if (g == 0) throw SchemaError("direction must be nonzero");
  for (int& c : r) c /= g;
  return {r, g};
}

const SurfaceRay* RateSurface::find(const Vertex& direction) const {
  const Vertex r = primitive_ray(direction).first;
  for (const auto& ray : rays_)
    if (ray.ray == r) return &ray;
  return nullptr;
}

bool RateSurface::has_direction(const Vertex& x) const { return find(x) != nullptr; }

SurfaceLookup RateSurface::lookup(const Vertex& x, double zeta) const {
  const auto [r, c] = primitive_ray(x);
  const SurfaceRay* ray = find(r);
  if (!ray || ray->cells.empty()) throw SchemaError("direction has no tabulated ray");
  const double s = zeta / c;
  const auto& cells = ray->cells;
  SurfaceLookup out;
  if (s < cells.front().zeta) {
    out.below_grid = true;
    out.value = c * cells.front().value;
    return out;
  }
  if (s >= cells.back().zeta) {
    out.above_grid = s > cells.back().zeta;
    out.value = c * cells.back().value;
    return out;
  }
  std::size_t i = 0;
  while (cells[i + 1].zeta < s) ++i;
  if (cells[i + 1].zeta == s) {
    out.value = c * cells[i + 1].value;
    return out;
  }
  const double t = (s - cells[i].zeta) / (cells[i + 1].zeta - cells[i].zeta);
  out.value = c * (cells[i].value + t * (cells[i + 1].value - cells[i].value));
  return out;
}

std::string RateSurface::invariant_violation() const {
  for (const auto& ray : rays_) {
    const auto& c = ray.cells;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!(c[i].value >= 0.0)) return "negative value on ray " + key_text(ray.ray, c[i].zeta);
      if (i > 0 && c[i].value > c[i - 1].value) return "increase in zeta on ray " + key_text(ray.ray, c[i].zeta);
      if (i > 0 && i + 1 < c.size()) {
        const double left = (c[i].value - c[i - 1].value) / (c[i].zeta - c[i - 1].zeta);
        const double right = (c[i + 1].value - c[i].value) / (c[i + 1].zeta - c[i].zeta);
        const double scale = std::max({1.0, std::abs(left), std::abs(right)});
        if (right < left - 1e-12 * scale) return "not convex on ray " + key_text(ray.ray, c[i].zeta);
      }
    }
  }
  return {};
}

RateSurface extend_surface(const std::vector<RatePoint>& raw) {
  RateSurface out;
  // Duplicate keys (same x, zeta and n) must have overlapping intervals.
  std::map<std::tuple<Vertex, double, int>, const RatePoint*> seen;
  std::vector<std::string> conflicts;
  for (const auto& p : raw) {
    auto [it, fresh] = seen.emplace(std::make_tuple(p.x, p.zeta, p.n), &p);
    if (!fresh && disjoint(it->second->ci, p.ci)) conflicts.push_back(key_text(p.x, p.zeta));
  }
  if (!conflicts.empty()) {
    std::string msg = "inconsistent duplicate rate points:";
    for (const auto& c : conflicts) msg += " " + c;
    throw SchemaError(msg);
  }

  // Reflection symmetrisation and ray homogenisation.
  std::map<Vertex, std::map<double, SurfaceCell>> table;
  for (const auto& p : raw) {
    if (p.censored || !std::isfinite(p.estimate)) {
      out.censored_.push_back(p);
      continue;
    }
    const auto [r, c] = primitive_ray(p.x);
    SurfaceCell cell;
    cell.zeta = p.zeta / c;
    cell.value = p.estimate / c;
    cell.ci = {p.ci.lo / c, p.ci.hi / c};
    std::ostringstream os;
    os << to_string(p.method) << " n=" << p.n << " seed=" << p.seed << " x=" << key_text(p.x, p.zeta);
    cell.provenance = os.str();
    auto [it, fresh] = table[r].emplace(cell.zeta, cell);
    if (!fresh) {
      SurfaceCell& cur = it->second;
      const std::string step =
          p.x != primitive_ray(p.x).first ? "symmetrize/homogenize" : "merge duplicate";
      if (cell.value < cur.value) {
        out.changes_.push_back({r, cell.zeta, cur.value, cell.value, step});
        cur.value = cell.value;
        cur.provenance = cell.provenance;
      }
      cur.ci = {std::min(cur.ci.lo, cell.ci.lo), std::min(cur.ci.hi, cell.ci.hi)};
    }
  }
  for (auto& [r, cells] : table) {
    SurfaceRay ray{r, {}};
    for (auto& [z, cell] : cells) ray.cells.push_back(cell);
    out.rays_.push_back(std::move(ray));
  }

  // Componentwise-monotone envelope: J(x, z) <= c J(r', z') whenever c r' >= x and c z' <= z.
  std::vector<std::vector<double>> env;
  for (const auto& ray : out.rays_) {
    std::vector<double> v;
    for (const auto& cell : ray.cells) {
      double best = cell.value;
      for (const auto& other : out.rays_) {
        const double c = covering_scale(ray.ray, other.ray);
        if (!std::isfinite(c)) continue;
        for (const auto& oc : other.cells)
          if (c * oc.zeta <= cell.zeta) best = std::min(best, c * oc.value);
      }
      v.push_back(best);
    }
    env.push_back(std::move(v));
  }
  for (std::size_t k = 0; k < out.rays_.size(); ++k) {
    auto& ray = out.rays_[k];
    for (std::size_t i = 0; i < ray.cells.size(); ++i) {
      SurfaceCell& cell = ray.cells[i];
      if (env[k][i] < cell.value) {
        out.changes_.push_back({ray.ray, cell.zeta, cell.value, env[k][i], "monotone envelope"});
        cell.value = env[k][i];
        cell.ci.lo = std::min(cell.ci.lo, cell.value);
        cell.ci.hi = std::min(cell.ci.hi, cell.value);
      }
    }
  }

  // Lower convex envelope along zeta.
  for (auto& ray : out.rays_) {
    auto& c = ray.cells;
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < c.size(); ++i) {
      while (hull.size() >= 2) {
        const auto& a = c[hull[hull.size() - 2]];
        const auto& b = c[hull.back()];
        // Drop b when it lies on or above the chord from a to c[i].
        const double cross = (b.zeta - a.zeta) * (c[i].value - a.value) - (b.value - a.value) * (c[i].zeta - a.zeta);
        if (cross <= 0.0) hull.pop_back();
        else break;
      }
      hull.push_back(i);
    }
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
      const auto& a = c[hull[h]];
      const auto& b = c[hull[h + 1]];
      for (std::size_t i = hull[h] + 1; i < hull[h + 1]; ++i) {
        const double t = (c[i].zeta - a.zeta) / (b.zeta - a.zeta);
        const double v = a.value + t * (b.value - a.value);
        if (v < c[i].value) {
          out.changes_.push_back({ray.ray, c[i].zeta, c[i].value, v, "lower convex envelope"});
          c[i].value = v;
          c[i].ci.lo = std::min(c[i].ci.lo, v);
          c[i].ci.hi = std::min(c[i].ci.hi, v);
        }
      }
    }
  }
  return out;
}

}  // namespace fpp
