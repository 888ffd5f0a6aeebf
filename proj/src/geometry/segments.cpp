#include "fpp/errors.hpp"
#include "fpp/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace fpp {

namespace {

using RPoint = std::vector<Rational>;

RPoint exact(const Point& p) {
  RPoint r;
  r.reserve(p.size());
  for (double c : p) r.push_back(exact_rational(c));
  return r;
}

RPoint minus(const RPoint& a, const RPoint& b) {
  RPoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Rational dot(const RPoint& a, const RPoint& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool parallel(const RPoint& u, const RPoint& v) {
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      if (u[i] * v[j] != u[j] * v[i]) return false;
  return true;
}

bool boxes_disjoint(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  for (std::size_t i = 0; i < a0.size(); ++i) {
    const double alo = std::min(a0[i], a1[i]), ahi = std::max(a0[i], a1[i]);
    const double blo = std::min(b0[i], b1[i]), bhi = std::max(b0[i], b1[i]);
    if (ahi < blo || bhi < alo) return true;
  }
  return false;
}

}  // namespace

SegmentContact segment_contact(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  SegmentContact out;
  if (boxes_disjoint(a0, a1, b0, b1)) return out;
  const RPoint A0 = exact(a0), A1 = exact(a1), B0 = exact(b0), B1 = exact(b1);
  const RPoint u = minus(A1, A0), v = minus(B1, B0), w = minus(B0, A0);
  const std::size_t d = u.size();
  const Rational uu = dot(u, u), vv = dot(v, v);
  if (uu == 0 || vv == 0) throw SchemaError("degenerate segment");

  if (parallel(u, v)) {
    if (!parallel(u, w)) return out;
    // Collinear: project the second segment onto the first.
    Rational sb0 = dot(w, u) / uu;
    Rational sb1 = dot(minus(B1, A0), u) / uu;
    if (sb0 > sb1) std::swap(sb0, sb1);
    const Rational lo = sb0 > 0 ? sb0 : Rational(0);
    const Rational hi = sb1 < 1 ? sb1 : Rational(1);
    if (lo > hi) return out;
    auto t_of = [&](const Rational& s) {
      RPoint p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = A0[i] + s * u[i] - B0[i];
      return dot(p, v) / vv;
    };
    out.kind = lo == hi ? SegmentContact::Kind::point : SegmentContact::Kind::overlap;
    out.s0 = to_double(lo);
    out.s1 = to_double(hi);
    out.t0 = to_double(t_of(lo));
    out.t1 = to_double(t_of(hi));
    return out;
  }

  // Solve s u - t v = w on a coordinate pair with nonzero minor.
  std::size_t ci = 0, cj = 1;
  Rational det = 0;
  for (std::size_t i = 0; i < d && det == 0; ++i)
    for (std::size_t j = i + 1; j < d && det == 0; ++j) {
      det = u[i] * (-v[j]) - u[j] * (-v[i]);
      ci = i;
      cj = j;
    }
  const Rational s = (w[ci] * (-v[cj]) - w[cj] * (-v[ci])) / det;
  const Rational t = (u[ci] * w[cj] - u[cj] * w[ci]) / det;
  if (s < 0 || s > 1 || t < 0 || t > 1) return out;
  for (std::size_t k = 0; k < d; ++k)
    if (A0[k] + s * u[k] != B0[k] + t * v[k]) return out;
  out.kind = SegmentContact::Kind::point;
  out.s0 = out.s1 = to_double(s);
  out.t0 = out.t1 = to_double(t);
  return out;
}

std::string disjointness_violation(const std::vector<LipschitzPath>& paths) {
  for (std::size_t k = 0; k < paths.size(); ++k)
    if (!paths[k].is_injective()) return "path " + std::to_string(k) + " is not injective";
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const auto& pa = paths[a].breakpoints();
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      const auto& pb = paths[b].breakpoints();
      for (std::size_t i = 0; i + 1 < pa.size(); ++i)
        for (std::size_t j = 0; j + 1 < pb.size(); ++j)
          if (segment_contact(pa[i], pa[i + 1], pb[j], pb[j + 1]).kind != SegmentContact::Kind::none) {
            std::ostringstream os;
            os << "paths " << a << " and " << b << " meet (pieces " << i << ", " << j << ")";
            return os.str();
          }
    }
  }
  return {};
}

namespace {

Point lerp(const Point& a, const Point& b, double t) {
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return p;
}

void push_point(std::vector<Point>& pts, std::vector<double>& lam, const Point& p, double lambda) {
  if (!pts.empty() && pts.back() == p) return;
  if (!pts.empty()) lam.push_back(lambda);
  pts.push_back(p);
}

}  // namespace

Highway remove_loops(const Highway& h) {
  std::vector<Point> pts = h.path().breakpoints();
  std::vector<double> lam = h.lambdas();
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t n = pts.size() - 1;
    for (std::size_t i = 0; i < n && !changed; ++i) {
      for (std::size_t j = n; j-- > i + 1 && !changed;) {
        const SegmentContact c = segment_contact(pts[i], pts[i + 1], pts[j], pts[j + 1]);
        if (c.kind == SegmentContact::Kind::none) continue;
        if (j == i + 1 && c.kind == SegmentContact::Kind::point) continue;
        // Earliest contact point on piece i, continue along piece j from there.
        const Point q = lerp(pts[i], pts[i + 1], c.s0);
        std::vector<Point> np;
        std::vector<double> nl;
        for (std::size_t k = 0; k <= i; ++k) push_point(np, nl, pts[k], k > 0 ? lam[k - 1] : 0.0);
        push_point(np, nl, q, lam[i]);
        push_point(np, nl, pts[j + 1], lam[j]);
        for (std::size_t k = j + 2; k < pts.size(); ++k) push_point(np, nl, pts[k], lam[k - 1]);
        if (np.size() < 2) throw SchemaError("loop removal collapsed the path to a point");
        pts = std::move(np);
        lam = std::move(nl);
        changed = true;
      }
    }
  }
  return Highway(LipschitzPath(std::move(pts)), std::move(lam));
}

std::vector<Highway> cut_against(const Highway& h, const std::vector<LipschitzPath>& obstacles, double gap) {
  const LipschitzPath& path = h.path();
  const auto& p = path.breakpoints();
  std::vector<std::pair<double, double>> hit;
  for (const auto& obs : obstacles) {
    const auto& q = obs.breakpoints();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const double base = path.position(i);
      const double len = path.position(i + 1) - base;
      for (std::size_t j = 0; j + 1 < q.size(); ++j) {
        const SegmentContact c = segment_contact(p[i], p[i + 1], q[j], q[j + 1]);
        if (c.kind == SegmentContact::Kind::none) continue;
        hit.emplace_back(base + c.s0 * len - gap, base + c.s1 * len + gap);
      }
    }
  }
  std::sort(hit.begin(), hit.end());
  std::vector<Highway> out;
  double cursor = 0.0;
  auto emit = [&](double a, double b) {
    if (b - a > gap) out.push_back(h.sub(a, b));
  };
  for (const auto& [lo, hi] : hit) {
    if (lo > cursor) emit(cursor, lo);
    cursor = std::max(cursor, hi);
  }
  if (cursor < path.length()) emit(cursor, path.length());
  return out;
}

}  // namespace fpp
