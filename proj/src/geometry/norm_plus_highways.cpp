#include "fpp/errors.hpp"
#include "fpp/geometry.hpp"
#include "fpp/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace fpp {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Piece {
  std::size_t h;
  Point a, b;
  double s0, len;
};

Point lerp(const Point& a, const Point& b, double t) {
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return p;
}

// Point of the piece whose coordinate j equals value, as a parameter in [0, 1].
bool transfer_param(const Piece& q, std::size_t j, double value, double& t) {
  const double span = q.b[j] - q.a[j];
  if (span == 0.0) return false;
  t = (value - q.a[j]) / span;
  return t >= 0.0 && t <= 1.0;
}

void append(std::vector<Point>& pts, std::vector<double>& lam, const Point& p, double lambda) {
  if (!pts.empty() && pts.back() == p) return;
  if (!pts.empty()) lam.push_back(lambda);
  pts.push_back(p);
}

}  // namespace

NormPlusHighways::NormPlusHighways(WeightedL1 g, std::vector<Highway> highways, int access_resolution)
    : g_(std::move(g)), highways_(std::move(highways)), access_resolution_(access_resolution) {
  if (access_resolution_ < 1) throw SchemaError("access resolution must be positive");
  const std::size_t d = static_cast<std::size_t>(g_.dim());
  std::vector<LipschitzPath> paths;
  for (const auto& h : highways_) {
    if (h.path().dim() != g_.dim()) throw SchemaError("highway dimension differs from the norm");
    for (const auto& p : h.path().breakpoints())
      for (double c : p)
        if (c < 0.0 || c > 1.0) throw SchemaError("highways must lie in the unit cube");
    const double direct = g_.distance(h.path().start(), h.path().end());
    if (h.discounted_length(g_) > direct * (1.0 + 1e-12))
      throw SchemaError("highway discounted length exceeds the norm distance of its endpoints");
    paths.push_back(h.path());
  }
  if (std::string why = disjointness_violation(paths); !why.empty()) throw SchemaError("highways: " + why);

  std::vector<Piece> pieces;
  for (std::size_t h = 0; h < highways_.size(); ++h) {
    const auto& path = highways_[h].path();
    for (std::size_t i = 0; i < path.pieces(); ++i)
      pieces.push_back({h, path.breakpoints()[i], path.breakpoints()[i + 1], path.position(i),
                        path.position(i + 1) - path.position(i)});
  }

  std::map<Point, std::size_t> index;
  auto add = [&](const Point& p, std::size_t h, double s) {
    auto [it, fresh] = index.emplace(p, nodes_.size());
    if (fresh) nodes_.push_back({p, {}});
    auto& on = nodes_[it->second].on;
    for (const auto& m : on)
      if (m.first == h) return it->second;
    on.emplace_back(h, s);
    return it->second;
  };
  auto add_on_piece = [&](const Piece& q, double t) {
    return add(lerp(q.a, q.b, t), q.h, q.s0 + std::clamp(t, 0.0, 1.0) * q.len);
  };

  // Anchors: breakpoints and two-coordinate coincidences between pieces.
  for (const auto& q : pieces) {
    add_on_piece(q, 0.0);
    add_on_piece(q, 1.0);
  }
  for (std::size_t x = 0; x < pieces.size(); ++x) {
    for (std::size_t y = x + 1; y < pieces.size(); ++y) {
      const Piece& P = pieces[x];
      const Piece& Q = pieces[y];
      for (std::size_t j1 = 0; j1 < d; ++j1) {
        for (std::size_t j2 = j1 + 1; j2 < d; ++j2) {
          // s (P.b - P.a) - t (Q.b - Q.a) = Q.a - P.a on coordinates j1, j2.
          const double u1 = P.b[j1] - P.a[j1], u2 = P.b[j2] - P.a[j2];
          const double v1 = Q.b[j1] - Q.a[j1], v2 = Q.b[j2] - Q.a[j2];
          const double w1 = Q.a[j1] - P.a[j1], w2 = Q.a[j2] - P.a[j2];
          const double det = -u1 * v2 + u2 * v1;
          if (det == 0.0) continue;
          const double s = (-w1 * v2 + w2 * v1) / det;
          const double t = (u1 * w2 - u2 * w1) / det;
          if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0) continue;
          add_on_piece(P, s);
          add_on_piece(Q, t);
        }
      }
    }
  }
  // One level of coordinate-alignment transfers of the anchors.
  const std::size_t anchors = nodes_.size();
  for (std::size_t a = 0; a < anchors; ++a) {
    const Point f = nodes_[a].p;
    for (const auto& q : pieces)
      for (std::size_t j = 0; j < d; ++j) {
        double t;
        if (!transfer_param(q, j, f[j], t)) continue;
        Point p = lerp(q.a, q.b, t);
        p[j] = f[j];
        add(p, q.h, q.s0 + t * q.len);
      }
  }

  order_.assign(highways_.size(), {});
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    for (const auto& [h, s] : nodes_[v].on) order_[h].emplace_back(s, v);
  for (auto& o : order_) std::sort(o.begin(), o.end());

  const std::size_t n = nodes_.size();
  dist_.assign(n * n, kInfinity);
  std::vector<std::vector<double>> axis(d, std::vector<double>(n));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t k = 0; k < d; ++k) axis[k][v] = nodes_[v].p[k];
  std::vector<const double*> cols(d);
  for (std::size_t k = 0; k < d; ++k) cols[k] = axis[k].data();
  const auto& kt = simd::active();
  for (std::size_t v = 0; v < n; ++v)
    kt.weighted_l1_row(&dist_[v * n], cols.data(), nodes_[v].p.data(), g_.weights().data(), d, n);
  for (std::size_t h = 0; h < order_.size(); ++h) {
    const auto& o = order_[h];
    for (std::size_t i = 0; i + 1 < o.size(); ++i) {
      const double c = along(h, o[i].first, o[i + 1].first);
      const std::size_t a = o[i].second, b = o[i + 1].second;
      dist_[a * n + b] = std::min(dist_[a * n + b], c);
      dist_[b * n + a] = std::min(dist_[b * n + a], c);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double* row_k = &dist_[k * n];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      kt.min_plus_broadcast(&dist_[i * n], row_k, dist_[i * n + k], n);
    }
  }
}

void NormPlusHighways::check_point(const Point& x) const {
  if (x.size() != static_cast<std::size_t>(g_.dim())) throw SchemaError("point dimension differs from the metric");
}

NormPlusHighways::Query NormPlusHighways::prepare(const Point& x) const {
  check_point(x);
  Query q;
  const std::size_t n = nodes_.size();
  const std::size_t d = x.size();
  q.entry.assign(n, kInfinity);
  q.entry_via.assign(n, -1);
  for (std::size_t v = 0; v < n; ++v) q.entry[v] = g_.distance(x, nodes_[v].p);
  for (std::size_t h = 0; h < highways_.size(); ++h) {
    const auto& path = highways_[h].path();
    for (std::size_t i = 0; i < path.pieces(); ++i) {
      Piece piece{h, path.breakpoints()[i], path.breakpoints()[i + 1], path.position(i),
                  path.position(i + 1) - path.position(i)};
      for (std::size_t j = 0; j < d; ++j) {
        double t;
        if (!transfer_param(piece, j, x[j], t)) continue;
        Point p = lerp(piece.a, piece.b, t);
        p[j] = x[j];
        const double off = g_.distance(x, p);
        q.transfers.push_back({p, h, piece.s0 + t * piece.len, off});
      }
    }
  }
  for (std::size_t k = 0; k < q.transfers.size(); ++k) {
    const Transfer& tr = q.transfers[k];
    const auto& o = order_[tr.highway];
    auto it = std::lower_bound(o.begin(), o.end(), std::make_pair(tr.s, std::size_t{0}));
    auto relax = [&](std::size_t idx) {
      const std::size_t v = o[idx].second;
      const double c = tr.off + along(tr.highway, tr.s, o[idx].first);
      if (c < q.entry[v]) {
        q.entry[v] = c;
        q.entry_via[v] = static_cast<std::ptrdiff_t>(k);
      }
    };
    const std::size_t pos = static_cast<std::size_t>(it - o.begin());
    if (pos < o.size()) relax(pos);
    if (pos > 0) relax(pos - 1);
  }
  return q;
}

std::vector<double> NormPlusHighways::spread(const Query& q) const {
  const std::size_t n = nodes_.size();
  std::vector<double> b(n, kInfinity);
  const auto& kt = simd::active();
  for (std::size_t a = 0; a < n; ++a)
    if (q.entry[a] < kInfinity) kt.min_plus_broadcast(b.data(), &dist_[a * n], q.entry[a], n);
  return b;
}

std::vector<double> NormPlusHighways::row(const Point& x, const std::vector<Point>& ys) const {
  const Query qx = prepare(x);
  const std::vector<double> b = spread(qx);
  std::vector<double> out;
  out.reserve(ys.size());
  for (const auto& y : ys) {
    const Query qy = prepare(y);
    double best = g_.distance(x, y);
    best = std::min(best, simd::active().min_plus_reduce(b.data(), qy.entry.data(), b.size()));
    for (const auto& tx : qx.transfers)
      for (const auto& ty : qy.transfers)
        if (tx.highway == ty.highway) best = std::min(best, tx.off + along(tx.highway, tx.s, ty.s) + ty.off);
    out.push_back(best);
  }
  return out;
}

double NormPlusHighways::operator()(const Point& x, const Point& y) const { return row(x, {y})[0]; }

double NormPlusHighways::edge_cost(std::size_t a, std::size_t b) const {
  double c = g_.distance(nodes_[a].p, nodes_[b].p);
  for (const auto& [ha, sa] : nodes_[a].on)
    for (const auto& [hb, sb] : nodes_[b].on)
      if (ha == hb) c = std::min(c, along(ha, sa, sb));
  return c;
}

Highway NormPlusHighways::geodesic(const Point& x, const Point& y) const {
  if (x == y) throw SchemaError("geodesic endpoints coincide");
  const Query qx = prepare(x);
  const Query qy = prepare(y);
  const std::vector<double> b = spread(qx);
  const std::size_t n = nodes_.size();

  std::vector<Point> pts;
  std::vector<double> lam;
  auto ride = [&](std::size_t h, double s0, double s1) {
    if (s0 == s1) return;
    Highway part = highways_[h].sub(std::min(s0, s1), std::max(s0, s1));
    if (s0 > s1) part = part.reversed();
    const auto& bp = part.path().breakpoints();
    for (std::size_t i = 0; i < bp.size(); ++i) append(pts, lam, bp[i], i > 0 ? part.lambda(i - 1) : 1.0);
  };

  double best = g_.distance(x, y);
  int mode = 0;
  std::size_t bx = 0, by = 0;
  for (std::size_t i = 0; i < qx.transfers.size(); ++i)
    for (std::size_t j = 0; j < qy.transfers.size(); ++j) {
      const auto& tx = qx.transfers[i];
      const auto& ty = qy.transfers[j];
      if (tx.highway != ty.highway) continue;
      const double c = tx.off + along(tx.highway, tx.s, ty.s) + ty.off;
      if (c < best) {
        best = c;
        mode = 1;
        bx = i;
        by = j;
      }
    }
  std::size_t target = n;
  for (std::size_t v = 0; v < n; ++v) {
    const double c = b[v] + qy.entry[v];
    if (c < best) {
      best = c;
      mode = 2;
      target = v;
    }
  }

  append(pts, lam, x, 1.0);
  if (mode == 1) {
    const auto& tx = qx.transfers[bx];
    const auto& ty = qy.transfers[by];
    append(pts, lam, tx.p, 1.0);
    ride(tx.highway, tx.s, ty.s);
    append(pts, lam, ty.p, 1.0);
  } else if (mode == 2) {
    std::size_t start = n;
    double c0 = kInfinity;
    for (std::size_t a = 0; a < n; ++a) {
      const double c = qx.entry[a] + dist_[a * n + target];
      if (c < c0) {
        c0 = c;
        start = a;
      }
    }
    auto enter = [&](const Query& q, std::size_t v, bool reverse) {
      // Off-road to the node, or off-road to a transfer and then ride.
      if (q.entry_via[v] < 0) return;
      const Transfer& tr = q.transfers[static_cast<std::size_t>(q.entry_via[v])];
      double sv = 0.0;
      for (const auto& [h, s] : nodes_[v].on)
        if (h == tr.highway) sv = s;
      if (!reverse) {
        append(pts, lam, tr.p, 1.0);
        ride(tr.highway, tr.s, sv);
      } else {
        ride(tr.highway, sv, tr.s);
        append(pts, lam, tr.p, 1.0);
      }
    };
    enter(qx, start, false);
    append(pts, lam, nodes_[start].p, 1.0);
    std::size_t cur = start;
    for (std::size_t guard = 0; cur != target && guard <= n; ++guard) {
      std::size_t next = n;
      double cbest = kInfinity;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == cur) continue;
        const double v = edge_cost(cur, c) + dist_[c * n + target];
        if (v < cbest) {
          cbest = v;
          next = c;
        }
      }
      bool rode = false;
      for (const auto& [ha, sa] : nodes_[cur].on)
        for (const auto& [hb, sb] : nodes_[next].on)
          if (!rode && ha == hb && along(ha, sa, sb) <= g_.distance(nodes_[cur].p, nodes_[next].p)) {
            ride(ha, sa, sb);
            rode = true;
          }
      append(pts, lam, nodes_[next].p, 1.0);
      cur = next;
    }
    if (cur != target) throw InvariantFailure("geodesic reconstruction did not reach its target");
    enter(qy, target, true);
  }
  append(pts, lam, y, 1.0);
  return Highway(LipschitzPath(std::move(pts)), std::move(lam));
}

double NormPlusHighways::segment_length_bound(const Point& a, const Point& b) const {
  const double full = g_.distance(a, b);
  if (a == b) return 0.0;
  double bound = full;
  for (const auto& h : highways_) {
    const auto& p = h.path().breakpoints();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const SegmentContact c = segment_contact(a, b, p[i], p[i + 1]);
      if (c.kind == SegmentContact::Kind::overlap) bound -= (1.0 - h.lambda(i)) * full * (c.s1 - c.s0);
    }
  }
  return bound;
}

std::vector<NormPlusHighways::Location> NormPlusHighways::locate(const Point& z, double tol) const {
  check_point(z);
  std::vector<Location> out;
  for (std::size_t h = 0; h < highways_.size(); ++h) {
    const auto& path = highways_[h].path();
    const auto& p = path.breakpoints();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      std::size_t big = 0;
      for (std::size_t k = 1; k < z.size(); ++k)
        if (std::abs(p[i + 1][k] - p[i][k]) > std::abs(p[i + 1][big] - p[i][big])) big = k;
      const double t = (z[big] - p[i][big]) / (p[i + 1][big] - p[i][big]);
      if (t < -tol || t > 1.0 + tol) continue;
      bool on = true;
      for (std::size_t k = 0; k < z.size() && on; ++k)
        on = std::abs(p[i][k] + t * (p[i + 1][k] - p[i][k]) - z[k]) <= tol;
      if (!on) continue;
      const double len = path.position(i + 1) - path.position(i);
      const bool end = std::abs(t) * len <= tol || std::abs(1.0 - t) * len <= tol;
      out.push_back({h, i, path.position(i) + std::clamp(t, 0.0, 1.0) * len, end});
    }
  }
  return out;
}

}  // namespace fpp
