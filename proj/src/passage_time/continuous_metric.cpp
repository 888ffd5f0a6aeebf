#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/passage_time.hpp"
#include "fpp/simd.hpp"
#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fpp {

ContinuousMetric::ContinuousMetric(const WeightField& w, double b) : w_(w.truncated(b)), box_(w.box()), b_(b) {
  if (!(b > 0.0)) throw SchemaError("ContinuousMetric: b must be positive");
}

std::vector<double> ContinuousMetric::access(const std::vector<double>& p) const {
  const int d = box_.dim();
  const int n = box_.side();
  const std::size_t count = box_.vertex_count();
  std::vector<double> a(count, kInf);
  std::vector<double> diff(static_cast<std::size_t>(d));
  for (std::size_t c = 0; c < count; ++c) {
    double l1 = 0.0;
    for (int k = 0; k < d; ++k) {
      const double dk = std::fabs(p[static_cast<std::size_t>(k)] - box_.coordinate(c, k));
      diff[static_cast<std::size_t>(k)] = dk;
      l1 += dk;
    }
    double best = b_ * l1;
    for (int axis = 0; axis < d; ++axis) {
      const auto ax = static_cast<std::size_t>(axis);
      const int cc = box_.coordinate(c, axis);
      const double rest = l1 - diff[ax];
      const double offset = p[ax] - cc;  // signed position of p along the axis
      for (int dir : {+1, -1}) {
        if ((dir > 0 && cc >= n) || (dir < 0 && cc <= 0)) continue;
        const double tau = dir > 0 ? w_.weight(c, axis) : w_.weight(c - box_.stride(axis), axis);
        const double proj = std::clamp(dir * offset, 0.0, 1.0);
        for (double s : {1.0, proj}) {
          const double cost = b_ * (rest + std::fabs(offset - dir * s)) + tau * s;
          if (cost < best) best = cost;
        }
      }
    }
    a[c] = best;
  }
  return a;
}

namespace {
std::vector<double> to_box_coords(const std::vector<double>& x, int n) {
  std::vector<double> p(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= 0.0 && x[k] <= 1.0)) throw SchemaError("ContinuousMetric: point outside [0,1]^d");
    p[k] = n * x[k];
  }
  return p;
}
double l1(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += std::fabs(p[k] - q[k]);
  return s;
}
}  // namespace

std::vector<double> ContinuousMetric::from(const std::vector<double>& x, const std::vector<std::vector<double>>& ys) const {
  const int n = box_.side();
  const auto px = to_box_coords(x, n);
  const std::vector<double> reach = multi_source_distances(w_, access(px));
  std::vector<double> out;
  out.reserve(ys.size());
  for (const auto& y : ys) {
    const auto py = to_box_coords(y, n);
    const std::vector<double> ay = access(py);
    const double via = simd::min_plus_reduce(reach, ay);
    out.push_back(std::min(b_ * l1(px, py), via) / n);
  }
  return out;
}

double ContinuousMetric::operator()(const std::vector<double>& x, const std::vector<double>& y) const {
  return from(x, {y}).front();
}

GapReport uniform_gap(const WeightField& w, double b, const GapOptions& opt) {
  const LatticeBox& box = w.box();
  const int d = box.dim();
  const int n = box.side();
  const auto du = static_cast<std::size_t>(d);
  std::uint64_t state = splitmix64(opt.seed ^ 0x7a3c1e5fULL);

  // Evaluation points in box coordinates.
  std::vector<std::vector<double>> pts;
  const std::size_t count = box.vertex_count();
  std::vector<std::size_t> lattice(count);
  std::iota(lattice.begin(), lattice.end(), std::size_t{0});
  if (count > opt.lattice_points) {
    // Corners first, then a seeded sample without replacement.
    std::vector<std::size_t> chosen;
    for (std::size_t v = 0; v < count; ++v) {
      bool corner = true;
      for (int k = 0; k < d && corner; ++k) {
        const int c = box.coordinate(v, k);
        corner = (c == 0 || c == n);
      }
      if (corner) chosen.push_back(v);
    }
    for (std::size_t i = count - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(uniform01(state) * static_cast<double>(i + 1));
      std::swap(lattice[i], lattice[std::min(j, i)]);
    }
    for (std::size_t v : lattice) {
      if (chosen.size() >= opt.lattice_points) break;
      if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) chosen.push_back(v);
    }
    lattice = chosen;
  }
  for (std::size_t v : lattice) {
    std::vector<double> p(du);
    for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = box.coordinate(v, k);
    pts.push_back(std::move(p));
  }
  if (!opt.grid_only) {
    const auto edges = box.edges();
    for (std::size_t m = 0; m < opt.midpoints && !edges.empty(); ++m) {
      const auto idx = std::min(edges.size() - 1, static_cast<std::size_t>(uniform01(state) * edges.size()));
      const auto [lower, axis] = edges[idx];
      std::vector<double> p(du);
      for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = box.coordinate(lower, k);
      p[static_cast<std::size_t>(axis)] += 0.5;
      pts.push_back(std::move(p));
    }
    for (std::size_t r = 0; r < opt.random_points; ++r) {
      std::vector<double> p(du);
      for (auto& c : p) c = n * uniform01(state);
      pts.push_back(std::move(p));
    }
  }

  const ContinuousMetric metric(w, b);
  const WeightField wb = w.truncated(b);
  std::vector<std::vector<double>> acc(pts.size());
  std::vector<std::size_t> floor_idx(pts.size());
  parallel_for(
      pts.size(),
      [&](std::size_t i) {
        std::vector<double> unit(du);
        for (std::size_t k = 0; k < du; ++k) unit[k] = pts[i][k] / n;
        floor_idx[i] = box.index(grid_vertex(box, unit));
        acc[i] = metric.access(pts[i]);
      },
      opt.threads);

  struct RowWorst {
    double gap = 0.0;
    std::size_t j = 0;
  };
  std::vector<RowWorst> worst(pts.size());
  parallel_for(
      pts.size(),
      [&](std::size_t i) {
        const std::vector<double> reach = multi_source_distances(wb, acc[i]);
        const std::vector<double> hat = shortest_path_tree(wb, floor_idx[i]).dist;
        RowWorst rw;
        for (std::size_t j = 0; j < pts.size(); ++j) {
          const double tilde = std::min(b * l1(pts[i], pts[j]), simd::min_plus_reduce(reach, acc[j])) / n;
          const double g = std::fabs(hat[floor_idx[j]] / n - tilde);
          if (g > rw.gap) rw = {g, j};
        }
        worst[i] = rw;
      },
      opt.threads);

  GapReport rep;
  rep.bound = 2.0 * b * d / n;
  rep.points = pts.size();
  rep.pairs = pts.size() * pts.size();
  std::size_t wi = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (worst[i].gap > rep.gap) {
      rep.gap = worst[i].gap;
      wi = i;
    }
  }
  if (!pts.empty()) {
    rep.worst_x = pts[wi];
    rep.worst_y = pts[worst[wi].j];
    for (auto& c : rep.worst_x) c /= n;
    for (auto& c : rep.worst_y) c /= n;
  }
  return rep;
}

}  // namespace fpp
