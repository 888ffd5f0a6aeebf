#include "fpp/errors.hpp"
#include "fpp/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpp {

SurfaceRate::SurfaceRate(RateSurface surface) : surface_(std::move(surface)) {
  if (surface_.rays().empty()) throw SchemaError("rate surface has no rays");
}

double SurfaceRate::operator()(const Point& u, double zeta) const {
  double n1 = 0.0;
  for (double c : u) n1 += std::abs(c);
  if (n1 == 0.0) return 0.0;
  double un = 0.0;
  for (double c : u) un += c * c;
  un = std::sqrt(un);
  // Angles to every ray of the nonnegative orthant.
  std::vector<std::pair<double, std::size_t>> angle;
  const auto& rays = surface_.rays();
  for (std::size_t k = 0; k < rays.size(); ++k) {
    double dot = 0.0, rn = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      dot += std::abs(u[i]) * rays[k].ray[i];
      rn += static_cast<double>(rays[k].ray[i]) * rays[k].ray[i];
    }
    angle.emplace_back(std::acos(std::clamp(dot / (un * std::sqrt(rn)), -1.0, 1.0)), k);
  }
  std::sort(angle.begin(), angle.end());
  auto per_unit = [&](std::size_t k) {
    const Vertex& r = rays[k].ray;
    double r1 = 0.0;
    for (int c : r) r1 += c;
    // Value at the l1-unit direction of the ray and speed zeta / |u|_1.
    return surface_.lookup(r, zeta / n1 * r1).value / r1;
  };
  if (angle.size() == 1 || angle[0].first == 0.0) return n1 * per_unit(angle[0].second);
  const double w0 = 1.0 / angle[0].first, w1 = 1.0 / angle[1].first;
  return n1 * (w0 * per_unit(angle[0].second) + w1 * per_unit(angle[1].second)) / (w0 + w1);
}

namespace {

void validate_network(const NormPlusHighways& D, const HighwayNetwork& net) {
  std::vector<LipschitzPath> paths;
  for (const auto& h : net.highways) paths.push_back(h.path());
  if (std::string why = disjointness_violation(paths); !why.empty()) throw SchemaError("network: " + why);
  for (const auto& h : net.highways)
    if (std::string why = geodesy_violation(h, D.norm(), D, net.P); !why.empty())
      throw SchemaError("network highway is not a geodesic: " + why);
}

}  // namespace

double functional_geodesic_sum(const NormPlusHighways& D, const HighwayNetwork& net, const RateModel& J) {
  validate_network(D, net);
  const WeightedL1& g = D.norm();
  double total = 0.0;
  for (const auto& h : net.highways) {
    const LipschitzPath& p = h.path();
    for (std::size_t i = 0; i < p.pieces(); ++i) {
      const Point u = p.velocity(i);
      const double len = p.position(i + 1) - p.position(i);
      total += len * J(u, h.lambda(i) * g(u));
    }
  }
  return total;
}

double functional_intrinsic(const NormPlusHighways& D, const RateModel& J, int order) {
  std::vector<LipschitzPath> paths;
  for (const auto& h : D.highways()) paths.push_back(h.path());
  const std::size_t d = static_cast<std::size_t>(D.dim());
  const SetIntegrand phi = [&](const Point& z, const Point& e) {
    std::vector<Point> candidates{e};
    Point back(e);
    for (double& c : back) c = -c;
    candidates.push_back(back);
    for (std::size_t i = 0; i < d; ++i) {
      Point b(d, 0.0);
      b[i] = 1.0;
      candidates.push_back(b);
    }
    double best = 0.0;
    for (const auto& u : candidates) best = std::max(best, J(u, gradient_by_paths(D, z, u).value));
    return best;
  };
  return hausdorff_integrate(paths, phi, order);
}

double functional_intrinsic(const NormPlusHighways& D, const HighwayNetwork& net, const RateModel& J, int order) {
  validate_network(D, net);
  return functional_intrinsic(D, J, order);
}

double functional_sup_lower_bound(const NormPlusHighways& D, const RateModel& J,
                                  const std::vector<LipschitzPath>& family) {
  if (std::string why = disjointness_violation(family); !why.empty()) throw SchemaError("family: " + why);
  const WeightedL1& g = D.norm();
  double total = 0.0;
  for (const auto& path : family) {
    const auto& p = path.breakpoints();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      const Point u = path.velocity(i);
      const double len = path.position(i + 1) - path.position(i);
      double covered = 0.0;
      for (const auto& h : D.highways()) {
        const auto& q = h.path().breakpoints();
        for (std::size_t j = 0; j + 1 < q.size(); ++j) {
          const SegmentContact c = segment_contact(p[i], p[i + 1], q[j], q[j + 1]);
          if (c.kind != SegmentContact::Kind::overlap) continue;
          const double part = (c.s1 - c.s0) * len;
          covered += part;
          total += part * J(u, h.lambda(j) * g(u));
        }
      }
      total += std::max(0.0, len - covered) * J(u, g(u));
    }
  }
  return total;
}

FunctionalReport functional_report(const NormPlusHighways& D, const RateModel& J, const NetworkOptions& options) {
  NetworkOptions opt = options;
  if (opt.seeds.empty()) opt.seeds = D.highways();
  opt.K_max = std::max(opt.K_max, opt.seeds.size());
  const HighwayNetwork net = build_highway_network(D, opt);
  FunctionalReport r;
  r.network_size = net.highways.size();
  r.network_converged = net.converged;
  r.diagnostics = net.diagnostics;
  r.geodesic_sum = functional_geodesic_sum(D, net, J);
  r.intrinsic = functional_intrinsic(D, net, J, r.quadrature_order);
  std::vector<LipschitzPath> family;
  for (const auto& h : net.highways) family.push_back(h.path());
  r.family_size = family.size();
  r.sup_lower_bound = functional_sup_lower_bound(D, J, family);
  r.delta_sum_intrinsic = r.geodesic_sum - r.intrinsic;
  r.delta_sum_sup = r.geodesic_sum - r.sup_lower_bound;
  return r;
}

MonotonicityProbe strict_monotonicity_probe(const NormPlusHighways& D1, const NormPlusHighways& D2,
                                            const RateModel& J, int eval_m, double tol) {
  if (D1.dim() != D2.dim() || !(D1.norm() == D2.norm())) throw SchemaError("probe needs metrics on the same base norm");
  const std::vector<Point> pts = grid_points(D1.dim(), eval_m);
  MonotonicityProbe probe;
  for (const auto& x : pts) {
    const auto r1 = D1.row(x, pts);
    const auto r2 = D2.row(x, pts);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      ++probe.pairs_checked;
      if (r1[j] > r2[j] + 1e-12 * std::max(1.0, r2[j])) throw SchemaError("ordering D1 <= D2 fails on the grid");
      probe.max_gap = std::max(probe.max_gap, r2[j] - r1[j]);
    }
  }
  if (!(probe.max_gap > tol)) throw SchemaError("metrics are not distinct on the grid");
  probe.value_first = functional_intrinsic(D1, J);
  probe.value_second = functional_intrinsic(D2, J);
  probe.margin = probe.value_first - probe.value_second;
  probe.strict = probe.margin > tol;
  return probe;
}

}  // namespace fpp
