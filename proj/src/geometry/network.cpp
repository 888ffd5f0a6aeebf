#include "fpp/errors.hpp"
#include "fpp/geometry.hpp"
#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>

namespace fpp {

namespace {

// Antipodal corner pairs of the unit cube, then Halton pairs.
std::pair<Point, Point> endpoint_pair(std::size_t index, std::size_t d) {
  const std::size_t corners = std::size_t{1} << (d - 1);
  Point x(d), y(d);
  if (index < corners) {
    for (std::size_t k = 0; k < d; ++k) {
      const bool bit = k > 0 && ((index >> (k - 1)) & 1U);
      x[k] = bit ? 1.0 : 0.0;
      y[k] = 1.0 - x[k];
    }
    return {x, y};
  }
  const std::vector<double> h = halton_point(index - corners + 1, 2 * d);
  std::copy_n(h.begin(), d, x.begin());
  std::copy_n(h.begin() + static_cast<std::ptrdiff_t>(d), d, y.begin());
  return {x, y};
}

}  // namespace

HighwayNetwork build_highway_network(const NormPlusHighways& D, const NetworkOptions& options) {
  if (options.K_max == 0) throw SchemaError("K_max must be positive");
  if (!(options.gap > 0.0)) throw SchemaError("cut gap must be positive");
  const WeightedL1& g = D.norm();
  const std::size_t d = static_cast<std::size_t>(D.dim());
  HighwayNetwork net;
  net.eval_m = options.eval_m;
  std::vector<LipschitzPath> used;

  auto take = [&](const Highway& candidate) {
    const Highway clean = remove_loops(candidate);
    for (const Highway& piece : cut_against(clean, used, options.gap)) {
      if (net.highways.size() >= options.K_max) return;
      if (options.validate_geodesics) {
        const std::string why = geodesy_violation(piece, g, D, options.P);
        if (!why.empty()) throw InvariantFailure("network highway is not a geodesic: " + why);
      }
      used.push_back(piece.path());
      net.highways.push_back(piece);
    }
  };

  for (const Highway& seed : options.seeds) {
    if (options.validate_geodesics) {
      const std::string why = geodesy_violation(seed, g, D, options.P);
      if (!why.empty()) throw SchemaError("seed highway is not a geodesic: " + why);
    }
    take(seed);
  }
  const std::size_t seeded = net.highways.size();
  std::size_t index = 0;
  while (net.highways.size() < options.K_max && net.candidates_used < options.max_candidates) {
    const auto [x, y] = endpoint_pair(index++, d);
    ++net.candidates_used;
    if (x == y) continue;
    take(D.geodesic(x, y));
  }

  // Diagnostics with access resolution doubled until they settle.
  int P = options.P;
  std::vector<double> diag = network_diagnostics(HwChain(g, net.highways, options.eval_m, P), D, options.eval_m);
  for (int round = 0; round < 3; ++round) {
    const std::vector<double> next =
        network_diagnostics(HwChain(g, net.highways, options.eval_m, 2 * P), D, options.eval_m);
    double change = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) change = std::max(change, std::abs(next[k] - diag[k]));
    P *= 2;
    diag = next;
    if (change <= 1e-12) break;
  }
  net.P = P;
  // Seeded highways are never truncated away.
  for (std::size_t k = seeded; k < diag.size(); ++k) {
    if (diag[k] <= options.tolerance) {
      net.converged = true;
      net.highways.resize(k);
      diag.resize(k + 1);
      break;
    }
  }
  net.diagnostics = std::move(diag);
  return net;
}

double hausdorff_integrate(const std::vector<LipschitzPath>& paths, const SetIntegrand& phi, int order) {
  // Overlaps of positive length would count a set twice.
  std::vector<std::pair<Point, Point>> segs;
  for (const auto& p : paths)
    for (std::size_t i = 0; i < p.pieces(); ++i) segs.emplace_back(p.breakpoints()[i], p.breakpoints()[i + 1]);
  for (std::size_t a = 0; a < segs.size(); ++a)
    for (std::size_t b = a + 1; b < segs.size(); ++b)
      if (segment_contact(segs[a].first, segs[a].second, segs[b].first, segs[b].second).kind ==
          SegmentContact::Kind::overlap)
        throw SchemaError("paths overlap on a set of positive length");

  std::vector<double> nodes, weights;
  gauss_legendre(order, nodes, weights);
  double total = 0.0;
  for (const auto& [a, b] : segs) {
    double len2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) len2 += (b[k] - a[k]) * (b[k] - a[k]);
    const double len = std::sqrt(len2);
    Point e(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) e[k] = (b[k] - a[k]) / len;
    double piece = 0.0;
    Point z(a.size());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      for (std::size_t k = 0; k < a.size(); ++k) z[k] = a[k] + nodes[q] * (b[k] - a[k]);
      piece += weights[q] * phi(z, e);
    }
    total += len * piece;
  }
  return total;
}

}  // namespace fpp
