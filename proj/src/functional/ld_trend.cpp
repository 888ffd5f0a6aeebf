#include "fpp/errors.hpp"
#include "fpp/functional.hpp"
#include "fpp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpp {

namespace {

// Closure of the cell {x : floor(n x) = u} along one axis.
std::pair<double, double> cell_range(int u, int n) {
  if (u >= n) return {1.0, 1.0};
  return {static_cast<double>(u) / n, static_cast<double>(u + 1) / n};
}

}  // namespace

std::vector<double> ld_thresholds(const Pseudometric& D, int n, double eps, int subgrid) {
  if (n < 1) throw SchemaError("scale n must be positive");
  if (subgrid < 2) throw SchemaError("subgrid needs at least two points per axis");
  const int d = D.dim();
  const LatticeBox box(d, n);
  const std::size_t V = box.vertex_count();
  std::vector<double> out(V * V);

  const auto* nph = dynamic_cast<const NormPlusHighways*>(&D);
  const auto* norm = dynamic_cast<const NormMetric*>(&D);
  const WeightedL1* g = norm ? &norm->norm() : (nph && nph->highways().empty() ? &nph->norm() : nullptr);
  if (g) {
    // Infimum of a norm over a product of intervals: per-axis interval gaps.
    for (std::size_t a = 0; a < V; ++a)
      for (std::size_t b = 0; b < V; ++b) {
        double inf = 0.0;
        for (int k = 0; k < d; ++k) {
          const auto [alo, ahi] = cell_range(box.coordinate(a, k), n);
          const auto [blo, bhi] = cell_range(box.coordinate(b, k), n);
          inf += g->weights()[static_cast<std::size_t>(k)] * std::max({0.0, blo - ahi, alo - bhi});
        }
        out[a * V + b] = n * (inf + eps);
      }
    return out;
  }

  // Sampled infimum over a fine grid containing every cell closure.
  const int s = subgrid - 1;
  const int fine = n * s;
  const std::vector<Point> pts = grid_points(d, fine);
  const std::size_t F = pts.size();
  std::vector<double> dv(F * F);
  parallel_for(F, [&](std::size_t i) {
    if (nph) {
      const auto row = nph->row(pts[i], pts);
      std::copy(row.begin(), row.end(), dv.begin() + static_cast<std::ptrdiff_t>(i * F));
    } else {
      for (std::size_t j = 0; j < F; ++j) dv[i * F + j] = D(pts[i], pts[j]);
    }
  });
  // Fine-grid members of each cell closure.
  std::vector<std::vector<std::size_t>> members(V);
  for (std::size_t f = 0; f < F; ++f) {
    std::vector<int> c(static_cast<std::size_t>(d));
    std::size_t r = f;
    for (int k = d - 1; k >= 0; --k) {
      c[static_cast<std::size_t>(k)] = static_cast<int>(r % static_cast<std::size_t>(fine + 1));
      r /= static_cast<std::size_t>(fine + 1);
    }
    for (std::size_t v = 0; v < V; ++v) {
      bool in = true;
      for (int k = 0; k < d && in; ++k) {
        const int u = box.coordinate(v, k);
        const int lo = std::min(u, n) * s;
        const int hi = u >= n ? lo : lo + s;
        in = c[static_cast<std::size_t>(k)] >= lo && c[static_cast<std::size_t>(k)] <= hi;
      }
      if (in) members[v].push_back(f);
    }
  }
  parallel_for(V, [&](std::size_t a) {
    for (std::size_t b = 0; b < V; ++b) {
      double inf = std::numeric_limits<double>::infinity();
      for (std::size_t x : members[a])
        for (std::size_t y : members[b]) inf = std::min(inf, dv[x * F + y]);
      out[a * V + b] = n * (inf + eps);
    }
  });
  return out;
}

std::vector<LdTrendRow> empirical_ld_trend(const NormPlusHighways& D, const EdgeDistribution& dist, double eps,
                                           const std::vector<int>& ns, const LdTrendOptions& options) {
  if (ns.empty()) throw SchemaError("empty n-ladder");
  if (!(eps > 0.0)) throw SchemaError("eps must be positive");
  std::vector<LdTrendRow> rows;
  for (int n : ns) {
    const LatticeBox box(D.dim(), n);
    if (box.vertex_count() > options.box_budget) throw BudgetExceeded("ld-trend box exceeds the vertex budget");
    const EventSpec event = EventSpec::ld_lower(ld_thresholds(D, n, eps, options.subgrid));
    LdTrendRow row;
    row.n = n;
    const auto count = dist.is_finite_support() ? configuration_count(dist, box) : std::nullopt;
    if (count && *count <= options.cap) {
      const ExactProbability p = exact_event_probability(event, dist, box, options.cap, options.threads);
      row.method = "exact-oracle";
      row.p = p.value();
      row.p_ci = {row.p, row.p};
      row.configurations = p.configurations;
    } else {
      const MonteCarloFrequency f =
          monte_carlo_frequency(event, dist, box, options.samples, derive_seed(options.seed, static_cast<std::uint64_t>(n)),
                                options.threads);
      row.method = "monte-carlo";
      row.p = f.p;
      row.p_ci = f.ci;
      row.hits = f.hits;
      row.samples = f.samples;
      row.censored = f.hits == 0;
    }
    auto rate = [n](double p) {
      return p >= 1.0 ? 0.0 : (p <= 0.0 ? std::numeric_limits<double>::infinity() : -std::log(p) / n);
    };
    row.rate = row.censored ? rate(row.p_ci.hi) : rate(row.p);
    row.rate_ci = {rate(row.p_ci.hi), rate(row.p_ci.lo)};
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fpp
