#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/passage_time.hpp"
#include "fpp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpp {

TimeConstantEstimate estimate_time_constant(const EdgeDistribution& dist, const Vertex& x, const std::vector<int>& ns,
                                            std::size_t samples, std::uint64_t seed, int threads,
                                            std::size_t box_budget) {
  if (ns.empty()) throw SchemaError("empty n-ladder");
  if (samples == 0) throw SchemaError("samples must be positive");
  int top = 0, norm = 0;
  for (int c : x) {
    top = std::max(top, std::abs(c));
    norm += std::abs(c);
  }
  if (top == 0) throw SchemaError("direction must be nonzero");
  TimeConstantEstimate est;
  est.x = x;
  est.ns = ns;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const int n = ns[k];
    if (n < 1) throw SchemaError("scale n must be positive");
    const int side = n * top;
    double vertices = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) vertices *= side + 1;
    if (vertices > static_cast<double>(box_budget)) throw BudgetExceeded("box exceeds the vertex budget");
    const LatticeBox box(static_cast<int>(x.size()), side);
    Vertex origin(x.size(), 0), target(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) target[i] = n * std::abs(x[i]);
    std::vector<double> values(samples);
    const std::uint64_t level_seed = derive_seed(seed, static_cast<std::uint64_t>(n));
    parallel_for(
        samples,
        [&](std::size_t i) {
          const WeightField w = sample_weights(dist, box, derive_seed(level_seed, i));
          values[i] = passage_time(w, origin, target) / n;
        },
        threads);
    est.per_n.push_back(summarize(values));
  }
  est.mu = est.per_n.back().mean;
  est.ci = est.per_n.back().ci;
  est.bracket = {dist.support_infimum() * norm, dist.mean() * norm};
  return est;
}

ZeroSetReport zero_set_check(const RateSurface& surface, const TimeConstantEstimate& tc, double a, double margin,
                             double zero_tol) {
  const auto [r, c] = primitive_ray(tc.x);
  const SurfaceRay* ray = surface.find(r);
  if (!ray || ray->cells.empty()) throw SchemaError("surface has no ray for the time-constant direction");
  ZeroSetReport rep;
  const double half = 0.5 * tc.ci.width();
  int norm = 0;
  for (int v : tc.x) norm += std::abs(v);
  auto fail = [&](const std::string& what, double zeta) {
    std::ostringstream os;
    os << what << " at zeta=" << zeta;
    rep.failures.push_back(os.str());
    rep.pass = false;
  };
  std::vector<double> trend;
  for (const auto& cell : ray->cells) {
    const double zeta = cell.zeta * c;
    const double lo = cell.ci.lo * c;
    if (zeta >= tc.mu + 2.0 * half) {
      ++rep.zero_checked;
      if (lo > zero_tol) fail("interval excludes zero above the time constant", zeta);
    } else if (zeta <= tc.mu - margin) {
      ++rep.positive_checked;
      if (!(lo > 0.0)) fail("interval contains zero below the time constant", zeta);
    }
    if (zeta > a * norm && zeta <= tc.mu) trend.push_back(cell.value * c);
  }
  rep.trend_checked = trend.size();
  for (std::size_t i = 1; i < trend.size(); ++i)
    if (trend[i] > trend[i - 1]) fail("values increase below the time constant", 0.0);
  if (trend.size() >= 2 && !(trend.back() < trend.front())) fail("no decrease below the time constant", 0.0);
  if (rep.zero_checked + rep.positive_checked == 0) throw SchemaError("insufficient overlap between surface and estimate");
  return rep;
}

}  // namespace fpp
