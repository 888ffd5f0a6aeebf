#include "fpp/errors.hpp"
#include "fpp/passage_time.hpp"
#include "fpp/simd.hpp"

#include <algorithm>
#include <span>

namespace fpp {

HubReport hub_check(const Vertex& x, const WeightField& w, double kappa) {
  if (!(kappa > 0.0)) throw SchemaError("hub_check: kappa must be positive");
  const LatticeBox& box = w.box();
  if (!box.contains(x)) throw SchemaError("hub_check: vertex outside the box");
  const std::size_t count = box.vertex_count();
  const std::size_t src = box.index(x);

  HubReport rep;
  rep.x = x;
  rep.kappa = kappa;
  rep.targets.resize(count);
  int h_max = 0;
  for (std::size_t v = 0; v < count; ++v) {
    auto& t = rep.targets[v];
    t.target = v;
    t.distance = l1_distance(x, box.vertex(v));
    t.best_time = kInf;
    h_max = std::max(h_max, 2 * t.distance + 4);
  }

  // cur[v]: least time over walks from x to v with at most h steps.
  std::vector<double> cur(count, kInf);
  cur[src] = 0.0;
  std::vector<double> next(count);
  auto record = [&](int h) {
    for (std::size_t v = 0; v < count; ++v) {
      auto& t = rep.targets[v];
      const int budget = 2 * t.distance + 4;
      if (h > budget) continue;
      if (t.min_hops < 0 && cur[v] <= kappa * t.distance) t.min_hops = h;
      if (h == budget) t.best_time = cur[v];
    }
  };
  record(0);
  for (int h = 1; h <= h_max; ++h) {
    next = cur;
    for (int axis = 0; axis < box.dim(); ++axis) {
      const std::size_t s = box.stride(axis);
      const std::size_t m = count - s;
      const std::span<const double> wa = w.axis_weights(axis);
      // Padded +inf weights block moves that leave the box.
      simd::min_plus_accumulate(std::span<double>(next.data() + s, m), std::span<const double>(cur.data(), m),
                                wa.subspan(0, m));
      simd::min_plus_accumulate(std::span<double>(next.data(), m), std::span<const double>(cur.data() + s, m),
                                wa.subspan(0, m));
    }
    cur.swap(next);
    record(h);
  }

  rep.verdict = true;
  for (auto& t : rep.targets) {
    const int budget = 2 * t.distance + 4;
    t.time_slack = kappa * t.distance - t.best_time;
    t.pass = t.best_time <= kappa * t.distance;
    t.hop_slack = t.min_hops < 0 ? -1 : budget - t.min_hops;
    rep.worst_time_slack = std::min(rep.worst_time_slack, t.time_slack);
    rep.worst_hop_slack = std::min(rep.worst_hop_slack, t.hop_slack);
    if (!t.pass) {
      rep.verdict = false;
      ++rep.failing_targets;
    }
  }
  return rep;
}

}  // namespace fpp
