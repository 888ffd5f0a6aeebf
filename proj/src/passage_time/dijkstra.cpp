#include "fpp/errors.hpp"
#include "fpp/passage_time.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace fpp {

namespace {

// Calls f(neighbour, weight) for every box neighbour of v.
template <class F>
inline void for_each_neighbour(const WeightField& w, std::size_t v, F&& f) {
  const LatticeBox& box = w.box();
  const int n = box.side();
  for (int axis = 0; axis < box.dim(); ++axis) {
    const std::size_t s = box.stride(axis);
    const int c = static_cast<int>((v / s) % static_cast<std::size_t>(n + 1));
    if (c < n) f(v + s, w.weight(v, axis));
    if (c > 0) f(v - s, w.weight(v - s, axis));
  }
}

void choose_predecessor(const WeightField& w, std::size_t v, const std::vector<double>& dist,
                        const std::vector<std::uint8_t>& settled, std::vector<std::size_t>& pred) {
  std::size_t best = kNoVertex;
  for_each_neighbour(w, v, [&](std::size_t u, double wt) {
    if (settled[u] && dist[u] + wt == dist[v] && u < best) best = u;
  });
  pred[v] = best;
}

using Entry = std::pair<double, std::size_t>;
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

void run_heap(const WeightField& w, const Region* region, std::vector<double>& dist, std::vector<std::size_t>* pred,
              std::size_t source, MinHeap& heap) {
  std::vector<std::uint8_t> settled(dist.size(), 0);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (settled[v] || d != dist[v]) continue;
    if (pred != nullptr && v != source) choose_predecessor(w, v, dist, settled, *pred);
    settled[v] = 1;
    for_each_neighbour(w, v, [&](std::size_t u, double wt) {
      if (settled[u] || (region != nullptr && !region->contains(u))) return;
      const double nd = d + wt;
      if (nd < dist[u]) {
        dist[u] = nd;
        heap.emplace(nd, u);
      }
    });
  }
}

void run_bucket(const WeightField& w, const Region* region, std::size_t source, double max_weight,
                std::vector<double>& dist, std::vector<std::size_t>& pred) {
  const auto span = static_cast<std::size_t>(max_weight) + 1;
  std::vector<std::vector<std::size_t>> buckets(span);
  std::vector<std::uint8_t> settled(dist.size(), 0);
  dist[source] = 0.0;
  buckets[0].push_back(source);
  std::size_t pending = 1;
  for (std::size_t level = 0; pending > 0; ++level) {
    auto& bucket = buckets[level % span];
    for (std::size_t k = 0; k < bucket.size(); ++k) {
      const std::size_t v = bucket[k];
      --pending;
      if (settled[v] || dist[v] != static_cast<double>(level)) continue;
      if (v != source) choose_predecessor(w, v, dist, settled, pred);
      settled[v] = 1;
      for_each_neighbour(w, v, [&](std::size_t u, double wt) {
        if (settled[u] || (region != nullptr && !region->contains(u))) return;
        const double nd = dist[v] + wt;
        if (nd < dist[u]) {
          dist[u] = nd;
          buckets[static_cast<std::size_t>(nd) % span].push_back(u);
          ++pending;
        }
      });
    }
    bucket.clear();
  }
}

}  // namespace

bool has_small_integer_weights(const WeightField& w, double max_weight) {
  for (int axis = 0; axis < w.box().dim(); ++axis) {
    for (double x : w.axis_weights(axis)) {
      if (std::isinf(x)) continue;
      if (x < 0.0 || x > max_weight || x != std::floor(x)) return false;
    }
  }
  return true;
}

namespace {
double max_finite_weight(const WeightField& w) {
  double m = 0.0;
  for (int axis = 0; axis < w.box().dim(); ++axis) {
    for (double x : w.axis_weights(axis)) {
      if (!std::isinf(x)) m = std::max(m, x);
    }
  }
  return m;
}
}  // namespace

ShortestPathTree shortest_path_tree(const WeightField& w, std::size_t source, const Region* region, QueueKind queue) {
  const std::size_t count = w.box().vertex_count();
  if (source >= count) throw SchemaError("shortest_path_tree: source outside the box");
  if (region != nullptr && !region->contains(source)) throw SchemaError("shortest_path_tree: source outside region");
  if (queue == QueueKind::automatic) {
    queue = has_small_integer_weights(w) ? QueueKind::bucket : QueueKind::binary_heap;
  } else if (queue == QueueKind::bucket && !has_small_integer_weights(w)) {
    throw SchemaError("shortest_path_tree: bucket queue needs small integer weights");
  }
  ShortestPathTree tree;
  tree.source = source;
  tree.queue_used = queue;
  tree.dist.assign(count, kInf);
  tree.pred.assign(count, kNoVertex);
  if (queue == QueueKind::bucket) {
    run_bucket(w, region, source, max_finite_weight(w), tree.dist, tree.pred);
  } else {
    MinHeap heap;
    tree.dist[source] = 0.0;
    heap.emplace(0.0, source);
    run_heap(w, region, tree.dist, &tree.pred, source, heap);
  }
  tree.pred[source] = kNoVertex;
  return tree;
}

std::vector<double> multi_source_distances(const WeightField& w, const std::vector<double>& init,
                                           const Region* region) {
  if (init.size() != w.box().vertex_count()) throw SchemaError("multi_source_distances: size mismatch");
  std::vector<double> dist(init);
  MinHeap heap;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (region != nullptr && !region->contains(v)) {
      dist[v] = kInf;
      continue;
    }
    if (!std::isinf(dist[v])) heap.emplace(dist[v], v);
  }
  run_heap(w, region, dist, nullptr, kNoVertex, heap);
  return dist;
}

DiscretePath ShortestPathTree::path_to(const LatticeBox& box, std::size_t target) const {
  DiscretePath path;
  if (target >= dist.size() || std::isinf(dist[target])) return path;
  for (std::size_t v = target; v != kNoVertex; v = pred[v]) path.push_back(box.vertex(v));
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t ShortestPathTree::hops_to(std::size_t target) const {
  std::size_t h = 0;
  for (std::size_t v = target; pred[v] != kNoVertex; v = pred[v]) ++h;
  return h;
}

PassageResult restricted_passage_time(const Region& region, const Vertex& x, const Vertex& y, const WeightField& w,
                                      bool want_geodesic, QueueKind queue) {
  const LatticeBox& box = w.box();
  if (!(region.box() == box)) throw SchemaError("restricted_passage_time: region and field boxes differ");
  if (!region.contains(x) || !region.contains(y))
    throw SchemaError("restricted_passage_time: endpoint outside the region");
  const std::size_t sx = box.index(x);
  const std::size_t ty = box.index(y);
  const ShortestPathTree tree = shortest_path_tree(w, sx, region.is_full() ? nullptr : &region, queue);
  PassageResult out;
  out.time = tree.dist[ty];
  if (want_geodesic && !std::isinf(out.time)) out.geodesic = tree.path_to(box, ty);
  return out;
}

double passage_time(const WeightField& w, const Vertex& x, const Vertex& y) {
  const LatticeBox& box = w.box();
  if (!box.contains(x) || !box.contains(y)) throw SchemaError("passage_time: endpoint outside the box");
  return shortest_path_tree(w, box.index(x)).dist[box.index(y)];
}

}  // namespace fpp
