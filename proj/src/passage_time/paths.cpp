#include "fpp/errors.hpp"
#include "fpp/passage_time.hpp"

#include <algorithm>

namespace fpp {

bool is_valid_path(const DiscretePath& path) {
  if (path.empty()) return false;
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (path[k].size() != path[0].size() || l1_distance(path[k - 1], path[k]) != 1) return false;
  }
  return true;
}

std::size_t edge_count(const DiscretePath& path) { return path.empty() ? 0 : path.size() - 1; }

double path_time(const DiscretePath& path, const WeightField& w) {
  if (path.empty()) throw SchemaError("path_time: empty path");
  if (!w.box().contains(path.front())) throw SchemaError("path_time: vertex outside the box");
  double total = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) total += w.edge_weight(path[k - 1], path[k]);
  return total;
}

Region Region::full(const LatticeBox& box) {
  return Region(box, std::vector<std::uint8_t>(box.vertex_count(), 1), true);
}

Region Region::cylinder(const LatticeBox& box, const Vertex& lo, const Vertex& hi) {
  if (!box.contains(lo) || !box.contains(hi)) throw SchemaError("Region::cylinder: corner outside the box");
  std::vector<std::uint8_t> mask(box.vertex_count(), 0);
  bool all = true;
  for (std::size_t v = 0; v < box.vertex_count(); ++v) {
    bool in = true;
    for (int axis = 0; axis < box.dim() && in; ++axis) {
      const int c = box.coordinate(v, axis);
      in = c >= lo[static_cast<std::size_t>(axis)] && c <= hi[static_cast<std::size_t>(axis)];
    }
    mask[v] = in ? 1 : 0;
    all = all && in;
  }
  return Region(box, std::move(mask), all);
}

Region Region::vertices(const LatticeBox& box, const std::vector<Vertex>& members) {
  std::vector<std::uint8_t> mask(box.vertex_count(), 0);
  for (const auto& v : members) mask[box.index(v)] = 1;
  const bool all = std::all_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; });
  return Region(box, std::move(mask), all);
}

bool Region::contains(const Vertex& v) const { return box_.contains(v) && mask_[box_.index(v)] != 0; }

std::size_t Region::size() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::vector<double> vertex_excess(const WeightField& w, double b) {
  const LatticeBox& box = w.box();
  std::vector<double> m(box.vertex_count(), 0.0);
  for (const auto& [lower, axis] : box.edges()) {
    const double excess = std::max(0.0, w.weight(lower, axis) - b);
    m[lower] += excess;
    m[lower + box.stride(axis)] += excess;
  }
  return m;
}

}  // namespace fpp
