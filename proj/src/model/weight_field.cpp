#include "fpp/errors.hpp"
#include "fpp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master ^ 0x5851f42d4c957f2dULL) + index * 0xd1342543de82ef95ULL);
}

double edge_uniform(std::uint64_t seed, std::span<const int> lower, int axis) {
  std::uint64_t h = splitmix64(seed ^ 0x2545f4914f6cdd1dULL);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(axis) + 1));
  for (int c : lower) {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
  }
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

WeightField::WeightField(LatticeBox box, EdgeDistribution dist, std::uint64_t seed)
    : box_(std::move(box)), dist_(std::move(dist)), seed_(seed) {
  const std::size_t v = box_.vertex_count();
  w_.assign(static_cast<std::size_t>(box_.dim()) * v, std::numeric_limits<double>::infinity());
  for (const auto& [lower, axis] : box_.edges()) w_[static_cast<std::size_t>(axis) * v + lower] = 0.0;
}

void WeightField::set_weight(std::size_t lower, int axis, double value) {
  if (axis < 0 || axis >= box_.dim() || lower >= box_.vertex_count() || box_.coordinate(lower, axis) >= box_.side())
    throw SchemaError("WeightField::set_weight: edge outside the box");
  if (!(value >= 0.0)) throw SchemaError("WeightField::set_weight: negative weight");
  w_[static_cast<std::size_t>(axis) * box_.vertex_count() + lower] = value;
}

double WeightField::edge_weight(std::span<const int> u, std::span<const int> v) const {
  if (!box_.contains(u) || !box_.contains(v) || l1_distance(u, v) != 1)
    throw SchemaError("edge_weight: not an edge of the box");
  for (int axis = 0; axis < box_.dim(); ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    if (u[a] != v[a]) {
      const auto& lower = (u[a] < v[a]) ? u : v;
      return weight(box_.index(lower), axis);
    }
  }
  return 0.0;
}

std::span<const double> WeightField::axis_weights(int axis) const {
  const std::size_t v = box_.vertex_count();
  return {w_.data() + static_cast<std::size_t>(axis) * v, v};
}

std::vector<double> WeightField::edge_weights() const {
  std::vector<double> out;
  out.reserve(box_.edge_count());
  for (const auto& [lower, axis] : box_.edges()) out.push_back(weight(lower, axis));
  return out;
}

WeightField WeightField::truncated(double b) const {
  WeightField out(box_, dist_.truncated(b), seed_);
  for (std::size_t i = 0; i < w_.size(); ++i) {
    out.w_[i] = std::isinf(w_[i]) ? w_[i] : std::min(w_[i], b);
  }
  return out;
}

bool WeightField::operator==(const WeightField& o) const {
  return box_ == o.box_ && seed_ == o.seed_ && dist_ == o.dist_ && w_ == o.w_;
}

WeightField sample_weights(const EdgeDistribution& dist, const LatticeBox& box, std::uint64_t seed) {
  WeightField field(box, dist, seed);
  Vertex v(static_cast<std::size_t>(box.dim()));
  const std::size_t count = box.vertex_count();
  for (int axis = 0; axis < box.dim(); ++axis) {
    double* row = field.w_.data() + static_cast<std::size_t>(axis) * count;
    for (std::size_t lower = 0; lower < count; ++lower) {
      if (box.coordinate(lower, axis) >= box.side()) continue;
      for (int i = 0; i < box.dim(); ++i) v[static_cast<std::size_t>(i)] = box.coordinate(lower, i);
      row[lower] = dist.quantile(edge_uniform(seed, v, axis));
    }
  }
  return field;
}

}  // namespace fpp
