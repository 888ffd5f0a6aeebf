#include "fpp/errors.hpp"
#include "fpp/model.hpp"

#include <cstdlib>

namespace fpp {

LatticeBox::LatticeBox(int d, int n) : d_(d), n_(n) {
  if (d < 1) throw SchemaError("LatticeBox: dimension must be >= 1");
  if (n < 1) throw SchemaError("LatticeBox: side must be >= 1");
  strides_.assign(static_cast<std::size_t>(d), 1);
  std::size_t count = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    strides_[static_cast<std::size_t>(axis)] = count;
    count *= static_cast<std::size_t>(n + 1);
  }
  vertices_ = count;
}

std::size_t LatticeBox::edge_count() const {
  // d * n * (n + 1)^(d - 1)
  std::size_t per_axis = static_cast<std::size_t>(n_);
  for (int i = 1; i < d_; ++i) per_axis *= static_cast<std::size_t>(n_ + 1);
  return static_cast<std::size_t>(d_) * per_axis;
}

std::size_t LatticeBox::index(std::span<const int> v) const {
  if (!contains(v)) throw SchemaError("LatticeBox::index: vertex outside the box");
  std::size_t idx = 0;
  for (int axis = 0; axis < d_; ++axis) {
    idx += static_cast<std::size_t>(v[static_cast<std::size_t>(axis)]) * strides_[static_cast<std::size_t>(axis)];
  }
  return idx;
}

int LatticeBox::coordinate(std::size_t index, int axis) const {
  return static_cast<int>((index / strides_[static_cast<std::size_t>(axis)]) % static_cast<std::size_t>(n_ + 1));
}

Vertex LatticeBox::vertex(std::size_t index) const {
  Vertex v(static_cast<std::size_t>(d_));
  for (int axis = 0; axis < d_; ++axis) v[static_cast<std::size_t>(axis)] = coordinate(index, axis);
  return v;
}

bool LatticeBox::contains(std::span<const int> v) const {
  if (v.size() != static_cast<std::size_t>(d_)) return false;
  for (int c : v) {
    if (c < 0 || c > n_) return false;
  }
  return true;
}

std::vector<std::pair<std::size_t, int>> LatticeBox::edges() const {
  std::vector<std::pair<std::size_t, int>> out;
  out.reserve(edge_count());
  for (int axis = 0; axis < d_; ++axis) {
    for (std::size_t v = 0; v < vertices_; ++v) {
      if (coordinate(v, axis) < n_) out.emplace_back(v, axis);
    }
  }
  return out;
}

int l1_distance(std::span<const int> a, std::span<const int> b) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

}  // namespace fpp
