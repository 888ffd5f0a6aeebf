#include "fpp/errors.hpp"
#include "fpp/passage_time.hpp"

#include <set>

namespace fpp {

std::vector<DiscretePath> disjoint_paths(const Vertex& x, const Vertex& y, const LatticeBox& box) {
  if (!box.contains(x) || !box.contains(y)) throw SchemaError("disjoint_paths: endpoint outside the box");
  if (x == y) throw SchemaError("disjoint_paths: endpoints must differ");
  const int d = box.dim();
  const int n = box.side();
  const auto du = static_cast<std::size_t>(d);

  // Normalised axis k is original axis order[k], reflected when flip[k].
  std::vector<int> order;
  std::vector<bool> flip(du, false);
  for (int axis = 0; axis < d; ++axis) {
    if (x[static_cast<std::size_t>(axis)] == y[static_cast<std::size_t>(axis)]) order.push_back(axis);
  }
  const std::size_t i0 = order.size();
  for (int axis = 0; axis < d; ++axis) {
    if (x[static_cast<std::size_t>(axis)] != y[static_cast<std::size_t>(axis)]) order.push_back(axis);
  }
  Vertex nx(du), ny(du);
  for (std::size_t k = 0; k < du; ++k) {
    const auto a = static_cast<std::size_t>(order[k]);
    const bool f = (k < i0) ? (x[a] == n) : (x[a] > y[a]);
    flip[k] = f;
    nx[k] = f ? n - x[a] : x[a];
    ny[k] = f ? n - y[a] : y[a];
  }
  auto to_box = [&](const Vertex& z) {
    Vertex out(du);
    for (std::size_t k = 0; k < du; ++k) {
      out[static_cast<std::size_t>(order[k])] = flip[k] ? n - z[k] : z[k];
    }
    return out;
  };

  // Straight lines along normalised axes in the given cyclic order.
  auto staircase = [&](std::size_t first) {
    DiscretePath path{nx};
    Vertex z = nx;
    const std::size_t m = du - i0;
    for (std::size_t step = 0; step < m; ++step) {
      const std::size_t k = i0 + (first - i0 + step) % m;
      while (z[k] < ny[k]) {
        ++z[k];
        path.push_back(z);
      }
    }
    return path;
  };

  std::vector<DiscretePath> out;
  out.reserve(du);
  const DiscretePath base = staircase(i0);
  for (std::size_t i = 0; i < i0; ++i) {
    DiscretePath path{nx};
    for (Vertex z : base) {
      ++z[i];
      path.push_back(z);
    }
    path.push_back(ny);
    out.push_back(std::move(path));
  }
  for (std::size_t i = i0; i < du; ++i) out.push_back(staircase(i));
  for (auto& path : out) {
    for (auto& z : path) z = to_box(z);
  }
  return out;
}

std::string validate_disjoint_paths(const Vertex& x, const Vertex& y, const LatticeBox& box,
                                    const std::vector<DiscretePath>& paths) {
  if (paths.size() != static_cast<std::size_t>(box.dim())) return "wrong number of paths";
  const int dist = l1_distance(x, y);
  std::set<Vertex> seen;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (!is_valid_path(p)) return "path " + std::to_string(i) + " is not a lattice path";
    if (p.front() != x || p.back() != y) return "path " + std::to_string(i) + " has wrong endpoints";
    const auto len = static_cast<int>(edge_count(p));
    if (len != dist && len != dist + 2) return "path " + std::to_string(i) + " has length " + std::to_string(len);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!box.contains(p[k])) return "path " + std::to_string(i) + " leaves the box";
      if (k == 0 || k + 1 == p.size()) continue;
      if (!seen.insert(p[k]).second) return "path " + std::to_string(i) + " shares an interior vertex";
      if (p[k] == x || p[k] == y) return "path " + std::to_string(i) + " revisits an endpoint";
    }
  }
  return {};
}

}  // namespace fpp
