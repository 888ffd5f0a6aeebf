#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/passage_time.hpp"
#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fpp {

namespace {

bool all_positive(const WeightField& w) {
  for (const auto& [lower, axis] : w.box().edges()) {
    if (!(w.weight(lower, axis) > 0.0)) return false;
  }
  return true;
}

// Longest chain of tight edges from the tree source to every vertex.
std::vector<std::size_t> longest_geodesics(const WeightField& w, const ShortestPathTree& tree) {
  const LatticeBox& box = w.box();
  const std::size_t count = box.vertex_count();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tree.dist[a] < tree.dist[b]; });
  std::vector<std::size_t> len(count, 0);
  for (std::size_t v : order) {
    if (std::isinf(tree.dist[v]) || v == tree.source) continue;
    std::size_t best = 0;
    for (int axis = 0; axis < box.dim(); ++axis) {
      const std::size_t s = box.stride(axis);
      const int c = box.coordinate(v, axis);
      if (c > 0 && tree.dist[v - s] + w.weight(v - s, axis) == tree.dist[v]) best = std::max(best, len[v - s] + 1);
      if (c < box.side() && tree.dist[v + s] + w.weight(v, axis) == tree.dist[v]) best = std::max(best, len[v + s] + 1);
    }
    len[v] = best;
  }
  return len;
}

}  // namespace

GeodesicLengthStats geodesic_length_stats(const WeightField& w, double b,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                          const std::vector<double>& ladder) {
  const WeightField wb = std::isinf(b) ? w : w.truncated(b);
  const LatticeBox& box = wb.box();
  const bool positive = all_positive(wb);
  GeodesicLengthStats st;
  st.pairs = pairs;
  st.ladder = ladder;
  st.lengths.assign(pairs.size(), 0);
  std::map<std::size_t, std::vector<std::size_t>> by_source;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].first >= box.vertex_count() || pairs[k].second >= box.vertex_count())
      throw SchemaError("geodesic_length_stats: vertex outside the box");
    by_source[pairs[k].first].push_back(k);
  }
  for (const auto& [source, ks] : by_source) {
    const ShortestPathTree tree = shortest_path_tree(wb, source);
    std::vector<std::size_t> longest;
    if (positive) longest = longest_geodesics(wb, tree);
    for (std::size_t k : ks) {
      const std::size_t t = pairs[k].second;
      st.lengths[k] = positive ? longest[t] : tree.hops_to(t);
    }
  }
  for (std::size_t len : st.lengths) st.max_length = std::max(st.max_length, len);
  for (double L : ladder) {
    st.exceeds.push_back(static_cast<double>(st.max_length) >= L * box.side() ? 1 : 0);
  }
  return st;
}

std::vector<std::pair<std::size_t, std::size_t>> default_geodesic_pairs(const LatticeBox& box, std::size_t extra,
                                                                        std::uint64_t seed) {
  std::vector<std::size_t> corners;
  for (std::size_t v = 0; v < box.vertex_count(); ++v) {
    bool corner = true;
    for (int k = 0; k < box.dim() && corner; ++k) {
      const int c = box.coordinate(v, k);
      corner = (c == 0 || c == box.side());
    }
    if (corner) corners.push_back(v);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a : corners) {
    for (std::size_t b : corners) {
      if (a != b) pairs.emplace_back(a, b);
    }
  }
  std::uint64_t state = splitmix64(seed ^ 0x51ed270b27ULL);
  const auto count = static_cast<double>(box.vertex_count());
  for (std::size_t k = 0; k < extra; ++k) {
    const auto a = std::min(box.vertex_count() - 1, static_cast<std::size_t>(uniform01(state) * count));
    const auto b = std::min(box.vertex_count() - 1, static_cast<std::size_t>(uniform01(state) * count));
    pairs.emplace_back(a, b);
  }
  return pairs;
}

std::vector<GeodesicFrequencyRow> geodesic_length_frequencies(const EdgeDistribution& dist, const LatticeBox& box,
                                                              double b, const std::vector<double>& ladder,
                                                              std::size_t samples, std::uint64_t seed,
                                                              std::size_t extra_pairs, int threads) {
  const auto pairs = default_geodesic_pairs(box, extra_pairs, seed);
  std::vector<std::vector<std::uint8_t>> hits(samples);
  parallel_for(
      samples,
      [&](std::size_t s) {
        const WeightField w = sample_weights(dist, box, derive_seed(seed, s));
        hits[s] = geodesic_length_stats(w, b, pairs, ladder).exceeds;
      },
      threads);
  std::vector<GeodesicFrequencyRow> rows;
  for (std::size_t l = 0; l < ladder.size(); ++l) {
    GeodesicFrequencyRow r;
    r.L = ladder[l];
    r.samples = samples;
    for (const auto& h : hits) r.hits += h[l];
    r.frequency = samples == 0 ? 0.0 : static_cast<double>(r.hits) / static_cast<double>(samples);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fpp
