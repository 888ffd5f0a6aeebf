#pragma once

#include "fpp/model.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fpp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kNoVertex = std::numeric_limits<std::size_t>::max();

/// Vertex sequence; consecutive vertices differ by one unit step.
using DiscretePath = std::vector<Vertex>;

bool is_valid_path(const DiscretePath& path);
std::size_t edge_count(const DiscretePath& path);

/// Sum of edge weights along the path. Throws SchemaError when a step leaves
/// the box or is not a unit step.
double path_time(const DiscretePath& path, const WeightField& w);

/// Vertex subset of a box to which paths are confined.
class Region {
 public:
  static Region full(const LatticeBox& box);
  /// Sub-box prod_i [lo_i, hi_i].
  static Region cylinder(const LatticeBox& box, const Vertex& lo, const Vertex& hi);
  static Region vertices(const LatticeBox& box, const std::vector<Vertex>& members);

  bool contains(std::size_t index) const { return mask_[index] != 0; }
  bool contains(const Vertex& v) const;
  const LatticeBox& box() const { return box_; }
  bool is_full() const { return full_; }
  std::size_t size() const;

 private:
  Region(LatticeBox box, std::vector<std::uint8_t> mask, bool full)
      : box_(std::move(box)), mask_(std::move(mask)), full_(full) {}
  LatticeBox box_;
  std::vector<std::uint8_t> mask_;
  bool full_;
};

enum class QueueKind { automatic, binary_heap, bucket };

/// Single-source distances with geodesic predecessors. Among predecessors
/// that realise the distance exactly, the smallest vertex index settled
/// earlier is chosen.
struct ShortestPathTree {
  std::size_t source = kNoVertex;
  std::vector<double> dist;
  std::vector<std::size_t> pred;
  QueueKind queue_used = QueueKind::binary_heap;

  DiscretePath path_to(const LatticeBox& box, std::size_t target) const;
  std::size_t hops_to(std::size_t target) const;
};

/// True when every finite weight is a nonnegative integer <= max_weight.
bool has_small_integer_weights(const WeightField& w, double max_weight = 4096.0);

ShortestPathTree shortest_path_tree(const WeightField& w, std::size_t source, const Region* region = nullptr,
                                    QueueKind queue = QueueKind::automatic);

/// Distances from several weighted sources at once: d(v) = min_s init[s] + T(s, v).
std::vector<double> multi_source_distances(const WeightField& w, const std::vector<double>& init,
                                           const Region* region = nullptr);

struct PassageResult {
  double time = kInf;
  std::optional<DiscretePath> geodesic;
};

/// T_A(x, y): shortest passage time over paths inside A. +inf when x and y are
/// disconnected in A. Throws SchemaError when x or y is not in A.
PassageResult restricted_passage_time(const Region& region, const Vertex& x, const Vertex& y, const WeightField& w,
                                      bool want_geodesic = false, QueueKind queue = QueueKind::automatic);

/// Full-box passage time.
double passage_time(const WeightField& w, const Vertex& x, const Vertex& y);

/// (1/n) T(floor(n x), floor(n y)) for grid sources; one tree per source.
class RescaledMetric {
 public:
  /// Rows for every vertex of the box.
  explicit RescaledMetric(const WeightField& w, int threads = 0);
  /// Rows for the listed source vertices only.
  RescaledMetric(const WeightField& w, std::vector<std::size_t> sources, int threads = 0);

  int n() const { return n_; }
  const LatticeBox& box() const { return box_; }
  const std::vector<std::size_t>& sources() const { return sources_; }

  /// Value between grid vertices (source must be one of the rows).
  double grid(std::size_t source, std::size_t target) const;
  /// Value at points of [0, 1]^d.
  double operator()(const std::vector<double>& x, const std::vector<double>& y) const;
  /// Raw row of box passage times (not rescaled).
  const std::vector<double>& row(std::size_t source) const;

  /// CSV: header "source,target,value"; rows by source row then target index.
  void write_csv(std::ostream& os) const;

 private:
  LatticeBox box_;
  int n_;
  std::vector<std::size_t> sources_;
  std::vector<std::size_t> row_of_;
  std::vector<std::vector<double>> rows_;
};

/// Grid vertex floor(n x), clamped to the box.
Vertex grid_vertex(const LatticeBox& box, const std::vector<double>& x);

/// Continuous extension of the truncated box metric to [0, 1]^d: interior
/// edge points are reached along their edge at the edge's speed, and any two
/// points are joined by a straight move at speed b when that is cheaper.
struct GapReport;
struct GapOptions;

class ContinuousMetric {
 public:
  /// w must already be truncated at b.
  ContinuousMetric(const WeightField& w, double b);

  double b() const { return b_; }
  int n() const { return box_.side(); }

  /// Rescaled value for x, y in [0, 1]^d.
  double operator()(const std::vector<double>& x, const std::vector<double>& y) const;

  /// Values from x to each of ys (shares one search).
  std::vector<double> from(const std::vector<double>& x, const std::vector<std::vector<double>>& ys) const;

 private:
  friend GapReport uniform_gap(const WeightField&, double, const GapOptions&);
  // Access cost (box units) from box point p to every vertex.
  std::vector<double> access(const std::vector<double>& p) const;

  WeightField w_;
  LatticeBox box_;
  double b_;
};

struct GapReport {
  double gap = 0.0;
  double bound = 0.0;  // 2 b d / n
  std::size_t points = 0;
  std::size_t pairs = 0;
  std::vector<double> worst_x;
  std::vector<double> worst_y;
};

struct GapOptions {
  std::size_t lattice_points = 96;  // all vertices when the box has no more
  std::size_t midpoints = 48;
  std::size_t random_points = 48;
  std::uint64_t seed = 1;
  bool grid_only = false;  // lattice points only
  int threads = 0;
};

/// Sup of |T-hat_n^(b) - T-tilde_n| over all ordered pairs of an evaluation
/// set made of lattice points, edge midpoints and seeded random points.
GapReport uniform_gap(const WeightField& w, double b, const GapOptions& options = {});

/// d paths from x to y, pairwise vertex-disjoint except at x and y, each of
/// edge count |x - y|_1 or |x - y|_1 + 2.
std::vector<DiscretePath> disjoint_paths(const Vertex& x, const Vertex& y, const LatticeBox& box);

/// Empty string when the paths satisfy the disjoint-paths contract,
/// otherwise the first violation.
std::string validate_disjoint_paths(const Vertex& x, const Vertex& y, const LatticeBox& box,
                                    const std::vector<DiscretePath>& paths);

struct HubTarget {
  std::size_t target = 0;
  int distance = 0;          // |x - y|_1
  double best_time = 0.0;    // min time over walks with <= 2|x-y|_1 + 4 steps
  double time_slack = 0.0;   // kappa |x-y|_1 - best_time
  int min_hops = -1;         // fewest steps meeting the time budget; -1 if none
  int hop_slack = 0;         // (2|x-y|_1 + 4) - min_hops, or -1 when no walk meets the budget
  bool pass = false;
};

struct HubReport {
  Vertex x;
  double kappa = 0.0;
  bool verdict = false;
  double worst_time_slack = kInf;
  int worst_hop_slack = std::numeric_limits<int>::max();
  std::size_t failing_targets = 0;
  std::vector<HubTarget> targets;
};

/// Hub event at x: every y has a path with time <= kappa |x-y|_1 and at most
/// 2|x-y|_1 + 4 edges. Exact hop-bounded dynamic programme.
HubReport hub_check(const Vertex& x, const WeightField& w, double kappa);

struct GeodesicLengthStats {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> lengths;  // edge count of the chosen geodesic per pair
  std::size_t max_length = 0;
  std::vector<double> ladder;          // L values
  std::vector<std::uint8_t> exceeds;   // max_length >= L n
};

/// Geodesic edge counts in the field truncated at b (b = +inf: no
/// truncation) for the given vertex pairs. With positive weights the count is
/// the longest geodesic between the pair; with zero weights present it is the
/// length of the tie-broken geodesic.
GeodesicLengthStats geodesic_length_stats(const WeightField& w, double b,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                          const std::vector<double>& ladder);

/// All corner pairs of the box plus `extra` seeded random pairs.
std::vector<std::pair<std::size_t, std::size_t>> default_geodesic_pairs(const LatticeBox& box, std::size_t extra,
                                                                        std::uint64_t seed);

struct GeodesicFrequencyRow {
  double L = 0.0;
  std::size_t hits = 0;
  std::size_t samples = 0;
  double frequency = 0.0;
};

/// Frequency over `samples` fields of {max geodesic length >= L n}.
std::vector<GeodesicFrequencyRow> geodesic_length_frequencies(const EdgeDistribution& dist, const LatticeBox& box,
                                                              double b, const std::vector<double>& ladder,
                                                              std::size_t samples, std::uint64_t seed,
                                                              std::size_t extra_pairs = 8, int threads = 0);

/// M_v = sum over edges e at v of (tau_e - b)^+.
std::vector<double> vertex_excess(const WeightField& w, double b);

}  // namespace fpp
