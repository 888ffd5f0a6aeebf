#pragma once

#include "fpp/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpp {

enum class DistributionKind { deterministic, two_point, uniform, exponential, finite };

/// Integrability class of an edge law. Bounded laws have all exponential moments.
enum class MomentClass { bounded, all_exponential_moments, min_moment_d_plus_xi, none };

std::string to_string(DistributionKind k);
std::string to_string(MomentClass m);

struct Atom {
  double value = 0.0;
  Rational probability;
};

/// Law of a single edge passage time. Continuous laws may carry a cap b, in
/// which case the law is that of min(tau, b).
class EdgeDistribution {
 public:
  static EdgeDistribution deterministic(double c);
  /// P(tau = a) = p, P(tau = b) = 1 - p.
  static EdgeDistribution two_point(double a, double b, Rational p);
  static EdgeDistribution uniform(double lo, double hi);
  static EdgeDistribution exponential(double rate, double shift = 0.0);
  static EdgeDistribution finite(std::vector<Atom> atoms);

  DistributionKind kind() const { return kind_; }
  MomentClass moment_class() const;
  bool has_all_exponential_moments() const;
  bool is_finite_support() const;

  /// Analytic infimum of the support (the constant a).
  double support_infimum() const;
  /// Supremum of the support; +inf for uncapped exponential laws.
  double support_supremum() const;
  double mean() const;

  /// Merged, sorted atoms with positive mass. Only for finite-support laws.
  std::vector<Atom> atoms() const;
  /// nu({v}) as a double; includes the cap atom of truncated continuous laws.
  double atom_mass(double v) const;
  /// Exact nu({v}) for finite-support laws.
  Rational exact_atom_mass(double v) const;
  /// nu([lo, hi]).
  double mass_between(double lo, double hi) const;
  std::optional<Rational> exact_mass_between(double lo, double hi) const;
  double cdf(double t) const;
  /// Inverse CDF for u in [0, 1). Monotone in u; the sampling map.
  double quantile(double u) const;
  /// E[exp(lambda * tau)]; +inf when divergent.
  double mgf(double lambda) const;

  /// Law of min(tau, b). Throws SchemaError when b is below the support infimum.
  EdgeDistribution truncated(double b) const;
  std::optional<double> cap() const { return cap_; }

  // Parameters, meaningful per kind.
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  const Rational& param_p() const { return p_; }
  const std::vector<Atom>& raw_atoms() const { return table_; }

  bool operator==(const EdgeDistribution& other) const;

 private:
  EdgeDistribution() = default;
  void finalize();

  DistributionKind kind_ = DistributionKind::deterministic;
  double a_ = 0.0;  // c | a | lo | rate
  double b_ = 0.0;  // b | hi | shift
  Rational p_{1};
  std::vector<Atom> table_;
  std::optional<double> cap_;
  // Sampling caches for finite-support laws.
  std::vector<double> sample_values_;
  std::vector<double> sample_cum_;
};

/// nu({0}) < p_c(d) with p_c(2) = 1/2 and p_c(3) ~ 0.2488 (numerical).
bool subcritical_atom_check(const EdgeDistribution& dist, int d);
/// Bond percolation threshold on Z^d; throws std::domain_error outside {2, 3}.
double bond_percolation_threshold(int d);

/// Returns dist.truncated(b).
EdgeDistribution truncate(const EdgeDistribution& dist, double b);

using Vertex = std::vector<int>;

/// The box [[0, n]]^d with nearest-neighbour edges. Vertices are indexed
/// row-major (last coordinate fastest); edge (v, axis) joins v and v + e_axis.
class LatticeBox {
 public:
  LatticeBox(int d, int n);

  int dim() const { return d_; }
  int side() const { return n_; }
  std::size_t vertex_count() const { return vertices_; }
  std::size_t edge_count() const;
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  std::size_t index(std::span<const int> v) const;
  Vertex vertex(std::size_t index) const;
  int coordinate(std::size_t index, int axis) const;
  bool contains(std::span<const int> v) const;

  /// Edges as (lower vertex index, axis), in canonical order (axis-major,
  /// then lower vertex index).
  std::vector<std::pair<std::size_t, int>> edges() const;

  bool operator==(const LatticeBox& o) const { return d_ == o.d_ && n_ == o.n_; }

 private:
  int d_;
  int n_;
  std::size_t vertices_;
  std::vector<std::size_t> strides_;
};

int l1_distance(std::span<const int> a, std::span<const int> b);

/// Realized passage times of every box edge. Storage is per axis, padded to
/// the vertex count; slots of non-existent edges hold +inf.
class WeightField {
 public:
  /// Zero-initialised field (all existing edges weight 0); used for
  /// enumeration and hand-built fixtures.
  WeightField(LatticeBox box, EdgeDistribution dist, std::uint64_t seed = 0);

  const LatticeBox& box() const { return box_; }
  const EdgeDistribution& distribution() const { return dist_; }
  std::uint64_t master_seed() const { return seed_; }

  double weight(std::size_t lower, int axis) const {
    return w_[static_cast<std::size_t>(axis) * box_.vertex_count() + lower];
  }
  void set_weight(std::size_t lower, int axis, double value);
  /// Weight of the edge joining two adjacent vertices.
  double edge_weight(std::span<const int> u, std::span<const int> v) const;

  /// Per-axis padded weight row (length vertex_count()).
  std::span<const double> axis_weights(int axis) const;

  /// Weights in canonical edge order.
  std::vector<double> edge_weights() const;

  /// Field with every weight replaced by min(w, b); distribution truncated.
  WeightField truncated(double b) const;

  bool operator==(const WeightField& o) const;

 private:
  friend WeightField sample_weights(const EdgeDistribution&, const LatticeBox&, std::uint64_t);

  LatticeBox box_;
  EdgeDistribution dist_;
  std::uint64_t seed_;
  std::vector<double> w_;
};

/// Deterministic per-edge uniform in [0, 1) derived from the master seed and
/// the edge's coordinates; independent of the box side.
double edge_uniform(std::uint64_t seed, std::span<const int> lower, int axis);

/// Samples every edge by inverse CDF of edge_uniform.
WeightField sample_weights(const EdgeDistribution& dist, const LatticeBox& box, std::uint64_t seed);

/// Seed of replicate `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fpp
