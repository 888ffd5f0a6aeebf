#pragma once

#include "fpp/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fpp {

using Point = std::vector<double>;

/// g(u) = sum_i w_i |u_i| with positive weights.
class WeightedL1 {
 public:
  WeightedL1() = default;
  explicit WeightedL1(std::vector<double> weights);
  static WeightedL1 l1(int d, double scale = 1.0);

  int dim() const { return static_cast<int>(w_.size()); }
  const std::vector<double>& weights() const { return w_; }
  double operator()(const Point& u) const;
  double distance(const Point& a, const Point& b) const;
  bool operator==(const WeightedL1& o) const { return w_ == o.w_; }

 private:
  std::vector<double> w_;
};

/// Piecewise-linear path through breakpoints, parametrised by l1 arclength
/// (speed 1 in l1, hence 1-Lipschitz).
class LipschitzPath {
 public:
  LipschitzPath() = default;
  /// At least two breakpoints; consecutive breakpoints must differ.
  explicit LipschitzPath(std::vector<Point> breakpoints);

  int dim() const { return pts_.empty() ? 0 : static_cast<int>(pts_[0].size()); }
  const std::vector<Point>& breakpoints() const { return pts_; }
  std::size_t pieces() const { return pts_.size() - 1; }
  /// l1 length, the parameter range [0, length()].
  double length() const { return cum_.back(); }
  double euclidean_length() const;
  double g_length(const WeightedL1& g) const;

  Point at(double s) const;
  std::size_t piece_at(double s) const;
  /// Arclength of breakpoint i.
  double position(std::size_t i) const { return cum_[i]; }
  const Point& start() const { return pts_.front(); }
  const Point& end() const { return pts_.back(); }
  /// Velocity on piece i: (b - a) / |b - a|_1.
  Point velocity(std::size_t i) const;

  LipschitzPath reversed() const;
  /// Restriction to [s0, s1], reparametrised from 0.
  LipschitzPath sub(double s0, double s1) const;
  /// No two pieces meet except consecutive ones at their shared breakpoint.
  bool is_injective() const;

 private:
  std::vector<Point> pts_;
  std::vector<double> cum_;
};

/// A path with a speed multiplier per piece: riding piece i costs lambda_i g.
class Highway {
 public:
  Highway() = default;
  Highway(LipschitzPath path, double lambda);
  Highway(LipschitzPath path, std::vector<double> lambdas);

  const LipschitzPath& path() const { return path_; }
  const std::vector<double>& lambdas() const { return lambda_; }
  double lambda(std::size_t piece) const { return lambda_[piece]; }

  /// sum_i lambda_i g(piece_i).
  double discounted_length(const WeightedL1& g) const;
  /// Discounted cost of riding between arclength positions s0 and s1.
  double along(const WeightedL1& g, double s0, double s1) const;
  Highway sub(double s0, double s1) const;
  Highway reversed() const;

 private:
  LipschitzPath path_;
  std::vector<double> lambda_;
};

/// Pseudometric on [0, 1]^d.
class Pseudometric {
 public:
  virtual ~Pseudometric() = default;
  virtual int dim() const = 0;
  virtual double operator()(const Point& x, const Point& y) const = 0;
  /// Upper bound on the D-length of the straight segment [a, b]; +inf when unknown.
  virtual double segment_length_bound(const Point& /*a*/, const Point& /*b*/) const {
    return std::numeric_limits<double>::infinity();
  }
};

/// D = g.
class NormMetric : public Pseudometric {
 public:
  explicit NormMetric(WeightedL1 g) : g_(std::move(g)) {}
  int dim() const override { return g_.dim(); }
  double operator()(const Point& x, const Point& y) const override { return g_.distance(x, y); }
  double segment_length_bound(const Point& a, const Point& b) const override { return g_.distance(a, b); }
  const WeightedL1& norm() const { return g_; }

 private:
  WeightedL1 g_;
};

// ---------------------------------------------------------------------------
// Exact segment geometry.

struct SegmentContact {
  enum class Kind { none, point, overlap } kind = Kind::none;
  // Parameters in [0, 1] along the first segment (s) and second segment (t).
  double s0 = 0.0, s1 = 0.0;
  double t0 = 0.0, t1 = 0.0;
};

/// Contact set of segments [a0, a1] and [b0, b1] in R^d, computed in exact
/// rational arithmetic on the (dyadic) double coordinates.
SegmentContact segment_contact(const Point& a0, const Point& a1, const Point& b0, const Point& b1);

/// Empty when the paths are injective and pairwise disjoint, else a description.
std::string disjointness_violation(const std::vector<LipschitzPath>& paths);

/// Removes closed loops so that the path becomes injective.
Highway remove_loops(const Highway& h);

/// Maximal closed sub-paths of `h` at arclength distance > gap from the union
/// of `obstacles`; pieces of arclength <= gap are dropped.
std::vector<Highway> cut_against(const Highway& h, const std::vector<LipschitzPath>& obstacles, double gap);

// ---------------------------------------------------------------------------

/// Base norm plus discounted highways. D(x, y) is the least cost of routes
/// that move off-road at cost g and ride highways at cost lambda g.
class NormPlusHighways : public Pseudometric {
 public:
  /// Throws SchemaError unless highways are injective, pairwise disjoint,
  /// inside [0, 1]^d, with lambda in (0, 1] and discounted length at most the
  /// g-distance of their endpoints.
  NormPlusHighways(WeightedL1 g, std::vector<Highway> highways, int access_resolution = 8);

  int dim() const override { return g_.dim(); }
  const WeightedL1& norm() const { return g_; }
  const std::vector<Highway>& highways() const { return highways_; }
  int access_resolution() const { return access_resolution_; }
  std::size_t node_count() const { return nodes_.size(); }

  double operator()(const Point& x, const Point& y) const override;
  /// D(x, y) for each y; shares the work for x.
  std::vector<double> row(const Point& x, const std::vector<Point>& ys) const;
  double segment_length_bound(const Point& a, const Point& b) const override;

  /// A D-geodesic from x to y as a polyline with per-piece speeds (1 off-road).
  Highway geodesic(const Point& x, const Point& y) const;

  struct Location {
    std::size_t highway = 0;
    std::size_t piece = 0;
    double s = 0.0;          // arclength position on the highway
    bool at_breakpoint = false;
  };
  std::vector<Location> locate(const Point& z, double tol = 1e-12) const;

 private:
  struct Node {
    Point p;
    std::vector<std::pair<std::size_t, double>> on;  // (highway, arclength)
  };
  struct Transfer {
    Point p;
    std::size_t highway;
    double s;
    double off;  // g cost from the query point
  };
  struct Query {
    std::vector<double> entry;                // cost to each static node
    std::vector<std::ptrdiff_t> entry_via;    // transfer index, -1 for direct
    std::vector<Transfer> transfers;
  };

  Query prepare(const Point& x) const;
  std::vector<double> spread(const Query& q) const;
  double along(std::size_t h, double s0, double s1) const { return highways_[h].along(g_, s0, s1); }
  double edge_cost(std::size_t a, std::size_t b) const;
  void check_point(const Point& x) const;

  WeightedL1 g_;
  std::vector<Highway> highways_;
  int access_resolution_;
  std::vector<Node> nodes_;
  // Static nodes of each highway sorted by arclength.
  std::vector<std::vector<std::pair<double, std::size_t>>> order_;
  std::vector<double> dist_;  // all-pairs, row-major
};

/// Values of a pseudometric on the grid (1/m)[[0, m]]^d; evaluation at other
/// points uses the nearest grid point.
class GridPseudometric : public Pseudometric {
 public:
  GridPseudometric(int d, int m, std::vector<double> table);
  static GridPseudometric sample(const Pseudometric& D, int m);

  int dim() const override { return d_; }
  int resolution() const { return m_; }
  std::size_t point_count() const { return count_; }
  Point point(std::size_t i) const;
  std::size_t nearest(const Point& x) const;
  double grid_value(std::size_t i, std::size_t j) const { return table_[i * count_ + j]; }
  double operator()(const Point& x, const Point& y) const override;

  /// Empty when symmetric, zero on the diagonal and triangle inequality holds
  /// on every grid triple (within tol), else the first violation.
  std::string check_axioms(double tol = 0.0) const;
  /// |D(x,y) - D(x',y')| <= g(x-x') + g(y-y') on all grid quadruples sharing
  /// one endpoint (within tol).
  std::string check_equicontinuity(const WeightedL1& g, double tol = 0.0) const;

 private:
  int d_;
  int m_;
  std::size_t count_;
  std::vector<double> table_;
};

// ---------------------------------------------------------------------------
// Calculus along paths.

struct LengthResult {
  double value = 0.0;  // supremum estimate (subdivision sum)
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  int refinements = 0;
  std::size_t evaluations = 0;
};

/// D-length of gamma as a supremum over refined subdivisions. Intervals are
/// bisected until the subdivision sum meets the segment bounds of D, or
/// until successive dyadic refinements agree within rel_tol when D has no
/// bounds. Throws ConvergenceError with the last bracket after max_depth.
LengthResult d_length(const Pseudometric& D, const LipschitzPath& gamma, double rel_tol = 1e-9, int max_depth = 48);

struct DerivativeResult {
  double value = 0.0;
  double forward = 0.0;
  double backward = 0.0;
  double spread = 0.0;  // ladder spread of the symmetric estimates
  bool differentiable = true;
};

/// Metric derivative of gamma (l1 arclength parametrisation) at t, from a
/// ladder of difference quotients with Richardson extrapolation.
DerivativeResult metric_derivative(const Pseudometric& D, const LipschitzPath& gamma, double t, double h0 = 1e-2,
                                   int levels = 8, double tol = 1e-7);

struct GradientResult {
  enum class Kind { off_highway, on_highway, boundary, probe_upper_bound };
  double value = 0.0;
  Kind kind = Kind::off_highway;
  std::string warning;
};

GradientResult gradient_by_paths(const NormPlusHighways& D, const Point& z, const Point& u);
/// Straight-probe value D(z, z + t u) / t at the grid scale; an upper bound only.
GradientResult gradient_by_paths(const GridPseudometric& D, const Point& z, const Point& u);

// ---------------------------------------------------------------------------
// HW recursion.

/// HW(g; sigma_1..sigma_K) with D(sigma(s), sigma(t)) taken as the discounted
/// along-path length. Each highway's (s, t) minimum runs over an access set:
/// breakpoints, P uniform points, and points aligned coordinatewise with the
/// grid (1/m)Z and with other highways' breakpoints.
class HwChain : public Pseudometric {
 public:
  HwChain(WeightedL1 g, std::vector<Highway> highways, int grid_m = 8, int P = 8);

  int dim() const override { return g_.dim(); }
  std::size_t levels() const { return highways_.size(); }
  const std::vector<Highway>& highways() const { return highways_; }
  const WeightedL1& norm() const { return g_; }
  int access_points() const { return P_; }
  int grid_resolution() const { return m_; }

  double operator()(const Point& x, const Point& y) const override { return value(x, y, levels()); }
  /// HW with the first K highways.
  double value(const Point& x, const Point& y, std::size_t K) const;
  /// values[k][i * n + j] = HW_k(points[i], points[j]) for k = 0..K.
  std::vector<std::vector<double>> level_tables(const std::vector<Point>& points) const;

 private:
  struct Trace {
    std::vector<std::vector<double>> r;  // r[k]: HW_k(x, a) over all access points
    std::vector<std::vector<double>> w;  // w[k-1]: entry-to-exit costs on highway k
  };
  Trace trace(const Point& x) const;

  WeightedL1 g_;
  std::vector<Highway> highways_;
  int m_;
  int P_;
  std::vector<Point> access_;
  std::vector<std::vector<std::size_t>> members_;          // access indices of highway k
  std::vector<std::vector<double>> along_;                 // |I_k| x |I_k|
  std::vector<std::vector<double>> blocks_;                // S_{k-1}[I_k, :]
  std::vector<std::vector<double>> coords_;                // access coordinates by axis
};

struct HwInsertOptions {
  int grid_m = 8;
  int P = 8;
  int max_doublings = 4;
  double tol = 1e-9;
  bool validate = true;
};

/// Appends sigma to the chain, doubling the access resolution until the
/// values on the evaluation grid change by at most tol. Throws SchemaError
/// when sigma fails the geodesy check against `target`.
HwChain hw_insert(const HwChain& chain, const Highway& sigma, const Pseudometric& target,
                  const HwInsertOptions& options = {});

/// Geodesy check at access resolution: along-path cost between access points
/// versus target distance. Empty when within tol (relative), else a message.
std::string geodesy_violation(const Highway& sigma, const WeightedL1& g, const Pseudometric& target, int P,
                              double tol = 1e-9);

// ---------------------------------------------------------------------------

struct NetworkOptions {
  std::size_t K_max = 12;
  double tolerance = 1e-3;
  double gap = 1e-6;
  int eval_m = 8;
  int P = 8;
  std::size_t max_candidates = 256;
  std::vector<Highway> seeds;
  bool validate_geodesics = true;
};

struct HighwayNetwork {
  std::vector<Highway> highways;
  std::vector<double> diagnostics;  // sup over grid pairs of HW_K - D, K = 0..size
  bool converged = false;
  int eval_m = 8;
  int P = 8;
  std::size_t candidates_used = 0;
};

/// Highway network of D from seeds and a Halton sequence of endpoint pairs:
/// geodesics are loop-erased and cut against earlier highways. The network
/// is truncated at the first level past the seeds whose diagnostic is within
/// tolerance.
HighwayNetwork build_highway_network(const NormPlusHighways& D, const NetworkOptions& options = {});

/// Sup over pairs of grid points of HW_K - D for K = 0..levels.
std::vector<double> network_diagnostics(const HwChain& chain, const Pseudometric& D, int eval_m);

/// Evaluation grid (1/m)[[0, m]]^d.
std::vector<Point> grid_points(int d, int m);

// ---------------------------------------------------------------------------

/// Integrand phi(z, unit tangent) for H^1 integration.
using SetIntegrand = std::function<double(const Point&, const Point&)>;

/// sum over linear pieces of int phi(z, e) dH^1(z) with e the Euclidean unit
/// tangent, by Gauss-Legendre quadrature of the given order. Throws
/// SchemaError when two pieces overlap on a set of positive length.
double hausdorff_integrate(const std::vector<LipschitzPath>& paths, const SetIntegrand& phi, int order = 8);

}  // namespace fpp
