#pragma once

#include "fpp/geometry.hpp"
#include "fpp/model.hpp"
#include "fpp/oracle.hpp"
#include "fpp/rate.hpp"
#include "fpp/stats.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

namespace fpp {

/// J(u, zeta) for a velocity u and a D-speed zeta; absolutely homogeneous.
class RateModel {
 public:
  virtual ~RateModel() = default;
  virtual double operator()(const Point& u, double zeta) const = 0;
  virtual std::string name() const = 0;
};

/// c (g(u) - zeta)^+.
class AnalyticRate : public RateModel {
 public:
  explicit AnalyticRate(WeightedL1 g, double c = 1.0) : g_(std::move(g)), c_(c) {}
  double operator()(const Point& u, double zeta) const override { return c_ * std::max(0.0, g_(u) - zeta); }
  std::string name() const override { return "analytic"; }
  double scale() const { return c_; }
  const WeightedL1& norm() const { return g_; }

 private:
  WeightedL1 g_;
  double c_;
};

/// Tabulated surface; directions are snapped to the two angularly nearest
/// rays and blended with inverse-angle weights (an approximation).
class SurfaceRate : public RateModel {
 public:
  explicit SurfaceRate(RateSurface surface);
  double operator()(const Point& u, double zeta) const override;
  std::string name() const override { return "surface"; }

 private:
  RateSurface surface_;
};

/// Sum over pieces of l1-length x J(unit velocity, lambda g(unit velocity)).
/// Throws SchemaError when the network is not injective, pairwise disjoint
/// and made of D-geodesics.
double functional_geodesic_sum(const NormPlusHighways& D, const HighwayNetwork& net, const RateModel& J);

/// H^1 integral over the highways of D of max_u J(u, gradient by paths);
/// the off-highway part is the analytic zero.
double functional_intrinsic(const NormPlusHighways& D, const RateModel& J, int order = 8);
/// Same, after validating `net` as for the geodesic sum.
double functional_intrinsic(const NormPlusHighways& D, const HighwayNetwork& net, const RateModel& J, int order = 8);

/// Sum over an injective, pairwise disjoint family of int J(gamma', |gamma'|_D) dt,
/// with the metric derivative lambda g on highway overlaps and g elsewhere.
/// Throws SchemaError when the recomputed certificate fails.
double functional_sup_lower_bound(const NormPlusHighways& D, const RateModel& J,
                                  const std::vector<LipschitzPath>& family);

struct FunctionalReport {
  double geodesic_sum = 0.0;
  double intrinsic = 0.0;
  double sup_lower_bound = 0.0;
  std::size_t family_size = 0;
  std::size_t network_size = 0;
  bool network_converged = false;
  std::vector<double> diagnostics;
  int quadrature_order = 8;
  double delta_sum_intrinsic = 0.0;
  double delta_sum_sup = 0.0;
};

/// Builds a network seeded with the highways of D and evaluates all three
/// expressions, using the network itself as the sup-formula family.
FunctionalReport functional_report(const NormPlusHighways& D, const RateModel& J, const NetworkOptions& options = {});

struct MonotonicityProbe {
  double value_first = 0.0;   // functional of D1
  double value_second = 0.0;  // functional of D2
  double margin = 0.0;
  bool strict = false;
  std::size_t pairs_checked = 0;
  double max_gap = 0.0;  // largest D2 - D1 on the sampled pairs
};

/// Requires D1 <= D2 on the evaluation grid with at least one strict pair;
/// reports whether J(D1) exceeds J(D2) by more than tol. Throws SchemaError
/// on an ordering violation or when the metrics agree on the grid.
MonotonicityProbe strict_monotonicity_probe(const NormPlusHighways& D1, const NormPlusHighways& D2,
                                            const RateModel& J, int eval_m = 8, double tol = 1e-9);

struct LdTrendRow {
  int n = 0;
  std::string method;  // "exact-oracle" or "monte-carlo"
  double p = 0.0;
  Interval p_ci;
  double rate = 0.0;  // -(1/n) log p
  Interval rate_ci;
  bool censored = false;
  std::size_t hits = 0;
  std::size_t samples = 0;
  std::uint64_t configurations = 0;
};

struct LdTrendOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultEnumerationCap;
  int threads = 0;
  int subgrid = 4;  // points per axis when sampling cell infima of D
  std::size_t box_budget = 4096;
};

/// Thresholds n (inf over the cells of u and v of D + eps) for every vertex pair of the box of side n.
std::vector<double> ld_thresholds(const Pseudometric& D, int n, double eps, int subgrid);

/// P(T(u, v) <= n (inf D + eps) for all vertex pairs) per n, exactly when
/// enumerable and by Monte Carlo otherwise.
std::vector<LdTrendRow> empirical_ld_trend(const NormPlusHighways& D, const EdgeDistribution& dist, double eps,
                                           const std::vector<int>& ns, const LdTrendOptions& options = {});

}  // namespace fpp
