#pragma once

#include "fpp/model.hpp"
#include "fpp/oracle.hpp"
#include "fpp/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fpp {

enum class RateMethod { monte_carlo, exact_oracle, cramer_bound, crude_bound };
std::string to_string(RateMethod m);
RateMethod rate_method_from_string(const std::string& s);

/// -(1/n) log P(T_box(0, n x) <= n zeta), with x taken componentwise in
/// absolute value (the box is [0, n max|x_i|]^d).
struct RatePoint {
  Vertex x;
  double zeta = 0.0;
  int n = 1;
  double estimate = 0.0;
  Interval ci;
  RateMethod method = RateMethod::monte_carlo;
  bool censored = false;  // zero hits: estimate is a one-sided lower bound
  std::size_t hits = 0;
  std::size_t samples = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultBoxBudget = std::size_t{1} << 22;

/// Monte-Carlo estimate with a Wilson interval mapped to the rate scale.
/// Throws SchemaError for zeta < a |x|_1 and BudgetExceeded for boxes above
/// `box_budget` vertices.
RatePoint estimate_rate_point(const EdgeDistribution& dist, const Vertex& x, double zeta, int n, std::size_t samples,
                              std::uint64_t seed, int threads = 0, std::size_t box_budget = kDefaultBoxBudget);

/// Same quantity from exact enumeration; zero-width interval.
RatePoint exact_rate_point(const EdgeDistribution& dist, const Vertex& x, double zeta, int n,
                           std::uint64_t cap = kDefaultEnumerationCap, int threads = 0);

struct FeketeEnvelope {
  RatePoint best;                     // inf over the ladder
  std::vector<double> running;        // running infimum of the estimates
};

/// Running infimum over an n-ladder with common (x, zeta). Censored points
/// contribute their lower bounds to the interval only.
FeketeEnvelope fekete_envelope(const std::vector<RatePoint>& ladder);

struct SurfaceCell {
  double zeta = 0.0;   // per unit of the primitive ray
  double value = 0.0;  // per unit of the primitive ray
  Interval ci;
  std::string provenance;
};

struct SurfaceRay {
  Vertex ray;  // primitive, nonnegative
  std::vector<SurfaceCell> cells;  // increasing zeta
};

struct SurfaceChange {
  Vertex ray;
  double zeta = 0.0;
  double before = 0.0;
  double after = 0.0;
  std::string step;
};

struct SurfaceLookup {
  double value = 0.0;
  bool below_grid = false;  // zeta under the smallest tabulated value: not extrapolated
  bool above_grid = false;
};

/// Tabulated rate surface on primitive rays; values at c * ray follow from
/// absolute homogeneity and at sign-flipped directions from symmetry.
class RateSurface {
 public:
  RateSurface() = default;
  explicit RateSurface(std::vector<SurfaceRay> rays) : rays_(std::move(rays)) {}
  RateSurface(std::vector<SurfaceRay> rays, std::vector<SurfaceChange> changes, std::vector<RatePoint> censored)
      : rays_(std::move(rays)), changes_(std::move(changes)), censored_(std::move(censored)) {}

  const std::vector<SurfaceRay>& rays() const { return rays_; }
  const SurfaceRay* find(const Vertex& direction) const;
  bool has_direction(const Vertex& x) const;
  /// Throws SchemaError when the direction has no tabulated ray.
  SurfaceLookup lookup(const Vertex& x, double zeta) const;
  const std::vector<SurfaceChange>& changes() const { return changes_; }
  const std::vector<RatePoint>& censored() const { return censored_; }
  /// Empty when every ray is nonnegative, non-increasing and convex in zeta.
  std::string invariant_violation() const;

 private:
  friend RateSurface extend_surface(const std::vector<RatePoint>& raw);
  std::vector<SurfaceRay> rays_;
  std::vector<SurfaceChange> changes_;
  std::vector<RatePoint> censored_;
};

/// Primitive nonnegative ray of x and the scale c with |x| = c ray.
std::pair<Vertex, int> primitive_ray(const Vertex& x);

/// Symmetrisation, ray homogenisation, monotone envelope and lower convex
/// envelope along zeta. Censored points are kept aside. Throws SchemaError
/// listing duplicate (x, zeta, n) keys whose intervals are disjoint; points
/// differing only in n are merged by their infimum.
RateSurface extend_surface(const std::vector<RatePoint>& raw);

struct TimeConstantEstimate {
  Vertex x;
  std::vector<int> ns;
  std::vector<Summary> per_n;  // T(0, n x) / n
  double mu = 0.0;
  Interval ci;
  Interval bracket;  // [a |x|_1, E[tau] |x|_1]
};

TimeConstantEstimate estimate_time_constant(const EdgeDistribution& dist, const Vertex& x, const std::vector<int>& ns,
                                            std::size_t samples, std::uint64_t seed, int threads = 0,
                                            std::size_t box_budget = kDefaultBoxBudget);

struct ZeroSetReport {
  bool pass = true;
  std::size_t zero_checked = 0;
  std::size_t positive_checked = 0;
  std::size_t trend_checked = 0;
  std::vector<std::string> failures;
};

/// Compares the surface on the ray of tc.x with the estimated time constant:
/// interval lower ends are at most zero_tol for zeta >= mu + 2 ci, intervals
/// exclude 0 for zeta <= mu - margin, and values decrease on (a |x|_1, mu].
/// At finite n the rate above mu is positive; zero_tol = log(2) / n accepts
/// cells whose event is typical at scale n. Throws SchemaError when the ray
/// is absent.
ZeroSetReport zero_set_check(const RateSurface& surface, const TimeConstantEstimate& tc, double a, double margin,
                             double zero_tol = 1e-12);

}  // namespace fpp
