#pragma once

#include "fpp/model.hpp"
#include "fpp/passage_time.hpp"
#include "fpp/rational.hpp"
#include "fpp/stats.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fpp {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// An event on weight fields of a fixed box.
class EventSpec {
 public:
  enum class Kind { passage_at_most, ld_lower, hub, custom };

  /// {T_A(x, y) <= t}; full box when region is empty.
  static EventSpec passage_at_most(Vertex x, Vertex y, double t, std::optional<Region> region = std::nullopt);
  /// {T(u, v) <= threshold[u * V + v] for all vertex pairs}; thresholds in box units.
  static EventSpec ld_lower(std::vector<double> thresholds, std::string label = "ld-lower");
  static EventSpec hub(Vertex x, double kappa);
  static EventSpec custom(std::string label, std::function<bool(const WeightField&)> predicate, bool decreasing);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  /// True when the event is known to be decreasing in every edge weight.
  bool decreasing() const { return decreasing_; }
  bool operator()(const WeightField& w) const { return predicate_(w); }

 private:
  EventSpec() = default;
  Kind kind_ = Kind::custom;
  std::string label_;
  bool decreasing_ = false;
  std::function<bool(const WeightField&)> predicate_;
};

struct ExactProbability {
  Rational p;
  std::uint64_t configurations = 0;

  BigInt numerator() const { return boost::multiprecision::numerator(p); }
  BigInt denominator() const { return boost::multiprecision::denominator(p); }
  double value() const { return to_double(p); }
};

/// Exact law of a real observable of the field: distinct values with exact
/// probabilities, sorted by value.
struct ExactLaw {
  std::vector<double> values;
  std::vector<Rational> probabilities;
  std::uint64_t configurations = 0;

  /// P(X <= t).
  Rational cdf(double t) const;
  /// P(X >= t).
  Rational upper(double t) const;
};

using Observable = std::function<double(const WeightField&)>;

/// Number of weight configurations of the enumerated edges (all box edges,
/// or those with both endpoints in `support`), or nullopt on overflow.
std::optional<std::uint64_t> configuration_count(const EdgeDistribution& dist, const LatticeBox& box,
                                                 const Region* support = nullptr);

/// Exact laws of several observables from a single pass over every weight
/// configuration. With `support`, only edges inside the region are enumerated
/// and the others hold the largest atom; observables must then depend on the
/// enumerated edges only. Throws BudgetExceeded above `cap` configurations
/// and SchemaError for laws without finite support.
std::vector<ExactLaw> exact_observable_laws(const std::vector<Observable>& observables, const EdgeDistribution& dist,
                                            const LatticeBox& box, std::uint64_t cap = kDefaultEnumerationCap,
                                            int threads = 0, const Region* support = nullptr);

ExactProbability exact_event_probability(const EventSpec& event, const EdgeDistribution& dist, const LatticeBox& box,
                                         std::uint64_t cap = kDefaultEnumerationCap, int threads = 0);

/// Exact law of T_A(x, y).
ExactLaw exact_passage_time_law(const EdgeDistribution& dist, const LatticeBox& box, const Vertex& x, const Vertex& y,
                                std::optional<Region> region = std::nullopt,
                                std::uint64_t cap = kDefaultEnumerationCap, int threads = 0);

struct MonteCarloFrequency {
  std::size_t hits = 0;
  std::size_t samples = 0;
  double p = 0.0;
  double se = 0.0;
  Interval ci;
};

/// Frequency of the event over fields sampled with seeds derive_seed(seed, i).
MonteCarloFrequency monte_carlo_frequency(const EventSpec& event, const EdgeDistribution& dist, const LatticeBox& box,
                                          std::size_t samples, std::uint64_t seed, int threads = 0);

struct BoundValue {
  double value = 0.0;
  std::optional<Rational> exact;
};

/// nu([a, t])^{|u - v|_1}, the single-path lower bound on
/// P(T(u, v) <= t |u - v|_1). Throws SchemaError for t below a.
BoundValue crude_lower_bound(const EdgeDistribution& dist, const Vertex& u, const Vertex& v, double t);

struct FkgReport {
  Vertex x1, x2;
  double t1 = 0.0, t2 = 0.0;
  Rational joint;       // P(T(o, o+x1+x2) <= t1 + t2)
  Rational first;       // P(T(o, o+x1) <= t1)
  Rational second;      // P(T(o+x1, o+x1+x2) <= t2), translated event
  Rational second_at_origin;  // P(T(o, o+x2) <= t2), reported only
  Rational slack;       // joint - first * second
};

/// Product inequality at base vertex o = 0 for passage times restricted to
/// the region (the full box when empty).
FkgReport fkg_supermultiplicativity_check(const EdgeDistribution& dist, const LatticeBox& box, const Vertex& x1,
                                          const Vertex& x2, double t1, double t2,
                                          std::optional<Region> region = std::nullopt,
                                          std::uint64_t cap = kDefaultEnumerationCap);

struct FkgGridReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  Rational min_slack;
  double argmin_t1 = 0.0, argmin_t2 = 0.0;
};

/// The same inequality over every (t1, t2) in the grids, from one enumeration.
FkgGridReport fkg_grid_check(const EdgeDistribution& dist, const LatticeBox& box, const Vertex& x1, const Vertex& x2,
                             const std::vector<double>& t1s, const std::vector<double>& t2s,
                             std::optional<Region> region = std::nullopt,
                             std::uint64_t cap = kDefaultEnumerationCap);

/// The strip [0, n] x [0, 1]^{d-1} inside the box of side n.
Region thin_strip(int d, int n);

/// Exact p_n = P(T_box(0, n e_1) <= n zeta) on the strip [0, n] x [0, 1]^{d-1}.
Rational thin_strip_probability(const EdgeDistribution& dist, int d, int n, double zeta,
                                std::uint64_t cap = kDefaultEnumerationCap);

/// log E[exp(-lambda tau)] computed without overflow for lambda >= 0.
double log_laplace(const EdgeDistribution& dist, double lambda);

/// Lower-tail Cramer transform sup_{lambda >= 0} (-lambda zeta - log E[e^{-lambda tau}]).
/// Returns 0 for zeta >= E[tau] and -log nu({a}) at zeta = a; throws
/// SchemaError for zeta < a.
double cramer_rate(const EdgeDistribution& dist, double zeta);

/// -1/n log P(tau_1 + ... + tau_n <= n zeta) for finite-support laws (exact convolution).
double single_path_rate(const EdgeDistribution& dist, int n, double zeta);

/// exp(-lambda eps n) E[e^{lambda tau}]^hops. Throws SchemaError when the
/// moment generating function diverges at lambda or lambda <= 0.
double chernoff_upper_tail(const EdgeDistribution& dist, double lambda, double eps, double n, double hops);

struct ChernoffOptimum {
  double lambda = 0.0;
  double bound = 1.0;
};

/// Smallest bound over the lambda grid (divergent grid points skipped).
ChernoffOptimum chernoff_optimize(const EdgeDistribution& dist, double eps, double n, double hops,
                                  const std::vector<double>& lambdas);

}  // namespace fpp
