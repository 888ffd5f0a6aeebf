#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fpp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.96);

/// sqrt(p (1 - p) / n).
double binomial_se(double p, std::size_t n);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  /// mean +- z * stddev / sqrt(count)
  Interval ci;
};

Summary summarize(std::span<const double> xs, double z = 1.96);

/// Uniform double in [0, 1) from a 64-bit state (splitmix64 step).
double uniform01(std::uint64_t& state);

/// Point `index` of the Halton sequence in `dim` dimensions (bases 2, 3, 5, ...).
std::vector<double> halton_point(std::size_t index, std::size_t dim);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fpp
