#include "fpp/errors.hpp"
#include "fpp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpp {

GridPseudometric::GridPseudometric(int d, int m, std::vector<double> table)
    : d_(d), m_(m), count_(0), table_(std::move(table)) {
  if (d < 1 || m < 1) throw SchemaError("grid needs positive dimension and resolution");
  count_ = 1;
  for (int i = 0; i < d; ++i) count_ *= static_cast<std::size_t>(m + 1);
  if (table_.size() != count_ * count_) throw SchemaError("grid table has the wrong size");
}

GridPseudometric GridPseudometric::sample(const Pseudometric& D, int m) {
  const std::vector<Point> pts = grid_points(D.dim(), m);
  std::vector<double> table(pts.size() * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) table[i * pts.size() + j] = i == j ? 0.0 : D(pts[i], pts[j]);
  return GridPseudometric(D.dim(), m, std::move(table));
}

Point GridPseudometric::point(std::size_t i) const {
  Point p(static_cast<std::size_t>(d_));
  for (int k = d_ - 1; k >= 0; --k) {
    p[static_cast<std::size_t>(k)] = static_cast<double>(i % static_cast<std::size_t>(m_ + 1)) / m_;
    i /= static_cast<std::size_t>(m_ + 1);
  }
  return p;
}

std::size_t GridPseudometric::nearest(const Point& x) const {
  if (x.size() != static_cast<std::size_t>(d_)) throw SchemaError("point dimension differs from the grid");
  std::size_t idx = 0;
  for (int k = 0; k < d_; ++k) {
    const double c = std::clamp(std::round(x[static_cast<std::size_t>(k)] * m_), 0.0, static_cast<double>(m_));
    idx = idx * static_cast<std::size_t>(m_ + 1) + static_cast<std::size_t>(c);
  }
  return idx;
}

double GridPseudometric::operator()(const Point& x, const Point& y) const { return grid_value(nearest(x), nearest(y)); }

std::string GridPseudometric::check_axioms(double tol) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < count_; ++i) {
    if (grid_value(i, i) != 0.0) {
      os << "nonzero diagonal at " << i;
      return os.str();
    }
    for (std::size_t j = 0; j < count_; ++j) {
      if (grid_value(i, j) < 0.0 || std::abs(grid_value(i, j) - grid_value(j, i)) > tol) {
        os << "asymmetric or negative at (" << i << ", " << j << ")";
        return os.str();
      }
    }
  }
  for (std::size_t i = 0; i < count_; ++i)
    for (std::size_t j = 0; j < count_; ++j)
      for (std::size_t k = 0; k < count_; ++k)
        if (grid_value(i, k) > grid_value(i, j) + grid_value(j, k) + tol) {
          os << "triangle inequality fails at (" << i << ", " << j << ", " << k << ")";
          return os.str();
        }
  return {};
}

std::string GridPseudometric::check_equicontinuity(const WeightedL1& g, double tol) const {
  // With symmetry and the triangle inequality split into one endpoint at a time.
  std::vector<Point> pts(count_);
  for (std::size_t i = 0; i < count_; ++i) pts[i] = point(i);
  for (std::size_t x = 0; x < count_; ++x)
    for (std::size_t x2 = 0; x2 < count_; ++x2) {
      const double gx = g.distance(pts[x], pts[x2]);
      for (std::size_t y = 0; y < count_; ++y)
        if (std::abs(grid_value(x, y) - grid_value(x2, y)) > gx + tol) {
          std::ostringstream os;
          os << "equicontinuity fails at (" << x << ", " << x2 << ", " << y << ")";
          return os.str();
        }
    }
  return {};
}

}  // namespace fpp
