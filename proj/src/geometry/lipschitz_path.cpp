#include "fpp/errors.hpp"
#include "fpp/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fpp {

WeightedL1::WeightedL1(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw SchemaError("norm needs at least one weight");
  for (double w : w_)
    if (!(w > 0.0) || !std::isfinite(w)) throw SchemaError("norm weights must be positive and finite");
}

WeightedL1 WeightedL1::l1(int d, double scale) {
  if (d < 1) throw SchemaError("dimension must be positive");
  return WeightedL1(std::vector<double>(static_cast<std::size_t>(d), scale));
}

double WeightedL1::operator()(const Point& u) const {
  double s = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * std::abs(u[i]);
  return s;
}

double WeightedL1::distance(const Point& a, const Point& b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * std::abs(a[i] - b[i]);
  return s;
}

namespace {

double l1_norm(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

Point lerp(const Point& a, const Point& b, double t) {
  Point p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] + t * (b[i] - a[i]);
  return p;
}

}  // namespace

LipschitzPath::LipschitzPath(std::vector<Point> breakpoints) : pts_(std::move(breakpoints)) {
  if (pts_.size() < 2) throw SchemaError("a path needs at least two breakpoints");
  const std::size_t d = pts_[0].size();
  if (d == 0) throw SchemaError("breakpoints must have positive dimension");
  cum_.assign(pts_.size(), 0.0);
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (pts_[i].size() != d) throw SchemaError("breakpoints have mixed dimensions");
    for (double c : pts_[i])
      if (!std::isfinite(c)) throw SchemaError("breakpoint coordinates must be finite");
    if (i > 0) {
      const double len = l1_norm(pts_[i - 1], pts_[i]);
      if (len == 0.0) throw SchemaError("consecutive breakpoints coincide");
      cum_[i] = cum_[i - 1] + len;
    }
  }
}

double LipschitzPath::euclidean_length() const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < pts_[i].size(); ++k) {
      const double v = pts_[i + 1][k] - pts_[i][k];
      s += v * v;
    }
    total += std::sqrt(s);
  }
  return total;
}

double LipschitzPath::g_length(const WeightedL1& g) const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) total += g.distance(pts_[i], pts_[i + 1]);
  return total;
}

std::size_t LipschitzPath::piece_at(double s) const {
  if (s <= 0.0) return 0;
  if (s >= cum_.back()) return pieces() - 1;
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum_.begin()) - 1, pieces() - 1);
}

Point LipschitzPath::at(double s) const {
  if (s <= 0.0) return pts_.front();
  if (s >= cum_.back()) return pts_.back();
  const std::size_t i = piece_at(s);
  if (s == cum_[i]) return pts_[i];
  return lerp(pts_[i], pts_[i + 1], (s - cum_[i]) / (cum_[i + 1] - cum_[i]));
}

Point LipschitzPath::velocity(std::size_t i) const {
  const double len = cum_[i + 1] - cum_[i];
  Point v(pts_[i].size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (pts_[i + 1][k] - pts_[i][k]) / len;
  return v;
}

LipschitzPath LipschitzPath::reversed() const {
  std::vector<Point> p(pts_.rbegin(), pts_.rend());
  return LipschitzPath(std::move(p));
}

LipschitzPath LipschitzPath::sub(double s0, double s1) const {
  s0 = std::clamp(s0, 0.0, length());
  s1 = std::clamp(s1, 0.0, length());
  if (!(s0 < s1)) throw SchemaError("sub-path needs s0 < s1");
  std::vector<Point> p{at(s0)};
  for (std::size_t i = 1; i + 1 < pts_.size(); ++i)
    if (cum_[i] > s0 && cum_[i] < s1) p.push_back(pts_[i]);
  Point last = at(s1);
  if (l1_norm(p.back(), last) == 0.0) {
    if (p.size() == 1) throw SchemaError("sub-path is degenerate");
    p.back() = last;
  } else {
    p.push_back(last);
  }
  return LipschitzPath(std::move(p));
}

bool LipschitzPath::is_injective() const {
  const std::size_t n = pieces();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const SegmentContact c = segment_contact(pts_[i], pts_[i + 1], pts_[j], pts_[j + 1]);
      if (c.kind == SegmentContact::Kind::none) continue;
      if (j == i + 1 && c.kind == SegmentContact::Kind::point && c.s0 == 1.0 && c.t0 == 0.0) continue;
      return false;
    }
  }
  return true;
}

Highway::Highway(LipschitzPath path, double lambda)
    : Highway(path, std::vector<double>(path.pieces(), lambda)) {}

Highway::Highway(LipschitzPath path, std::vector<double> lambdas) : path_(std::move(path)), lambda_(std::move(lambdas)) {
  if (lambda_.size() != path_.pieces()) throw SchemaError("one speed per highway piece is required");
  for (double l : lambda_)
    if (!(l > 0.0) || l > 1.0) throw SchemaError("highway speed factors must lie in (0, 1]");
}

double Highway::discounted_length(const WeightedL1& g) const {
  double total = 0.0;
  const auto& p = path_.breakpoints();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) total += lambda_[i] * g.distance(p[i], p[i + 1]);
  return total;
}

double Highway::along(const WeightedL1& g, double s0, double s1) const {
  if (s0 > s1) std::swap(s0, s1);
  s0 = std::max(s0, 0.0);
  s1 = std::min(s1, path_.length());
  if (!(s0 < s1)) return 0.0;
  const std::size_t i0 = path_.piece_at(s0);
  const std::size_t i1 = path_.piece_at(s1);
  const auto& p = path_.breakpoints();
  const Point a = path_.at(s0);
  const Point b = path_.at(s1);
  if (i0 == i1) return lambda_[i0] * g.distance(a, b);
  double total = lambda_[i0] * g.distance(a, p[i0 + 1]);
  for (std::size_t i = i0 + 1; i < i1; ++i) total += lambda_[i] * g.distance(p[i], p[i + 1]);
  total += lambda_[i1] * g.distance(p[i1], b);
  return total;
}

Highway Highway::sub(double s0, double s1) const {
  LipschitzPath p = path_.sub(s0, s1);
  std::vector<double> l;
  const double base = std::clamp(std::min(s0, s1), 0.0, path_.length());
  for (std::size_t i = 0; i < p.pieces(); ++i) {
    const double mid = base + 0.5 * (p.position(i) + p.position(i + 1));
    l.push_back(lambda_[path_.piece_at(mid)]);
  }
  return Highway(std::move(p), std::move(l));
}

Highway Highway::reversed() const {
  std::vector<double> l(lambda_.rbegin(), lambda_.rend());
  return Highway(path_.reversed(), std::move(l));
}

}  // namespace fpp
