#include "fpp/errors.hpp"
#include "fpp/geometry.hpp"
#include "fpp/parallel.hpp"
#include "fpp/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fpp {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Arclength positions on h where coordinate j of a piece equals one of `values`.
void aligned_positions(const LipschitzPath& path, std::size_t j, const std::vector<double>& values,
                       std::vector<double>& out) {
  const auto& p = path.breakpoints();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double span = p[i + 1][j] - p[i][j];
    if (span == 0.0) continue;
    const double len = path.position(i + 1) - path.position(i);
    for (double v : values) {
      const double t = (v - p[i][j]) / span;
      if (t > 0.0 && t < 1.0) out.push_back(path.position(i) + t * len);
    }
  }
}

}  // namespace

std::vector<Point> grid_points(int d, int m) {
  if (d < 1 || m < 1) throw SchemaError("grid needs positive dimension and resolution");
  std::size_t count = 1;
  for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(m + 1);
  std::vector<Point> pts(count, Point(static_cast<std::size_t>(d)));
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t r = idx;
    for (int k = d - 1; k >= 0; --k) {
      pts[idx][static_cast<std::size_t>(k)] = static_cast<double>(r % static_cast<std::size_t>(m + 1)) / m;
      r /= static_cast<std::size_t>(m + 1);
    }
  }
  return pts;
}

HwChain::HwChain(WeightedL1 g, std::vector<Highway> highways, int grid_m, int P)
    : g_(std::move(g)), highways_(std::move(highways)), m_(grid_m), P_(P) {
  if (m_ < 1 || P_ < 1) throw SchemaError("access grid parameters must be positive");
  const std::size_t d = static_cast<std::size_t>(g_.dim());
  std::vector<std::vector<double>> coord_values(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (int i = 0; i <= m_; ++i) coord_values[j].push_back(static_cast<double>(i) / m_);
    for (const auto& h : highways_)
      for (const auto& b : h.path().breakpoints()) coord_values[j].push_back(b[j]);
    std::sort(coord_values[j].begin(), coord_values[j].end());
    coord_values[j].erase(std::unique(coord_values[j].begin(), coord_values[j].end()), coord_values[j].end());
  }

  for (std::size_t k = 0; k < highways_.size(); ++k) {
    const Highway& h = highways_[k];
    if (h.path().dim() != g_.dim()) throw SchemaError("highway dimension differs from the norm");
    const LipschitzPath& path = h.path();
    std::vector<double> s;
    for (std::size_t i = 0; i <= path.pieces(); ++i) s.push_back(path.position(i));
    for (int i = 1; i < P_; ++i) s.push_back(path.length() * i / P_);
    for (std::size_t j = 0; j < d; ++j) aligned_positions(path, j, coord_values[j], s);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());

    std::vector<double> lambda_at(s.size());
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.size(); ++i) {
      idx.push_back(access_.size());
      access_.push_back(path.at(s[i]));
      lambda_at[i] = i == 0 ? 0.0 : lambda_at[i - 1] + h.along(g_, s[i - 1], s[i]);
    }
    std::vector<double> al(s.size() * s.size());
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b) al[a * s.size() + b] = std::abs(lambda_at[a] - lambda_at[b]);
    members_.push_back(std::move(idx));
    along_.push_back(std::move(al));
  }

  const std::size_t n = access_.size();
  coords_.assign(d, std::vector<double>(n));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t j = 0; j < d; ++j) coords_[j][v] = access_[v][j];
  std::vector<const double*> cols(d);
  for (std::size_t j = 0; j < d; ++j) cols[j] = coords_[j].data();

  const auto& kt = simd::active();
  std::vector<double> S(n * n);
  for (std::size_t v = 0; v < n; ++v)
    kt.weighted_l1_row(&S[v * n], cols.data(), access_[v].data(), g_.weights().data(), d, n);

  for (std::size_t k = 0; k < highways_.size(); ++k) {
    const auto& I = members_[k];
    const std::size_t m = I.size();
    std::vector<double> block(m * n);
    for (std::size_t t = 0; t < m; ++t) std::copy_n(&S[I[t] * n], n, &block[t * n]);
    if (k + 1 < highways_.size()) {
      const auto& al = along_[k];
      parallel_for(n, [&](std::size_t b) {
        std::vector<double> xs(m), w(m);
        for (std::size_t s = 0; s < m; ++s) xs[s] = S[b * n + I[s]];
        for (std::size_t t = 0; t < m; ++t) w[t] = kt.min_plus_reduce(xs.data(), &al[t * m], m);
        for (std::size_t t = 0; t < m; ++t) kt.min_plus_broadcast(&S[b * n], &block[t * n], w[t], n);
      });
    }
    blocks_.push_back(std::move(block));
  }
}

HwChain::Trace HwChain::trace(const Point& x) const {
  if (x.size() != static_cast<std::size_t>(g_.dim())) throw SchemaError("point dimension differs from the chain");
  const std::size_t n = access_.size();
  const std::size_t d = x.size();
  const auto& kt = simd::active();
  std::vector<const double*> cols(d);
  for (std::size_t j = 0; j < d; ++j) cols[j] = coords_[j].data();
  Trace tr;
  tr.r.emplace_back(n);
  kt.weighted_l1_row(tr.r[0].data(), cols.data(), x.data(), g_.weights().data(), d, n);
  for (std::size_t k = 0; k < highways_.size(); ++k) {
    const auto& I = members_[k];
    const std::size_t m = I.size();
    std::vector<double> xs(m), w(m);
    for (std::size_t s = 0; s < m; ++s) xs[s] = tr.r[k][I[s]];
    for (std::size_t t = 0; t < m; ++t) w[t] = kt.min_plus_reduce(xs.data(), &along_[k][t * m], m);
    std::vector<double> next = tr.r[k];
    for (std::size_t t = 0; t < m; ++t) kt.min_plus_broadcast(next.data(), &blocks_[k][t * n], w[t], n);
    tr.w.push_back(std::move(w));
    tr.r.push_back(std::move(next));
  }
  return tr;
}

double HwChain::value(const Point& x, const Point& y, std::size_t K) const {
  if (K > levels()) throw SchemaError("chain level out of range");
  const Trace tx = trace(x);
  const Trace ty = trace(y);
  double h = g_.distance(x, y);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& I = members_[k];
    for (std::size_t t = 0; t < I.size(); ++t) h = std::min(h, tx.w[k][t] + ty.r[k][I[t]]);
  }
  return h;
}

std::vector<std::vector<double>> HwChain::level_tables(const std::vector<Point>& points) const {
  const std::size_t n = points.size();
  const std::size_t K = levels();
  std::vector<Trace> traces(n);
  parallel_for(n, [&](std::size_t i) { traces[i] = trace(points[i]); });
  // Exit costs restricted to each highway's access set.
  std::vector<std::vector<std::vector<double>>> exits(n, std::vector<std::vector<double>>(K));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t a : members_[k]) exits[i][k].push_back(traces[i].r[k][a]);
  std::vector<std::vector<double>> tables(K + 1, std::vector<double>(n * n));
  const auto& kt = simd::active();
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      double h = i == j ? 0.0 : g_.distance(points[i], points[j]);
      tables[0][i * n + j] = h;
      for (std::size_t k = 0; k < K; ++k) {
        if (i != j) h = std::min(h, kt.min_plus_reduce(traces[i].w[k].data(), exits[j][k].data(), exits[j][k].size()));
        tables[k + 1][i * n + j] = h;
      }
    }
  });
  return tables;
}

std::vector<double> network_diagnostics(const HwChain& chain, const Pseudometric& D, int eval_m) {
  const std::vector<Point> pts = grid_points(D.dim(), eval_m);
  const std::size_t n = pts.size();
  std::vector<double> dv(n * n, 0.0);
  const auto* nph = dynamic_cast<const NormPlusHighways*>(&D);
  parallel_for(n, [&](std::size_t i) {
    if (nph) {
      const auto row = nph->row(pts[i], pts);
      for (std::size_t j = 0; j < n; ++j) dv[i * n + j] = i == j ? 0.0 : row[j];
    } else {
      for (std::size_t j = 0; j < n; ++j) dv[i * n + j] = i == j ? 0.0 : D(pts[i], pts[j]);
    }
  });
  const auto tables = chain.level_tables(pts);
  std::vector<double> out;
  for (const auto& t : tables) {
    double worst = 0.0;
    for (std::size_t q = 0; q < n * n; ++q) worst = std::max(worst, std::abs(t[q] - dv[q]));
    out.push_back(worst);
  }
  return out;
}

std::string geodesy_violation(const Highway& sigma, const WeightedL1& g, const Pseudometric& target, int P,
                              double tol) {
  const LipschitzPath& path = sigma.path();
  std::vector<double> s;
  for (std::size_t i = 0; i <= path.pieces(); ++i) s.push_back(path.position(i));
  for (int i = 1; i < P; ++i) s.push_back(path.length() * i / P);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<Point> pts;
  for (double v : s) pts.push_back(path.at(v));
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      const double along = sigma.along(g, s[a], s[b]);
      const double d = target(pts[a], pts[b]);
      if (std::abs(along - d) > tol * std::max(along, 1e-300)) {
        std::ostringstream os;
        os.precision(17);
        os << "along-path cost " << along << " differs from target distance " << d << " between arclength " << s[a]
           << " and " << s[b];
        return os.str();
      }
    }
  return {};
}

HwChain hw_insert(const HwChain& chain, const Highway& sigma, const Pseudometric& target,
                  const HwInsertOptions& options) {
  if (options.validate) {
    const std::string why = geodesy_violation(sigma, chain.norm(), target, options.P);
    if (!why.empty()) throw SchemaError("highway is not a geodesic of the target: " + why);
  }
  std::vector<Highway> hs = chain.highways();
  hs.push_back(sigma);
  const std::vector<Point> pts = grid_points(chain.dim(), options.grid_m);
  int P = options.P;
  HwChain current(chain.norm(), hs, options.grid_m, P);
  std::vector<double> last = current.level_tables(pts).back();
  for (int round = 0; round < options.max_doublings; ++round) {
    P *= 2;
    HwChain refined(chain.norm(), hs, options.grid_m, P);
    std::vector<double> now = refined.level_tables(pts).back();
    double change = 0.0;
    for (std::size_t q = 0; q < now.size(); ++q) change = std::max(change, std::abs(now[q] - last[q]));
    current = std::move(refined);
    last = std::move(now);
    if (change <= options.tol) break;
  }
  return current;
}

}  // namespace fpp
