#include "fpp/errors.hpp"
#include "fpp/parallel.hpp"
#include "fpp/passage_time.hpp"

#include <cmath>
#include <numeric>

namespace fpp {

Vertex grid_vertex(const LatticeBox& box, const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(box.dim())) throw SchemaError("grid_vertex: dimension mismatch");
  Vertex v(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= 0.0 && x[k] <= 1.0)) throw SchemaError("grid_vertex: point outside [0,1]^d");
    const int c = static_cast<int>(std::floor(box.side() * x[k]));
    v[k] = std::min(c, box.side());
  }
  return v;
}

RescaledMetric::RescaledMetric(const WeightField& w, int threads)
    : RescaledMetric(w,
                     [&] {
                       std::vector<std::size_t> all(w.box().vertex_count());
                       std::iota(all.begin(), all.end(), std::size_t{0});
                       return all;
                     }(),
                     threads) {}

RescaledMetric::RescaledMetric(const WeightField& w, std::vector<std::size_t> sources, int threads)
    : box_(w.box()), n_(w.box().side()), sources_(std::move(sources)) {
  row_of_.assign(box_.vertex_count(), kNoVertex);
  for (std::size_t r = 0; r < sources_.size(); ++r) {
    if (sources_[r] >= box_.vertex_count()) throw SchemaError("RescaledMetric: source outside the box");
    row_of_[sources_[r]] = r;
  }
  rows_.resize(sources_.size());
  parallel_for(
      sources_.size(), [&](std::size_t r) { rows_[r] = shortest_path_tree(w, sources_[r]).dist; }, threads);
}

const std::vector<double>& RescaledMetric::row(std::size_t source) const {
  if (source >= row_of_.size() || row_of_[source] == kNoVertex)
    throw SchemaError("RescaledMetric: no row for this source");
  return rows_[row_of_[source]];
}

double RescaledMetric::grid(std::size_t source, std::size_t target) const { return row(source)[target] / n_; }

double RescaledMetric::operator()(const std::vector<double>& x, const std::vector<double>& y) const {
  return grid(box_.index(grid_vertex(box_, x)), box_.index(grid_vertex(box_, y)));
}

void RescaledMetric::write_csv(std::ostream& os) const {
  os << "source,target,value\n";
  os.precision(17);
  for (std::size_t r = 0; r < sources_.size(); ++r) {
    for (std::size_t t = 0; t < rows_[r].size(); ++t) {
      os << sources_[r] << ',' << t << ',' << rows_[r][t] / n_ << '\n';
    }
  }
}

}  // namespace fpp
