#include "fpp/errors.hpp"
#include "fpp/oracle.hpp"
#include "fpp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

namespace fpp {

EventSpec EventSpec::passage_at_most(Vertex x, Vertex y, double t, std::optional<Region> region) {
  EventSpec e;
  e.kind_ = Kind::passage_at_most;
  e.label_ = "passage-time-at-most";
  e.decreasing_ = true;
  e.predicate_ = [x = std::move(x), y = std::move(y), t, region = std::move(region)](const WeightField& w) {
    const Region r = region ? *region : Region::full(w.box());
    return restricted_passage_time(r, x, y, w, false, QueueKind::binary_heap).time <= t;
  };
  return e;
}

EventSpec EventSpec::ld_lower(std::vector<double> thresholds, std::string label) {
  EventSpec e;
  e.kind_ = Kind::ld_lower;
  e.label_ = std::move(label);
  e.decreasing_ = true;
  e.predicate_ = [th = std::move(thresholds)](const WeightField& w) {
    const std::size_t count = w.box().vertex_count();
    if (th.size() != count * count) throw SchemaError("ld_lower: threshold table size mismatch");
    for (std::size_t u = 0; u < count; ++u) {
      const auto dist = shortest_path_tree(w, u, nullptr, QueueKind::binary_heap).dist;
      for (std::size_t v = 0; v < count; ++v) {
        if (dist[v] > th[u * count + v]) return false;
      }
    }
    return true;
  };
  return e;
}

EventSpec EventSpec::hub(Vertex x, double kappa) {
  EventSpec e;
  e.kind_ = Kind::hub;
  e.label_ = "hub";
  e.decreasing_ = true;
  e.predicate_ = [x = std::move(x), kappa](const WeightField& w) { return hub_check(x, w, kappa).verdict; };
  return e;
}

EventSpec EventSpec::custom(std::string label, std::function<bool(const WeightField&)> predicate, bool decreasing) {
  EventSpec e;
  e.kind_ = Kind::custom;
  e.label_ = std::move(label);
  e.decreasing_ = decreasing;
  e.predicate_ = std::move(predicate);
  return e;
}

Rational ExactLaw::cdf(double t) const {
  Rational acc = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= t) acc += probabilities[i];
  }
  return acc;
}

Rational ExactLaw::upper(double t) const {
  Rational acc = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= t) acc += probabilities[i];
  }
  return acc;
}

namespace {
std::vector<std::pair<std::size_t, int>> enumerated_edges(const LatticeBox& box, const Region* support) {
  auto edges = box.edges();
  if (support == nullptr) return edges;
  std::vector<std::pair<std::size_t, int>> out;
  for (const auto& [lower, axis] : edges) {
    if (support->contains(lower) && support->contains(lower + box.stride(axis))) out.emplace_back(lower, axis);
  }
  return out;
}
}  // namespace

std::optional<std::uint64_t> configuration_count(const EdgeDistribution& dist, const LatticeBox& box,
                                                 const Region* support) {
  if (!dist.is_finite_support()) return std::nullopt;
  const std::uint64_t k = dist.atoms().size();
  std::uint64_t total = 1;
  const std::size_t m = enumerated_edges(box, support).size();
  for (std::size_t e = 0; e < m; ++e) {
    if (total > std::numeric_limits<std::uint64_t>::max() / k) return std::nullopt;
    total *= k;
  }
  return total;
}

namespace {

// value -> (atom-count key -> configuration count)
using Histogram = std::map<double, std::unordered_map<std::uint64_t, std::uint64_t>>;

}  // namespace

std::vector<ExactLaw> exact_observable_laws(const std::vector<Observable>& observables, const EdgeDistribution& dist,
                                            const LatticeBox& box, std::uint64_t cap, int threads,
                                            const Region* support) {
  if (!dist.is_finite_support()) throw SchemaError("exact enumeration needs a finite-support law");
  if (support != nullptr && !(support->box() == box)) throw SchemaError("exact enumeration: region box mismatch");
  const auto total_opt = configuration_count(dist, box, support);
  if (!total_opt || *total_opt > cap) {
    throw BudgetExceeded("exact enumeration: configuration count exceeds the cap of " + std::to_string(cap));
  }
  const std::uint64_t total = *total_opt;
  const std::vector<Atom> atoms = dist.atoms();
  const std::size_t k = atoms.size();
  const auto edges = enumerated_edges(box, support);
  const std::size_t m = edges.size();

  // Key: counts of atoms 0..k-2 in base (m + 1); the last count is implied.
  const std::uint64_t base = m + 1;
  std::vector<std::uint64_t> place(k, 0);
  {
    long double span = 1.0L;
    std::uint64_t p = 1;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      place[j] = p;
      span *= static_cast<long double>(base);
      if (span > 1.8e19L) throw SchemaError("exact enumeration: too many atoms for this box");
      p *= base;
    }
  }

  const std::size_t nobs = observables.size();
  const std::size_t chunks = std::min<std::uint64_t>(total, 64);
  std::vector<std::vector<Histogram>> partial(chunks, std::vector<Histogram>(nobs));
  parallel_for(
      chunks,
      [&](std::size_t c) {
        const std::uint64_t begin = total * c / chunks;
        const std::uint64_t end = total * (c + 1) / chunks;
        WeightField w(box, dist, 0);
        if (support != nullptr) {
          for (const auto& [lower, axis] : box.edges()) w.set_weight(lower, axis, atoms.back().value);
        }
        std::vector<std::size_t> digit(m, 0);
        std::uint64_t rest = begin;
        std::uint64_t key = 0;
        for (std::size_t e = 0; e < m; ++e) {
          digit[e] = static_cast<std::size_t>(rest % k);
          rest /= k;
          w.set_weight(edges[e].first, edges[e].second, atoms[digit[e]].value);
          if (digit[e] + 1 < k) key += place[digit[e]];
        }
        auto& hist = partial[c];
        for (std::uint64_t cfg = begin; cfg < end; ++cfg) {
          for (std::size_t o = 0; o < nobs; ++o) ++hist[o][observables[o](w)][key];
          // Mixed-radix increment, edge 0 fastest.
          for (std::size_t e = 0; e < m; ++e) {
            if (digit[e] + 1 < k) key -= place[digit[e]];
            digit[e] = (digit[e] + 1) % k;
            if (digit[e] + 1 < k) key += place[digit[e]];
            w.set_weight(edges[e].first, edges[e].second, atoms[digit[e]].value);
            if (digit[e] != 0) break;
          }
        }
      },
      threads);

  // p_j^c for c = 0..m.
  std::vector<std::vector<Rational>> powers(k, std::vector<Rational>(m + 1));
  for (std::size_t j = 0; j < k; ++j) {
    powers[j][0] = 1;
    for (std::size_t c = 1; c <= m; ++c) powers[j][c] = powers[j][c - 1] * atoms[j].probability;
  }
  auto weight_of = [&](std::uint64_t key) {
    Rational prod = 1;
    std::uint64_t used = 0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const std::uint64_t c = (key / place[j]) % base;
      used += c;
      prod *= powers[j][c];
    }
    prod *= powers[k - 1][m - used];
    return prod;
  };

  std::vector<ExactLaw> laws(nobs);
  for (std::size_t o = 0; o < nobs; ++o) {
    std::map<double, std::map<std::uint64_t, std::uint64_t>> merged;
    for (const auto& chunk : partial) {
      for (const auto& [value, counts] : chunk[o]) {
        auto& slot = merged[value];
        for (const auto& [key, cnt] : counts) slot[key] += cnt;
      }
    }
    ExactLaw& law = laws[o];
    law.configurations = total;
    for (const auto& [value, counts] : merged) {
      Rational p = 0;
      for (const auto& [key, cnt] : counts) p += Rational(cnt) * weight_of(key);
      law.values.push_back(value);
      law.probabilities.push_back(p);
    }
  }
  return laws;
}

ExactProbability exact_event_probability(const EventSpec& event, const EdgeDistribution& dist, const LatticeBox& box,
                                         std::uint64_t cap, int threads) {
  const auto laws = exact_observable_laws({[&](const WeightField& w) { return event(w) ? 1.0 : 0.0; }}, dist, box,
                                          cap, threads);
  ExactProbability out;
  out.p = laws[0].upper(1.0);
  out.configurations = laws[0].configurations;
  return out;
}

ExactLaw exact_passage_time_law(const EdgeDistribution& dist, const LatticeBox& box, const Vertex& x, const Vertex& y,
                                std::optional<Region> region, std::uint64_t cap, int threads) {
  const Region r = region ? *region : Region::full(box);
  if (!r.contains(x) || !r.contains(y)) throw SchemaError("exact_passage_time_law: endpoint outside the region");
  Observable obs = [&](const WeightField& w) {
    return restricted_passage_time(r, x, y, w, false, QueueKind::binary_heap).time;
  };
  return exact_observable_laws({obs}, dist, box, cap, threads, region ? &r : nullptr).front();
}

MonteCarloFrequency monte_carlo_frequency(const EventSpec& event, const EdgeDistribution& dist, const LatticeBox& box,
                                          std::size_t samples, std::uint64_t seed, int threads) {
  std::vector<std::uint8_t> hit(samples, 0);
  parallel_for(
      samples, [&](std::size_t i) { hit[i] = event(sample_weights(dist, box, derive_seed(seed, i))) ? 1 : 0; },
      threads);
  MonteCarloFrequency f;
  f.samples = samples;
  for (auto h : hit) f.hits += h;
  f.p = samples == 0 ? 0.0 : static_cast<double>(f.hits) / static_cast<double>(samples);
  f.se = binomial_se(f.p, samples);
  f.ci = wilson_interval(f.hits, samples);
  return f;
}

}  // namespace fpp
