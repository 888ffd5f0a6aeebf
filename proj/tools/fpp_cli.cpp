// fpp: command-line front end for simulations, oracles, rate surfaces,
// highway networks and rate functionals.
//
// Exit status: 0 success, 1 selftest invariant failure, 2 schema or usage
// error, 3 budget exceeded.

#include "fpp/errors.hpp"
#include "fpp/functional.hpp"
#include "fpp/geometry.hpp"
#include "fpp/json_io.hpp"
#include "fpp/model.hpp"
#include "fpp/oracle.hpp"
#include "fpp/parallel.hpp"
#include "fpp/passage_time.hpp"
#include "fpp/rate.hpp"
#include "fpp/rational.hpp"
#include "fpp/simd.hpp"
#include "fpp/stats.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using fpp::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kInvariant = 1, kSchema = 2, kBudget = 3 };

struct RunContext {
  std::string command;
  json config;  // effective config, after flag overrides
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<std::uint64_t> budget;
  fs::path out;
  std::vector<std::string> artifacts;
};

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  const json& v = fpp::require_field(j, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw fpp::SchemaError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return get<T>(j, key, where);
}

std::string vertex_text(const fpp::Vertex& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

std::string num(double v) { return fpp::format_double(v); }

std::ofstream open_artifact(RunContext& ctx, const std::string& name) {
  std::ofstream os(ctx.out / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + (ctx.out / name).string());
  ctx.artifacts.push_back(name);
  return os;
}

void write_json(RunContext& ctx, const std::string& name, const json& j) {
  auto os = open_artifact(ctx, name);
  os << j.dump(2) << "\n";
}

std::string file_hash(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return fpp::fnv1a_hex(ss.str());
}

void write_manifest(const RunContext& ctx) {
  json m;
  m["manifest_version"] = 1;
  m["tool"] = "fpp";
  m["version"] = kVersion;
  m["command"] = ctx.command;
  m["config_hash"] = fpp::fnv1a_hex(ctx.config.dump());
  m["seed"] = ctx.seed;
  if (ctx.budget) m["budget"] = *ctx.budget;
  m["simd"] = fpp::simd::isa_name(fpp::simd::active_isa());
  json arts = json::array();
  for (const auto& a : ctx.artifacts) arts.push_back({{"file", a}, {"fnv1a", file_hash(ctx.out / a)}});
  m["artifacts"] = arts;
  m["config"] = ctx.config;
  std::ofstream os(ctx.out / "manifest.json", std::ios::binary);
  os << m.dump(2) << "\n";
}

std::uint64_t budget_or(const RunContext& ctx, std::uint64_t fallback) { return ctx.budget.value_or(fallback); }

fpp::NetworkOptions network_options(const json& cfg, const std::string& where) {
  fpp::NetworkOptions o;
  if (!cfg.contains("network")) return o;
  const json& j = cfg.at("network");
  const std::string w = where + ".network";
  fpp::reject_unknown_fields(j, {"K_max", "tolerance", "eval_m", "P", "max_candidates", "gap"}, w);
  o.K_max = get_or<std::size_t>(j, "K_max", o.K_max, w);
  o.tolerance = get_or<double>(j, "tolerance", o.tolerance, w);
  o.eval_m = get_or<int>(j, "eval_m", o.eval_m, w);
  o.P = get_or<int>(j, "P", o.P, w);
  o.max_candidates = get_or<std::size_t>(j, "max_candidates", o.max_candidates, w);
  o.gap = get_or<double>(j, "gap", o.gap, w);
  return o;
}

// ---------------------------------------------------------------- simulate

int run_simulate(RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "simulate";
  fpp::reject_unknown_fields(c, {"schema_version", "command", "distribution", "d", "n", "seed", "replicates",
                                 "truncation", "geodesic", "budget"},
                             w);
  const auto dist = fpp::distribution_from_json(fpp::require_field(c, "distribution", w));
  const fpp::LatticeBox box(get<int>(c, "d", w), get<int>(c, "n", w));
  const auto replicates = get_or<std::size_t>(c, "replicates", 1, w);
  const bool truncate = c.contains("truncation");
  const double b = truncate ? get<double>(c, "truncation", w) : fpp::kInf;
  if (box.vertex_count() > budget_or(ctx, fpp::kDefaultBoxBudget))
    throw fpp::BudgetExceeded("simulate: box has " + std::to_string(box.vertex_count()) + " vertices");

  std::vector<std::size_t> corners;
  for (std::size_t mask = 0; mask < (std::size_t{1} << box.dim()); ++mask) {
    fpp::Vertex v(static_cast<std::size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? box.side() : 0;
    corners.push_back(box.index(v));
  }

  auto metric = open_artifact(ctx, "metric.csv");
  metric << "replicate,seed,source,target,value,method\r\n";
  std::vector<double> diagonal;
  json gaps = json::array();
  for (std::size_t r = 0; r < replicates; ++r) {
    const std::uint64_t seed = fpp::derive_seed(ctx.seed, r);
    auto field = fpp::sample_weights(dist, box, seed);
    if (truncate) field = field.truncated(b);
    fpp::RescaledMetric rm(field, corners, ctx.threads);
    for (std::size_t s : corners)
      for (std::size_t t = 0; t < box.vertex_count(); ++t)
        metric << r << "," << seed << "," << s << "," << t << "," << num(rm.grid(s, t)) << ",dijkstra\r\n";
    diagonal.push_back(rm.grid(corners.front(), corners.back()));
    if (truncate) {
      fpp::GapOptions go;
      go.seed = seed;
      go.threads = ctx.threads;
      const auto g = fpp::uniform_gap(field, b, go);
      gaps.push_back({{"replicate", r}, {"seed", seed}, {"gap", g.gap}, {"bound", g.bound}, {"pairs", g.pairs}});
    }
  }

  json summary;
  const auto s = fpp::summarize(diagonal);
  summary["quantity"] = "rescaled corner-to-corner passage time";
  summary["replicates"] = replicates;
  summary["mean"] = s.mean;
  summary["stddev"] = s.stddev;
  summary["ci"] = {s.ci.lo, s.ci.hi};
  summary["method"] = "dijkstra";
  summary["seed"] = ctx.seed;
  if (truncate) summary["uniform_gap"] = gaps;

  if (c.contains("geodesic")) {
    const json& g = c.at("geodesic");
    const std::string gw = w + ".geodesic";
    fpp::reject_unknown_fields(g, {"ladder", "samples", "extra_pairs"}, gw);
    const auto ladder = get<std::vector<double>>(g, "ladder", gw);
    const auto samples = get<std::size_t>(g, "samples", gw);
    const auto extra = get_or<std::size_t>(g, "extra_pairs", 8, gw);
    const auto rows = fpp::geodesic_length_frequencies(dist, box, b, ladder, samples, ctx.seed,
                                                        extra, ctx.threads);
    auto os = open_artifact(ctx, "geodesic_stats.csv");
    os << "L,hits,samples,frequency,ci_lo,ci_hi,method,seed\r\n";
    for (const auto& row : rows) {
      const auto ci = fpp::wilson_interval(row.hits, row.samples);
      os << num(row.L) << "," << row.hits << "," << row.samples << "," << num(row.frequency) << "," << num(ci.lo)
         << "," << num(ci.hi) << ",monte-carlo," << ctx.seed << "\r\n";
    }
  }
  write_json(ctx, "summary.json", summary);
  return kOk;
}

// ---------------------------------------------------------------- oracle

std::string rational_num(const fpp::Rational& r) { return boost::multiprecision::numerator(r).str(); }
std::string rational_den(const fpp::Rational& r) { return boost::multiprecision::denominator(r).str(); }

json rational_json(const fpp::Rational& r) { return {{"num", rational_num(r)}, {"den", rational_den(r)}}; }

int run_oracle(RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "oracle";
  fpp::reject_unknown_fields(
      c, {"schema_version", "command", "distribution", "d", "n", "seed", "events", "mc_samples", "fkg", "budget"}, w);
  const auto dist = fpp::distribution_from_json(fpp::require_field(c, "distribution", w));
  const fpp::LatticeBox box(get<int>(c, "d", w), get<int>(c, "n", w));
  const std::uint64_t cap = budget_or(ctx, fpp::kDefaultEnumerationCap);
  const auto mc_samples = get_or<std::size_t>(c, "mc_samples", 0, w);

  auto csv = open_artifact(ctx, "oracle.csv");
  csv << "event,x,y,t,method,numerator,denominator,p,ci_lo,ci_hi,se,samples,seed,configurations\r\n";
  json report = json::array();
  std::size_t index = 0;
  for (const auto& e : get_or<json>(c, "events", json::array(), w)) {
    const std::string ew = w + ".events[" + std::to_string(index) + "]";
    fpp::reject_unknown_fields(e, {"x", "y", "t"}, ew);
    const auto x = get<fpp::Vertex>(e, "x", ew);
    const auto y = get<fpp::Vertex>(e, "y", ew);
    const double t = get<double>(e, "t", ew);
    const auto ev = fpp::EventSpec::passage_at_most(x, y, t);
    const std::string label = "T(x,y)<=t#" + std::to_string(index);
    const auto exact = fpp::exact_event_probability(ev, dist, box, cap, ctx.threads);
    csv << label << "," << fpp::csv_field(vertex_text(x)) << "," << fpp::csv_field(vertex_text(y)) << "," << num(t)
        << ",exact-oracle," << rational_num(exact.p) << "," << rational_den(exact.p) << "," << num(exact.value())
        << "," << num(exact.value()) << "," << num(exact.value()) << ",0,,," << exact.configurations << "\r\n";
    json r;
    r["event"] = {{"kind", "passage-at-most"}, {"x", x}, {"y", y}, {"t", t}};
    r["p_exact"] = rational_json(exact.p);
    r["configurations"] = exact.configurations;
    if (t > dist.support_infimum() && fpp::l1_distance(x, y) > 0) {
      const double per = t / fpp::l1_distance(x, y);
      if (per >= dist.support_infimum()) {
        const auto crude = fpp::crude_lower_bound(dist, x, y, per);
        csv << label << "," << fpp::csv_field(vertex_text(x)) << "," << fpp::csv_field(vertex_text(y)) << ","
            << num(t) << ",crude-bound,";
        if (crude.exact)
          csv << rational_num(*crude.exact) << "," << rational_den(*crude.exact);
        else
          csv << ",";
        csv << "," << num(crude.value) << ",,,,,,\r\n";
        r["crude_bound"] = crude.value;
      }
    }
    if (mc_samples > 0) {
      const std::uint64_t seed = fpp::derive_seed(ctx.seed, index);
      const auto mc = fpp::monte_carlo_frequency(ev, dist, box, mc_samples, seed, ctx.threads);
      csv << label << "," << fpp::csv_field(vertex_text(x)) << "," << fpp::csv_field(vertex_text(y)) << "," << num(t)
          << ",monte-carlo,,," << num(mc.p) << "," << num(mc.ci.lo) << "," << num(mc.ci.hi) << "," << num(mc.se)
          << "," << mc.samples << "," << seed << ",\r\n";
      r["p_mc"] = mc.p;
      r["ci"] = {mc.ci.lo, mc.ci.hi};
      r["seed"] = seed;
    }
    report.push_back(r);
    ++index;
  }
  json fkg = json::array();
  index = 0;
  for (const auto& f : get_or<json>(c, "fkg", json::array(), w)) {
    const std::string fw = w + ".fkg[" + std::to_string(index++) + "]";
    fpp::reject_unknown_fields(f, {"x1", "x2", "t1s", "t2s", "strip"}, fw);
    const auto x1 = get<fpp::Vertex>(f, "x1", fw);
    const auto x2 = get<fpp::Vertex>(f, "x2", fw);
    std::optional<fpp::Region> region;
    if (get_or<bool>(f, "strip", false, fw)) region = fpp::thin_strip(box.dim(), box.side());
    const auto rep = fpp::fkg_grid_check(dist, box, x1, x2, get<std::vector<double>>(f, "t1s", fw),
                                         get<std::vector<double>>(f, "t2s", fw), region, cap);
    fkg.push_back({{"x1", x1},
                   {"x2", x2},
                   {"region", region ? "strip" : "box"},
                   {"checked", rep.checked},
                   {"violations", rep.violations},
                   {"min_slack", rational_json(rep.min_slack)},
                   {"argmin", {rep.argmin_t1, rep.argmin_t2}},
                   {"method", "exact-oracle"}});
  }
  write_json(ctx, "oracle.json", {{"events", report}, {"fkg", fkg}});
  return kOk;
}

// ---------------------------------------------------------------- rate

int run_rate(RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "rate";
  fpp::reject_unknown_fields(c, {"schema_version", "command", "distribution", "points", "grid", "samples", "seed",
                                 "method", "cap", "time_constant", "budget"},
                             w);
  const auto dist = fpp::distribution_from_json(fpp::require_field(c, "distribution", w));
  const auto samples = get_or<std::size_t>(c, "samples", 1000, w);
  const auto method = get_or<std::string>(c, "method", "auto", w);
  if (method != "auto" && method != "monte-carlo" && method != "exact-oracle")
    throw fpp::SchemaError(w + ".method: expected auto, monte-carlo or exact-oracle");
  const auto cap = get_or<std::uint64_t>(c, "cap", fpp::kDefaultEnumerationCap, w);
  const std::size_t box_budget = budget_or(ctx, fpp::kDefaultBoxBudget);

  struct Key {
    fpp::Vertex x;
    double zeta;
    int n;
  };
  std::vector<Key> keys;
  std::size_t index = 0;
  for (const auto& p : get_or<json>(c, "points", json::array(), w)) {
    const std::string pw = w + ".points[" + std::to_string(index++) + "]";
    fpp::reject_unknown_fields(p, {"x", "zeta", "n"}, pw);
    keys.push_back({get<fpp::Vertex>(p, "x", pw), get<double>(p, "zeta", pw), get<int>(p, "n", pw)});
  }
  if (c.contains("grid")) {
    const json& g = c.at("grid");
    const std::string gw = w + ".grid";
    fpp::reject_unknown_fields(g, {"rays", "zetas", "ns"}, gw);
    const auto zetas = get<std::vector<double>>(g, "zetas", gw);
    for (const auto& x : get<std::vector<fpp::Vertex>>(g, "rays", gw))
      for (double z : zetas)
        for (int n : get<std::vector<int>>(g, "ns", gw)) {
          int l1 = 0;
          for (int v : x) l1 += std::abs(v);
          keys.push_back({x, z * l1, n});
        }
  }
  if (keys.empty()) throw fpp::SchemaError(w + ": no points or grid given");

  std::vector<fpp::RatePoint> points;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& k = keys[i];
    bool exact = method == "exact-oracle";
    if (method == "auto" && dist.is_finite_support()) {
      fpp::Vertex hi(k.x.size());
      int side = 0;
      for (int v : k.x) side = std::max(side, std::abs(v) * k.n);
      const auto count = fpp::configuration_count(dist, fpp::LatticeBox(static_cast<int>(k.x.size()), side));
      exact = count && *count <= cap;
    }
    points.push_back(exact ? fpp::exact_rate_point(dist, k.x, k.zeta, k.n, cap, ctx.threads)
                           : fpp::estimate_rate_point(dist, k.x, k.zeta, k.n, samples, fpp::derive_seed(ctx.seed, i),
                                                      ctx.threads, box_budget));
  }
  {
    auto os = open_artifact(ctx, "rate_points.csv");
    fpp::write_rate_points_csv(os, points);
  }
  const auto surface = fpp::extend_surface(points);
  {
    auto os = open_artifact(ctx, "surface.csv");
    fpp::write_surface_csv(os, surface);
  }
  write_json(ctx, "surface.json", fpp::to_json(surface));
  if (const auto v = surface.invariant_violation(); !v.empty())
    throw fpp::InvariantFailure("rate surface: " + v);

  if (c.contains("time_constant")) {
    const json& t = c.at("time_constant");
    const std::string tw = w + ".time_constant";
    fpp::reject_unknown_fields(t, {"x", "ns", "samples", "margin"}, tw);
    const auto tc = fpp::estimate_time_constant(dist, get<fpp::Vertex>(t, "x", tw), get<std::vector<int>>(t, "ns", tw),
                                                get_or<std::size_t>(t, "samples", samples, tw),
                                                fpp::derive_seed(ctx.seed, keys.size()), ctx.threads, box_budget);
    int n_max = 1;
    for (const auto& k : keys) n_max = std::max(n_max, k.n);
    const auto zs = fpp::zero_set_check(surface, tc, dist.support_infimum(), get_or<double>(t, "margin", 0.1, tw),
                                        std::log(2.0) / n_max);
    write_json(ctx, "time_constant.json", {{"estimate", fpp::to_json(tc)}, {"zero_set", fpp::to_json(zs)}});
  }
  return kOk;
}

// ---------------------------------------------------------------- highways

int run_highways(RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "highways";
  fpp::reject_unknown_fields(c, {"schema_version", "command", "metric", "network", "seed_with_metric"}, w);
  const auto D = fpp::metric_from_json(fpp::require_field(c, "metric", w));
  auto opts = network_options(c, w);
  if (get_or<bool>(c, "seed_with_metric", true, w)) opts.seeds = D.highways();
  const auto net = fpp::build_highway_network(D, opts);
  write_json(ctx, "network.json", fpp::to_json(net));
  auto os = open_artifact(ctx, "diagnostics.csv");
  os << "K,sup_gap,method,eval_m,P,converged\r\n";
  for (std::size_t k = 0; k < net.diagnostics.size(); ++k)
    os << k << "," << num(net.diagnostics[k]) << ",hw-chain," << net.eval_m << "," << net.P << ","
       << (net.converged ? "true" : "false") << "\r\n";
  std::cout << "highways: " << net.highways.size() << ", converged: " << (net.converged ? "yes" : "no")
            << ", final sup gap: " << num(net.diagnostics.empty() ? 0.0 : net.diagnostics.back()) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- functional

std::unique_ptr<fpp::RateModel> rate_model(const json& c, const fpp::NormPlusHighways& D, const std::string& where) {
  if (!c.contains("rate")) return std::make_unique<fpp::AnalyticRate>(D.norm(), 1.0);
  const json& r = c.at("rate");
  const std::string rw = where + ".rate";
  const auto kind = get<std::string>(r, "kind", rw);
  if (kind == "analytic") {
    fpp::reject_unknown_fields(r, {"kind", "c"}, rw);
    return std::make_unique<fpp::AnalyticRate>(D.norm(), get_or<double>(r, "c", 1.0, rw));
  }
  if (kind == "surface") {
    fpp::reject_unknown_fields(r, {"kind", "surface"}, rw);
    return std::make_unique<fpp::SurfaceRate>(fpp::surface_from_json(fpp::require_field(r, "surface", rw)));
  }
  throw fpp::SchemaError(rw + ".kind: expected analytic or surface");
}

void print_table(const fpp::FunctionalReport& r) {
  auto row = [](const char* name, double v) {
    std::cout << "  " << std::left << std::setw(18) << name << std::right << std::setw(24) << num(v) << "\n";
  };
  std::cout << "  " << std::left << std::setw(18) << "expression" << std::right << std::setw(24) << "value" << "\n";
  row("geodesic-sum", r.geodesic_sum);
  row("intrinsic", r.intrinsic);
  row("sup-lower-bound", r.sup_lower_bound);
  row("delta sum-intr", r.delta_sum_intrinsic);
  row("delta sum-sup", r.delta_sum_sup);
}

int run_functional(RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "functional";
  fpp::reject_unknown_fields(c, {"schema_version", "command", "metric", "rate", "network", "probe"}, w);
  const auto D = fpp::metric_from_json(fpp::require_field(c, "metric", w));
  const auto J = rate_model(c, D, w);
  const auto report = fpp::functional_report(D, *J, network_options(c, w));
  json out;
  out["rate"] = J->name();
  out["report"] = fpp::to_json(report);
  print_table(report);
  if (c.contains("probe")) {
    const json& p = c.at("probe");
    const std::string pw = w + ".probe";
    fpp::reject_unknown_fields(p, {"lower_metric", "eval_m", "tol"}, pw);
    const auto D1 = fpp::metric_from_json(fpp::require_field(p, "lower_metric", pw));
    const auto probe = fpp::strict_monotonicity_probe(D1, D, *J, get_or<int>(p, "eval_m", 8, pw),
                                                      get_or<double>(p, "tol", 1e-9, pw));
    out["probe"] = fpp::to_json(probe);
    std::cout << "  probe: " << num(probe.value_first) << " vs " << num(probe.value_second)
              << (probe.strict ? " (strict)" : " (not strict)") << "\n";
  }
  write_json(ctx, "functional.json", out);
  return kOk;
}

// ---------------------------------------------------------------- ld-trend

int run_ld_trend(RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "ld-trend";
  fpp::reject_unknown_fields(c, {"schema_version", "command", "metric", "distribution", "eps", "ns", "samples", "seed",
                                 "subgrid", "cap", "box_budget", "budget"},
                             w);
  const auto D = fpp::metric_from_json(fpp::require_field(c, "metric", w));
  const auto dist = fpp::distribution_from_json(fpp::require_field(c, "distribution", w));
  fpp::LdTrendOptions o;
  o.samples = get_or<std::size_t>(c, "samples", o.samples, w);
  o.seed = ctx.seed;
  o.cap = budget_or(ctx, get_or<std::uint64_t>(c, "cap", o.cap, w));
  o.threads = ctx.threads;
  o.subgrid = get_or<int>(c, "subgrid", o.subgrid, w);
  o.box_budget = get_or<std::size_t>(c, "box_budget", o.box_budget, w);
  const auto rows = fpp::empirical_ld_trend(D, dist, get<double>(c, "eps", w), get<std::vector<int>>(c, "ns", w), o);
  auto os = open_artifact(ctx, "ld_trend.csv");
  os << "n,method,p,p_ci_lo,p_ci_hi,rate,rate_ci_lo,rate_ci_hi,censored,hits,samples,configurations,seed\r\n";
  for (const auto& r : rows)
    os << r.n << "," << r.method << "," << num(r.p) << "," << num(r.p_ci.lo) << "," << num(r.p_ci.hi) << ","
       << num(r.rate) << "," << num(r.rate_ci.lo) << "," << num(r.rate_ci.hi) << ","
       << (r.censored ? "true" : "false") << "," << r.hits << "," << r.samples << "," << r.configurations << ","
       << o.seed << "\r\n";
  return kOk;
}

// ---------------------------------------------------------------- selftest

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Check> selftest_checks(const RunContext& ctx) {
  const json& c = ctx.config;
  const std::string w = "selftest";
  fpp::reject_unknown_fields(c, {"schema_version", "command", "distribution", "d", "n", "seed"}, w);
  const auto dist = c.contains("distribution") ? fpp::distribution_from_json(c.at("distribution"))
                                               : fpp::EdgeDistribution::deterministic(1.0);
  const int d = get_or<int>(c, "d", 2, w);
  const int n = get_or<int>(c, "n", 8, w);
  const fpp::LatticeBox box(d, n);
  std::vector<Check> out;
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    out.push_back({std::move(name), pass, std::move(detail)});
  };

  const auto w1 = fpp::sample_weights(dist, box, ctx.seed);
  add("sampling-determinism", w1 == fpp::sample_weights(dist, box, ctx.seed));

  {
    bool ok = true;
    for (double x : w1.edge_weights()) ok = ok && x >= dist.support_infimum() && x <= dist.support_supremum();
    add("weights-in-support", ok);
  }

  {
    fpp::RescaledMetric rm(w1, ctx.threads);
    const std::size_t V = box.vertex_count();
    std::uint64_t state = ctx.seed;
    bool ok = true;
    for (int k = 0; k < 200 && ok; ++k) {
      const auto a = static_cast<std::size_t>(fpp::uniform01(state) * V);
      const auto b = static_cast<std::size_t>(fpp::uniform01(state) * V);
      const auto e = static_cast<std::size_t>(fpp::uniform01(state) * V);
      ok = rm.grid(a, a) == 0.0 && rm.grid(a, b) == rm.grid(b, a) &&
           rm.grid(a, e) <= rm.grid(a, b) + rm.grid(b, e) + 1e-12 * (1.0 + rm.grid(a, e));
      const double l1 = fpp::l1_distance(box.vertex(a), box.vertex(b)) / static_cast<double>(n);
      ok = ok && rm.grid(a, b) >= dist.support_infimum() * l1 - 1e-12;
      if (dist.kind() == fpp::DistributionKind::deterministic) ok = ok && rm.grid(a, b) == dist.param_a() * l1;
    }
    add("rescaled-metric-axioms", ok);
  }

  {
    const fpp::LatticeBox small(2, 1);
    const auto two = fpp::EdgeDistribution::two_point(1, 2, fpp::Rational(1, 2));
    const auto p1 = fpp::exact_event_probability(fpp::EventSpec::passage_at_most({0, 0}, {1, 0}, 1), two, small);
    const auto p2 = fpp::exact_event_probability(fpp::EventSpec::passage_at_most({0, 0}, {1, 1}, 2), two, small);
    add("oracle-fixtures", p1.p == fpp::Rational(1, 2) && p2.p == fpp::Rational(7, 16),
        fpp::to_string(p1.p) + ", " + fpp::to_string(p2.p));
    const auto crude = fpp::crude_lower_bound(two, {0, 0}, {1, 1}, 1.0);
    add("crude-bound", crude.exact && *crude.exact <= p2.p);
  }

  {
    std::size_t failures = 0;
    const fpp::LatticeBox b3(2, 3);
    for (std::size_t i = 0; i < b3.vertex_count(); ++i)
      for (std::size_t j = 0; j < b3.vertex_count(); ++j) {
        if (i == j) continue;
        const auto x = b3.vertex(i), y = b3.vertex(j);
        if (!fpp::validate_disjoint_paths(x, y, b3, fpp::disjoint_paths(x, y, b3)).empty()) ++failures;
      }
    add("disjoint-paths", failures == 0, std::to_string(failures) + " failures");
  }

  {
    const double b = dist.support_infimum() + 1.0;
    const auto g = fpp::uniform_gap(w1.truncated(b), b);
    add("uniform-gap", g.gap <= g.bound, num(g.gap) + " <= " + num(g.bound));
  }

  {
    const fpp::Highway diag(fpp::LipschitzPath({{0.0, 0.0}, {1.0, 1.0}}), {0.5});
    const fpp::NormPlusHighways D(fpp::WeightedL1::l1(2), {diag});
    const auto r = fpp::functional_report(D, fpp::AnalyticRate(D.norm()));
    add("functional-diagonal", r.geodesic_sum == 1.0 && std::abs(r.intrinsic - 1.0) <= 1e-9 &&
                                   r.sup_lower_bound <= r.geodesic_sum + 1e-9,
        num(r.geodesic_sum) + ", " + num(r.intrinsic) + ", " + num(r.sup_lower_bound));
    bool mono = true;
    for (std::size_t k = 1; k < r.diagnostics.size(); ++k) mono = mono && r.diagnostics[k] <= r.diagnostics[k - 1];
    add("network-diagnostics", mono && r.network_converged);
  }

  {
    bool ok = true;
    const auto& ref = fpp::simd::kernels(fpp::simd::Isa::scalar);
    std::vector<double> a(37), bvec(37);
    std::uint64_t state = ctx.seed + 17;
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = fpp::uniform01(state);
      bvec[i] = fpp::uniform01(state);
    }
    for (auto isa : {fpp::simd::Isa::avx2, fpp::simd::Isa::neon}) {
      if (!fpp::simd::isa_supported(isa)) continue;
      const auto& k = fpp::simd::kernels(isa);
      ok = ok && k.min_plus_reduce(a.data(), bvec.data(), a.size()) ==
                     ref.min_plus_reduce(a.data(), bvec.data(), a.size()) &&
           k.argmin(a.data(), a.size()) == ref.argmin(a.data(), a.size());
    }
    add("simd-equivalence", ok, fpp::simd::isa_name(fpp::simd::active_isa()));
  }
  return out;
}

int run_selftest(RunContext& ctx) {
  const auto checks = selftest_checks(ctx);
  auto os = open_artifact(ctx, "selftest.csv");
  os << "check,pass,detail\r\n";
  bool all = true;
  for (const auto& ch : checks) {
    os << fpp::csv_field(ch.name) << "," << (ch.pass ? "true" : "false") << "," << fpp::csv_field(ch.detail) << "\r\n";
    std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.name << (ch.detail.empty() ? "" : "  " + ch.detail) << "\n";
    all = all && ch.pass;
  }
  return all ? kOk : kInvariant;
}

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw fpp::SchemaError("cannot read " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw fpp::SchemaError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-passage percolation experiments"};
  app.require_subcommand(1);
  std::string config_path, manifest_path, out_dir;
  std::optional<std::uint64_t> seed, budget;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--manifest", manifest_path, "Rerun from a manifest written by an earlier run");
  app.add_option("--out", out_dir, "Output directory (default: $FPP_OUT_DIR or ./fpp_out)");
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads (0: hardware concurrency)");
  app.add_option("--budget", budget, "Enumeration cap or box-vertex budget (overrides the config)");
  app.fallthrough();

  const std::vector<std::pair<std::string, int (*)(RunContext&)>> commands = {
      {"simulate", run_simulate}, {"oracle", run_oracle},     {"rate", run_rate},
      {"highways", run_highways}, {"functional", run_functional}, {"ld-trend", run_ld_trend},
      {"selftest", run_selftest}};
  const char* help[] = {"Sample fields, rescaled metrics and geodesic statistics",
                        "Exact probabilities, crude bounds and FKG checks",
                        "Estimate, extend and check rate surfaces",
                        "Build highway networks with convergence diagnostics",
                        "Three-expression functional reports and monotonicity probes",
                        "Empirical lower-tail trend along an n-ladder",
                        "Property suite; exit 1 on any failure"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) subs.push_back(app.add_subcommand(commands[i].first, help[i]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kSchema;
  }

  RunContext ctx;
  try {
    std::size_t which = 0;
    while (!subs[which]->parsed()) ++which;
    ctx.command = commands[which].first;
    if (!manifest_path.empty() && !config_path.empty())
      throw fpp::SchemaError("--config and --manifest are mutually exclusive");
    if (!manifest_path.empty()) {
      const json m = load_json(manifest_path);
      if (get<std::string>(m, "command", "manifest") != ctx.command)
        throw fpp::SchemaError("manifest was written by '" + m.at("command").get<std::string>() + "'");
      ctx.config = fpp::require_field(m, "config", "manifest");
    } else if (!config_path.empty()) {
      ctx.config = load_json(config_path);
    } else if (ctx.command == "selftest") {
      ctx.config = json::object();
    } else {
      throw fpp::SchemaError(ctx.command + ": --config is required");
    }
    if (!ctx.config.is_object()) throw fpp::SchemaError("config: expected an object");
    if (ctx.config.contains("schema_version") && get<int>(ctx.config, "schema_version", "config") != kSchemaVersion)
      throw fpp::SchemaError("config: unsupported schema_version");
    if (ctx.config.contains("command") && get<std::string>(ctx.config, "command", "config") != ctx.command)
      throw fpp::SchemaError("config: written for command '" + ctx.config.at("command").get<std::string>() + "'");

    if (seed) ctx.config["seed"] = *seed;
    if (budget) ctx.config["budget"] = *budget;
    ctx.seed = get_or<std::uint64_t>(ctx.config, "seed", 1, "config");
    if (ctx.config.contains("budget")) ctx.budget = get<std::uint64_t>(ctx.config, "budget", "config");
    if (threads < 0) throw fpp::SchemaError("--threads must be nonnegative");
    ctx.threads = threads;
    if (threads > 0) fpp::set_default_threads(threads);

    if (out_dir.empty()) {
      const char* env = std::getenv("FPP_OUT_DIR");
      out_dir = env && *env ? env : "fpp_out";
    }
    ctx.out = out_dir;
    fs::create_directories(ctx.out);

    const int status = commands[which].second(ctx);
    write_manifest(ctx);
    return status;
  } catch (const fpp::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const fpp::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const json::exception& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const fpp::InvariantFailure& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSchema;
  }
}
