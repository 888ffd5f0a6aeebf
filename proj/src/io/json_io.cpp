#include "fpp/json_io.hpp"

#include "fpp/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fpp {

void reject_unknown_fields(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SchemaError(where + ": unknown field '" + it.key() + "'");
  }
}

const json& require_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return j.at(key);
}

namespace {

template <class T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Rational rational_field(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number()) return exact_rational(j.get<double>());
  throw SchemaError(where + ": expected a rational as string or number");
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

Interval interval_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(where + ": interval must be [lo, hi]");
  auto num = [&](const json& v) {
    if (v.is_null()) return std::numeric_limits<double>::infinity();
    return get_as<double>(v, where);
  };
  return {num(j[0]), num(j[1])};
}

}  // namespace

json to_json(const EdgeDistribution& dist) {
  json j;
  j["kind"] = to_string(dist.kind());
  switch (dist.kind()) {
    case DistributionKind::deterministic: j["c"] = dist.param_a(); break;
    case DistributionKind::two_point:
      j["a"] = dist.param_a();
      j["b"] = dist.param_b();
      j["p"] = to_string(dist.param_p());
      break;
    case DistributionKind::uniform:
      j["lo"] = dist.param_a();
      j["hi"] = dist.param_b();
      break;
    case DistributionKind::exponential:
      j["rate"] = dist.param_a();
      j["shift"] = dist.param_b();
      break;
    case DistributionKind::finite: {
      json atoms = json::array();
      for (const auto& a : dist.raw_atoms()) atoms.push_back({{"value", a.value}, {"p", to_string(a.probability)}});
      j["atoms"] = atoms;
      break;
    }
  }
  if (dist.cap()) j["cap"] = *dist.cap();
  return j;
}

EdgeDistribution distribution_from_json(const json& j) {
  const std::string where = "distribution";
  const std::string kind = get_as<std::string>(require_field(j, "kind", where), where);
  EdgeDistribution d = EdgeDistribution::deterministic(1.0);
  auto num = [&](const char* k) { return get_as<double>(require_field(j, k, where), where + "." + k); };
  if (kind == "deterministic") {
    reject_unknown_fields(j, {"kind", "c", "cap"}, where);
    d = EdgeDistribution::deterministic(num("c"));
  } else if (kind == "two-point") {
    reject_unknown_fields(j, {"kind", "a", "b", "p", "cap"}, where);
    d = EdgeDistribution::two_point(num("a"), num("b"), rational_field(require_field(j, "p", where), where + ".p"));
  } else if (kind == "uniform") {
    reject_unknown_fields(j, {"kind", "lo", "hi", "cap"}, where);
    d = EdgeDistribution::uniform(num("lo"), num("hi"));
  } else if (kind == "exponential") {
    reject_unknown_fields(j, {"kind", "rate", "shift", "cap"}, where);
    d = EdgeDistribution::exponential(num("rate"), j.contains("shift") ? num("shift") : 0.0);
  } else if (kind == "finite") {
    reject_unknown_fields(j, {"kind", "atoms", "cap"}, where);
    std::vector<Atom> atoms;
    for (const auto& a : require_field(j, "atoms", where)) {
      reject_unknown_fields(a, {"value", "p"}, where + ".atoms");
      atoms.push_back({get_as<double>(require_field(a, "value", where), where),
                       rational_field(require_field(a, "p", where), where + ".atoms.p")});
    }
    d = EdgeDistribution::finite(std::move(atoms));
  } else {
    throw SchemaError(where + ": unknown kind '" + kind + "'");
  }
  if (j.contains("cap")) d = d.truncated(num("cap"));
  return d;
}

json to_json(const Highway& h) {
  json pts = json::array();
  for (const auto& p : h.path().breakpoints()) pts.push_back(p);
  return {{"points", pts}, {"lambda", h.lambdas()}};
}

Highway highway_from_json(const json& j) {
  const std::string where = "highway";
  reject_unknown_fields(j, {"points", "lambda"}, where);
  auto pts = get_as<std::vector<Point>>(require_field(j, "points", where), where + ".points");
  const json& l = require_field(j, "lambda", where);
  LipschitzPath path(std::move(pts));
  if (l.is_number()) return Highway(std::move(path), get_as<double>(l, where));
  return Highway(std::move(path), get_as<std::vector<double>>(l, where + ".lambda"));
}

json to_json(const NormPlusHighways& D) {
  json hs = json::array();
  for (const auto& h : D.highways()) hs.push_back(to_json(h));
  return {{"norm", D.norm().weights()}, {"highways", hs}};
}

NormPlusHighways metric_from_json(const json& j) {
  const std::string where = "metric";
  reject_unknown_fields(j, {"norm", "highways"}, where);
  WeightedL1 g(get_as<std::vector<double>>(require_field(j, "norm", where), where + ".norm"));
  std::vector<Highway> hs;
  if (j.contains("highways"))
    for (const auto& h : j.at("highways")) hs.push_back(highway_from_json(h));
  return NormPlusHighways(std::move(g), std::move(hs));
}

json to_json(const HighwayNetwork& net) {
  json hs = json::array();
  for (const auto& h : net.highways) hs.push_back(to_json(h));
  return {{"highways", hs},        {"diagnostics", net.diagnostics}, {"converged", net.converged},
          {"eval_m", net.eval_m},  {"P", net.P},                     {"candidates_used", net.candidates_used}};
}

HighwayNetwork network_from_json(const json& j) {
  const std::string where = "network";
  reject_unknown_fields(j, {"highways", "diagnostics", "converged", "eval_m", "P", "candidates_used"}, where);
  HighwayNetwork net;
  for (const auto& h : require_field(j, "highways", where)) net.highways.push_back(highway_from_json(h));
  if (j.contains("diagnostics")) net.diagnostics = get_as<std::vector<double>>(j.at("diagnostics"), where);
  if (j.contains("converged")) net.converged = get_as<bool>(j.at("converged"), where);
  if (j.contains("eval_m")) net.eval_m = get_as<int>(j.at("eval_m"), where);
  if (j.contains("P")) net.P = get_as<int>(j.at("P"), where);
  if (j.contains("candidates_used")) net.candidates_used = get_as<std::size_t>(j.at("candidates_used"), where);
  return net;
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const RatePoint& p) {
  return {{"x", p.x},
          {"zeta", p.zeta},
          {"n", p.n},
          {"estimate", finite_or_null(p.estimate)},
          {"ci", json::array({finite_or_null(p.ci.lo), finite_or_null(p.ci.hi)})},
          {"method", to_string(p.method)},
          {"censored", p.censored},
          {"hits", p.hits},
          {"samples", p.samples},
          {"p", p.p},
          {"seed", p.seed}};
}

RatePoint rate_point_from_json(const json& j) {
  const std::string where = "rate point";
  reject_unknown_fields(j, {"x", "zeta", "n", "estimate", "ci", "method", "censored", "hits", "samples", "p", "seed"},
                        where);
  RatePoint p;
  p.x = get_as<Vertex>(require_field(j, "x", where), where);
  p.zeta = get_as<double>(require_field(j, "zeta", where), where);
  p.n = get_as<int>(require_field(j, "n", where), where);
  const json& e = require_field(j, "estimate", where);
  p.estimate = e.is_null() ? std::numeric_limits<double>::infinity() : get_as<double>(e, where);
  p.ci = interval_from(require_field(j, "ci", where), where + ".ci");
  p.method = rate_method_from_string(get_as<std::string>(require_field(j, "method", where), where));
  if (j.contains("censored")) p.censored = get_as<bool>(j.at("censored"), where);
  if (j.contains("hits")) p.hits = get_as<std::size_t>(j.at("hits"), where);
  if (j.contains("samples")) p.samples = get_as<std::size_t>(j.at("samples"), where);
  if (j.contains("p")) p.p = get_as<double>(j.at("p"), where);
  if (j.contains("seed")) p.seed = get_as<std::uint64_t>(j.at("seed"), where);
  return p;
}

json to_json(const RateSurface& s) {
  json rays = json::array();
  for (const auto& r : s.rays()) {
    json cells = json::array();
    for (const auto& c : r.cells)
      cells.push_back({{"zeta", c.zeta},
                       {"value", c.value},
                       {"ci", json::array({finite_or_null(c.ci.lo), finite_or_null(c.ci.hi)})},
                       {"provenance", c.provenance}});
    rays.push_back({{"ray", r.ray}, {"cells", cells}});
  }
  json changes = json::array();
  for (const auto& c : s.changes())
    changes.push_back({{"ray", c.ray}, {"zeta", c.zeta}, {"before", c.before}, {"after", c.after}, {"step", c.step}});
  json censored = json::array();
  for (const auto& p : s.censored()) censored.push_back(to_json(p));
  return {{"rays", rays}, {"changes", changes}, {"censored", censored}};
}

RateSurface surface_from_json(const json& j) {
  const std::string where = "surface";
  reject_unknown_fields(j, {"rays", "changes", "censored"}, where);
  std::vector<SurfaceRay> rays;
  for (const auto& r : require_field(j, "rays", where)) {
    reject_unknown_fields(r, {"ray", "cells"}, where + ".rays");
    SurfaceRay ray;
    ray.ray = get_as<Vertex>(require_field(r, "ray", where), where);
    for (const auto& c : require_field(r, "cells", where)) {
      reject_unknown_fields(c, {"zeta", "value", "ci", "provenance"}, where + ".cells");
      SurfaceCell cell;
      cell.zeta = get_as<double>(require_field(c, "zeta", where), where);
      cell.value = get_as<double>(require_field(c, "value", where), where);
      if (c.contains("ci")) cell.ci = interval_from(c.at("ci"), where + ".ci");
      if (c.contains("provenance")) cell.provenance = get_as<std::string>(c.at("provenance"), where);
      ray.cells.push_back(cell);
    }
    rays.push_back(std::move(ray));
  }
  std::vector<SurfaceChange> changes;
  if (j.contains("changes"))
    for (const auto& c : j.at("changes")) {
      reject_unknown_fields(c, {"ray", "zeta", "before", "after", "step"}, where + ".changes");
      SurfaceChange ch;
      ch.ray = get_as<Vertex>(require_field(c, "ray", where), where);
      ch.zeta = get_as<double>(require_field(c, "zeta", where), where);
      ch.before = get_as<double>(require_field(c, "before", where), where);
      ch.after = get_as<double>(require_field(c, "after", where), where);
      ch.step = get_as<std::string>(require_field(c, "step", where), where);
      changes.push_back(std::move(ch));
    }
  std::vector<RatePoint> censored;
  if (j.contains("censored"))
    for (const auto& c : j.at("censored")) censored.push_back(rate_point_from_json(c));
  return RateSurface(std::move(rays), std::move(changes), std::move(censored));
}

json to_json(const TimeConstantEstimate& tc) {
  json per = json::array();
  for (std::size_t k = 0; k < tc.ns.size(); ++k)
    per.push_back({{"n", tc.ns[k]},
                   {"mean", tc.per_n[k].mean},
                   {"stddev", tc.per_n[k].stddev},
                   {"ci", interval_json(tc.per_n[k].ci)},
                   {"samples", tc.per_n[k].count}});
  return {{"x", tc.x}, {"mu", tc.mu}, {"ci", interval_json(tc.ci)}, {"bracket", interval_json(tc.bracket)},
          {"per_n", per}};
}

json to_json(const ZeroSetReport& r) {
  return {{"pass", r.pass},
          {"zero_checked", r.zero_checked},
          {"positive_checked", r.positive_checked},
          {"trend_checked", r.trend_checked},
          {"failures", r.failures}};
}

json to_json(const FunctionalReport& r) {
  return {{"geodesic_sum", r.geodesic_sum},
          {"intrinsic", r.intrinsic},
          {"sup_lower_bound", r.sup_lower_bound},
          {"family_size", r.family_size},
          {"network_size", r.network_size},
          {"network_converged", r.network_converged},
          {"diagnostics", r.diagnostics},
          {"quadrature_order", r.quadrature_order},
          {"delta_sum_intrinsic", r.delta_sum_intrinsic},
          {"delta_sum_sup", r.delta_sum_sup}};
}

json to_json(const MonotonicityProbe& p) {
  return {{"value_first", p.value_first}, {"value_second", p.value_second}, {"margin", p.margin},
          {"strict", p.strict},           {"pairs_checked", p.pairs_checked}, {"max_gap", p.max_gap}};
}

json to_json(const LdTrendRow& r) {
  return {{"n", r.n},
          {"method", r.method},
          {"p", r.p},
          {"p_ci", interval_json(r.p_ci)},
          {"rate", finite_or_null(r.rate)},
          {"rate_ci", json::array({finite_or_null(r.rate_ci.lo), finite_or_null(r.rate_ci.hi)})},
          {"censored", r.censored},
          {"hits", r.hits},
          {"samples", r.samples},
          {"configurations", r.configurations}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string vertex_text(const Vertex& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " " : "") + std::to_string(x[i]);
  return s;
}

}  // namespace

void write_rate_points_csv(std::ostream& os, const std::vector<RatePoint>& points) {
  os << "x,zeta,n,estimate,ci_lo,ci_hi,method,censored,hits,samples,p,seed\r\n";
  for (const auto& p : points)
    os << csv_field(vertex_text(p.x)) << ',' << format_double(p.zeta) << ',' << p.n << ','
       << format_double(p.estimate) << ',' << format_double(p.ci.lo) << ',' << format_double(p.ci.hi) << ','
       << to_string(p.method) << ',' << (p.censored ? "true" : "false") << ',' << p.hits << ',' << p.samples << ','
       << format_double(p.p) << ',' << p.seed << "\r\n";
}

void write_surface_csv(std::ostream& os, const RateSurface& s) {
  os << "ray,zeta,value,ci_lo,ci_hi,provenance\r\n";
  for (const auto& r : s.rays())
    for (const auto& c : r.cells)
      os << csv_field(vertex_text(r.ray)) << ',' << format_double(c.zeta) << ',' << format_double(c.value) << ','
         << format_double(c.ci.lo) << ',' << format_double(c.ci.hi) << ',' << csv_field(c.provenance) << "\r\n";
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fpp
