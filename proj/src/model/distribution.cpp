#include "fpp/errors.hpp"
#include "fpp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (1 - exp(-c L)) / c, continuous at c = 0.
double one_minus_exp_over(double c, double length) {
  if (c == 0.0) return length;
  return -std::expm1(-c * length) / c;
}

}  // namespace

std::string to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::deterministic: return "deterministic";
    case DistributionKind::two_point: return "two-point";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::finite: return "finite";
  }
  return "?";
}

std::string to_string(MomentClass m) {
  switch (m) {
    case MomentClass::bounded: return "bounded";
    case MomentClass::all_exponential_moments: return "all-exponential-moments";
    case MomentClass::min_moment_d_plus_xi: return "min-moment-d-plus-xi";
    case MomentClass::none: return "none";
  }
  return "?";
}

EdgeDistribution EdgeDistribution::deterministic(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw SchemaError("deterministic: value must be finite and >= 0");
  EdgeDistribution d;
  d.kind_ = DistributionKind::deterministic;
  d.a_ = c;
  d.finalize();
  return d;
}

EdgeDistribution EdgeDistribution::two_point(double a, double b, Rational p) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw SchemaError("two-point: values must be finite and >= 0");
  if (p < 0 || p > 1) throw SchemaError("two-point: probability outside [0, 1]");
  EdgeDistribution d;
  d.kind_ = DistributionKind::two_point;
  d.a_ = a;
  d.b_ = b;
  d.p_ = std::move(p);
  d.finalize();
  return d;
}

EdgeDistribution EdgeDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) throw SchemaError("uniform: need 0 <= lo < hi < inf");
  EdgeDistribution d;
  d.kind_ = DistributionKind::uniform;
  d.a_ = lo;
  d.b_ = hi;
  return d;
}

EdgeDistribution EdgeDistribution::exponential(double rate, double shift) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw SchemaError("exponential: rate must be > 0");
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw SchemaError("exponential: shift must be >= 0");
  EdgeDistribution d;
  d.kind_ = DistributionKind::exponential;
  d.a_ = rate;
  d.b_ = shift;
  return d;
}

EdgeDistribution EdgeDistribution::finite(std::vector<Atom> atoms) {
  if (atoms.empty()) throw SchemaError("finite: empty atom table");
  Rational total = 0;
  for (const auto& at : atoms) {
    if (!(at.value >= 0.0) || !std::isfinite(at.value)) throw SchemaError("finite: atom values must be finite and >= 0");
    if (at.probability < 0) throw SchemaError("finite: negative probability");
    total += at.probability;
  }
  if (total != 1) throw SchemaError("finite: probabilities must sum to exactly 1");
  EdgeDistribution d;
  d.kind_ = DistributionKind::finite;
  d.table_ = std::move(atoms);
  d.finalize();
  return d;
}

bool EdgeDistribution::is_finite_support() const {
  return kind_ == DistributionKind::deterministic || kind_ == DistributionKind::two_point ||
         kind_ == DistributionKind::finite;
}

MomentClass EdgeDistribution::moment_class() const {
  if (kind_ == DistributionKind::exponential && !cap_) return MomentClass::min_moment_d_plus_xi;
  return MomentClass::bounded;
}

bool EdgeDistribution::has_all_exponential_moments() const {
  const auto m = moment_class();
  return m == MomentClass::bounded || m == MomentClass::all_exponential_moments;
}

std::vector<Atom> EdgeDistribution::atoms() const {
  std::map<double, Rational> merged;
  switch (kind_) {
    case DistributionKind::deterministic:
      merged[a_] += 1;
      break;
    case DistributionKind::two_point:
      merged[a_] += p_;
      merged[b_] += 1 - p_;
      break;
    case DistributionKind::finite:
      for (const auto& at : table_) merged[at.value] += at.probability;
      break;
    default:
      throw SchemaError("atoms: " + to_string(kind_) + " law has no finite support");
  }
  std::vector<Atom> out;
  for (auto& [v, p] : merged) {
    if (p > 0) out.push_back({v, p});
  }
  return out;
}

double EdgeDistribution::support_infimum() const {
  switch (kind_) {
    case DistributionKind::uniform: return a_;
    case DistributionKind::exponential: return b_;
    default: return atoms().front().value;
  }
}

double EdgeDistribution::support_supremum() const {
  switch (kind_) {
    case DistributionKind::uniform: return cap_ ? std::min(*cap_, b_) : b_;
    case DistributionKind::exponential: return cap_ ? *cap_ : kInf;
    default: return atoms().back().value;
  }
}

double EdgeDistribution::mean() const {
  switch (kind_) {
    case DistributionKind::uniform: {
      const double hi = b_;
      const double cap = cap_ ? std::min(*cap_, hi) : hi;
      // E[min(U, cap)]
      const double width = hi - a_;
      const double below = (cap * cap - a_ * a_) / (2.0 * width);
      const double above = cap * (hi - cap) / width;
      return below + above;
    }
    case DistributionKind::exponential: {
      if (!cap_) return b_ + 1.0 / a_;
      return b_ + one_minus_exp_over(a_, *cap_ - b_);
    }
    default: {
      double m = 0.0;
      for (const auto& at : atoms()) m += at.value * to_double(at.probability);
      return m;
    }
  }
}

double EdgeDistribution::cdf(double t) const {
  switch (kind_) {
    case DistributionKind::uniform: {
      if (cap_ && t >= *cap_) return 1.0;
      if (t < a_) return 0.0;
      if (t >= b_) return 1.0;
      return (t - a_) / (b_ - a_);
    }
    case DistributionKind::exponential: {
      if (cap_ && t >= *cap_) return 1.0;
      if (t < b_) return 0.0;
      return -std::expm1(-a_ * (t - b_));
    }
    default: {
      double acc = 0.0;
      for (const auto& at : atoms()) {
        if (at.value <= t) acc += to_double(at.probability);
      }
      return std::min(acc, 1.0);
    }
  }
}

double EdgeDistribution::atom_mass(double v) const {
  switch (kind_) {
    case DistributionKind::uniform:
    case DistributionKind::exponential:
      if (cap_ && v == *cap_) return 1.0 - cdf(std::nextafter(v, -kInf));
      return 0.0;
    default:
      return to_double(exact_atom_mass(v));
  }
}

Rational EdgeDistribution::exact_atom_mass(double v) const {
  Rational acc = 0;
  for (const auto& at : atoms()) {
    if (at.value == v) acc += at.probability;
  }
  return acc;
}

double EdgeDistribution::mass_between(double lo, double hi) const {
  if (hi < lo) return 0.0;
  if (is_finite_support()) return to_double(*exact_mass_between(lo, hi));
  const double below = (lo <= support_infimum()) ? 0.0 : cdf(std::nextafter(lo, -kInf));
  return cdf(hi) - below;
}

std::optional<Rational> EdgeDistribution::exact_mass_between(double lo, double hi) const {
  if (!is_finite_support()) return std::nullopt;
  Rational acc = 0;
  for (const auto& at : atoms()) {
    if (at.value >= lo && at.value <= hi) acc += at.probability;
  }
  return acc;
}

double EdgeDistribution::quantile(double u) const {
  switch (kind_) {
    case DistributionKind::deterministic: return a_;
    case DistributionKind::two_point: return (u < sample_cum_.front()) ? a_ : b_;
    case DistributionKind::uniform: {
      const double x = a_ + u * (b_ - a_);
      return cap_ ? std::min(x, *cap_) : x;
    }
    case DistributionKind::exponential: {
      const double x = b_ - std::log1p(-u) / a_;
      return cap_ ? std::min(x, *cap_) : x;
    }
    case DistributionKind::finite: {
      // Sorted values keep the map monotone in u.
      for (std::size_t i = 0; i + 1 < sample_values_.size(); ++i) {
        if (u < sample_cum_[i]) return sample_values_[i];
      }
      return sample_values_.back();
    }
  }
  return a_;
}

double EdgeDistribution::mgf(double lambda) const {
  switch (kind_) {
    case DistributionKind::uniform: {
      const double hi = b_;
      const double cap = cap_ ? std::min(*cap_, hi) : hi;
      const double width = hi - a_;
      double cont;
      if (lambda == 0.0) {
        cont = (cap - a_) / width;
      } else {
        cont = (std::exp(lambda * cap) - std::exp(lambda * a_)) / (lambda * width);
      }
      const double tail = (hi - cap) / width * std::exp(lambda * cap);
      return cont + tail;
    }
    case DistributionKind::exponential: {
      const double rate = a_;
      const double shift = b_;
      if (!cap_) {
        if (lambda >= rate) return kInf;
        return std::exp(lambda * shift) * rate / (rate - lambda);
      }
      const double len = *cap_ - shift;
      const double cont = std::exp(lambda * shift) * rate * one_minus_exp_over(rate - lambda, len);
      const double tail = std::exp(-rate * len) * std::exp(lambda * *cap_);
      return cont + tail;
    }
    default: {
      double m = 0.0;
      for (const auto& at : atoms()) m += to_double(at.probability) * std::exp(lambda * at.value);
      return m;
    }
  }
}

EdgeDistribution EdgeDistribution::truncated(double b) const {
  if (!(b >= support_infimum())) throw SchemaError("truncate: b below the support infimum");
  EdgeDistribution out = *this;
  switch (kind_) {
    case DistributionKind::deterministic:
      out.a_ = std::min(a_, b);
      break;
    case DistributionKind::two_point:
      out.a_ = std::min(a_, b);
      out.b_ = std::min(b_, b);
      break;
    case DistributionKind::finite:
      for (auto& at : out.table_) at.value = std::min(at.value, b);
      break;
    case DistributionKind::uniform:
    case DistributionKind::exponential:
      if (!cap_ || b < *cap_) out.cap_ = b;
      break;
  }
  out.finalize();
  return out;
}

void EdgeDistribution::finalize() {
  sample_values_.clear();
  sample_cum_.clear();
  if (kind_ == DistributionKind::two_point) {
    sample_cum_.push_back(to_double(p_));
  } else if (kind_ == DistributionKind::finite) {
    Rational cum = 0;
    for (const auto& at : atoms()) {
      cum += at.probability;
      sample_values_.push_back(at.value);
      sample_cum_.push_back(to_double(cum));
    }
  }
}

bool EdgeDistribution::operator==(const EdgeDistribution& o) const {
  if (kind_ != o.kind_ || a_ != o.a_ || b_ != o.b_ || p_ != o.p_ || cap_ != o.cap_) return false;
  if (table_.size() != o.table_.size()) return false;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i].value != o.table_[i].value || table_[i].probability != o.table_[i].probability) return false;
  }
  return true;
}

double bond_percolation_threshold(int d) {
  switch (d) {
    case 2: return 0.5;  // exact (Kesten)
    case 3: return 0.2488;  // numerical estimate, 0.2488126(5)
    default: throw std::domain_error("unknown p_c for dimension " + std::to_string(d));
  }
}

bool subcritical_atom_check(const EdgeDistribution& dist, int d) {
  const double pc = bond_percolation_threshold(d);
  if (dist.is_finite_support()) {
    const Rational zero_mass = dist.exact_atom_mass(0.0);
    if (d == 2) return zero_mass < Rational(1, 2);
    return to_double(zero_mass) < pc;
  }
  return dist.atom_mass(0.0) < pc;
}

EdgeDistribution truncate(const EdgeDistribution& dist, double b) { return dist.truncated(b); }

}  // namespace fpp
