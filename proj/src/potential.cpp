#include "nlft/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace nlft {

PiecewisePotential::PiecewisePotential(std::vector<double> breakpoints, std::vector<cplx> values)
    : x_(std::move(breakpoints)), v_(std::move(values)) {
  if (v_.empty()) {
    if (x_.size() > 1)
      throw std::invalid_argument("potential: values list must have one entry per layer");
    x_.clear();
    return;
  }
  if (x_.size() != v_.size() + 1)
    throw std::invalid_argument(fmt::format(
        "potential: {} breakpoints need {} values, got {}", x_.size(), x_.size() - 1, v_.size()));
  for (std::size_t k = 0; k < x_.size(); ++k) {
    if (!std::isfinite(x_[k])) throw std::invalid_argument("potential: non-finite breakpoint");
    if (k > 0 && !(x_[k] > x_[k - 1]))
      throw std::invalid_argument(
          fmt::format("potential: breakpoints must be strictly increasing (index {})", k));
  }
  for (const cplx& v : v_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("potential: non-finite value");
}

PiecewisePotential PiecewisePotential::box(double lo, double hi, cplx value) {
  return PiecewisePotential({lo, hi}, {value});
}

double PiecewisePotential::left() const { return x_.empty() ? 0.0 : x_.front(); }
double PiecewisePotential::right() const { return x_.empty() ? 0.0 : x_.back(); }

double PiecewisePotential::min_width() const {
  double w = INFINITY;
  for (std::size_t k = 0; k < layers(); ++k) w = std::min(w, width(k));
  return w;
}

double PiecewisePotential::max_abs_value() const {
  double m = 0.0;
  for (const cplx& v : v_) m = std::max(m, std::abs(v));
  return m;
}

cplx PiecewisePotential::operator()(double x) const {
  if (v_.empty() || x < x_.front() || x >= x_.back()) return {};
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return v_[static_cast<std::size_t>(it - x_.begin()) - 1];
}

PiecewisePotential PiecewisePotential::scaled(cplx c) const {
  std::vector<cplx> v = v_;
  for (cplx& z : v) z *= c;
  return PiecewisePotential(x_, std::move(v));
}

PiecewisePotential PiecewisePotential::canonical() const {
  std::size_t first = 0, last = layers();
  while (first < last && v_[first] == cplx{}) ++first;
  while (last > first && v_[last - 1] == cplx{}) --last;
  if (first == last) return {};
  std::vector<double> x;
  std::vector<cplx> v;
  for (std::size_t k = first; k < last; ++k) {
    if (!v.empty() && v_[k] == v.back()) continue;
    x.push_back(x_[k]);
    v.push_back(v_[k]);
  }
  x.push_back(x_[last]);
  return PiecewisePotential(std::move(x), std::move(v));
}

bool same_function(const PiecewisePotential& f, const PiecewisePotential& g) {
  return f.canonical() == g.canonical();
}

cplx ModulatedPotential::operator()(double x) const {
  const cplx base_value = base(x);
  if (modulation == 0.0 || base_value == cplx{}) return base_value;
  return base_value * std::polar(1.0, 2.0 * kPi * modulation * x);
}

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals) {
  for (const auto& [a, b] : intervals)
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
      throw std::invalid_argument("interval set: each interval needs finite a < b");
  std::sort(intervals.begin(), intervals.end());
  for (const auto& iv : intervals) {
    if (!iv_.empty() && iv.first < iv_.back().second)
      throw std::invalid_argument("interval set: intervals overlap");
    if (!iv_.empty() && iv.first == iv_.back().second)
      iv_.back().second = iv.second;
    else
      iv_.push_back(iv);
  }
  CompensatedSum m;
  for (const auto& [a, b] : iv_) m += b - a;
  measure_ = m.value();
  if (!(measure_ > 0.0)) throw std::invalid_argument("interval set: empty set");
}

IntervalSet IntervalSet::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("interval set: dilation needs lambda > 0");
  std::vector<std::pair<double, double>> out(iv_.begin(), iv_.end());
  for (auto& [a, b] : out) {
    a *= lambda;
    b *= lambda;
  }
  return IntervalSet(std::move(out));
}

void HypothesisConfig::validate() const {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("hypotheses: p must lie in (1, 2)");
  if (!(A > 0.0)) throw std::invalid_argument("hypotheses: A must be positive");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("hypotheses: lambda must lie in (0, 1)");
  if (!(delta > 0.0)) throw std::invalid_argument("hypotheses: delta must be positive");
}

double lp_norm(const PiecewisePotential& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  CompensatedSum s;
  for (std::size_t k = 0; k < f.layers(); ++k) {
    const double m = std::abs(f.values()[k]);
    if (m == 0.0) continue;
    s += std::pow(m, p) * f.width(k);
  }
  return std::pow(s.value(), 1.0 / p);
}

double lp_norm(const ModulatedPotential& f, double p) { return lp_norm(f.base, p); }

double l1_norm_on_set(const PiecewisePotential& f, const IntervalSet& s) {
  CompensatedSum total;
  const auto x = f.breakpoints();
  const auto iv = s.intervals();
  std::size_t j = 0;
  for (std::size_t k = 0; k < f.layers(); ++k) {
    const double lo = x[k], hi = x[k + 1];
    while (j < iv.size() && iv[j].second <= lo) ++j;
    for (std::size_t i = j; i < iv.size() && iv[i].first < hi; ++i) {
      const double overlap = std::min(hi, iv[i].second) - std::max(lo, iv[i].first);
      if (overlap > 0.0) total += std::abs(f.values()[k]) * overlap;
    }
  }
  return total.value();
}

HypothesisReport check_hypotheses(const PiecewisePotential& f, const IntervalSet& s,
                                  const HypothesisConfig& cfg) {
  cfg.validate();
  if (!(s.measure() > 0.0)) throw std::invalid_argument("hypotheses: S must have positive measure");
  const double l1 = lp_norm(f, 1.0);
  const double l1_s = l1_norm_on_set(f, s);
  const double lpp = std::pow(lp_norm(f, cfg.p), cfg.p);

  HypothesisReport r;
  r.margin_small_l1 = cfg.delta - l1;
  r.margin_concentrated = l1_s - cfg.lambda * l1;
  r.margin_lp_controlled = cfg.A * std::pow(s.measure(), 1.0 - cfg.p) * l1 - lpp;
  r.small_l1 = r.margin_small_l1 >= 0.0;
  r.concentrated = r.margin_concentrated >= 0.0;
  r.lp_controlled = r.margin_lp_controlled >= 0.0;
  return r;
}

PiecewisePotential truncate(const PiecewisePotential& f, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("truncate: radius must be positive");
  if (f.empty() || (f.left() >= -radius && f.right() <= radius)) return f;
  std::vector<double> x;
  std::vector<cplx> v;
  for (std::size_t k = 0; k < f.layers(); ++k) {
    const double lo = std::max(f.breakpoints()[k], -radius);
    const double hi = std::min(f.breakpoints()[k + 1], radius);
    if (!(hi > lo)) continue;
    if (x.empty()) x.push_back(lo);
    v.push_back(f.values()[k]);
    x.push_back(hi);
  }
  return PiecewisePotential(std::move(x), std::move(v));
}

namespace {

struct SymmetryApplier {
  const ModulatedPotential& f;

  ModulatedPotential operator()(const sym::Unimodular& s) const {
    return {f.base.scaled(std::polar(1.0, s.theta)), f.modulation};
  }
  ModulatedPotential operator()(const sym::Modulation& s) const {
    return {f.base, f.modulation + s.xi0};
  }
  ModulatedPotential operator()(const sym::Translation& s) const {
    // e^{2 pi i (x - x0) xi0} f(x - x0): the carried modulation leaves a
    // constant phase behind on the base values.
    std::vector<double> x(f.base.breakpoints().begin(), f.base.breakpoints().end());
    for (double& xk : x) xk += s.x0;
    std::vector<cplx> v(f.base.values().begin(), f.base.values().end());
    if (f.modulation != 0.0) {
      const cplx phase = std::polar(1.0, -2.0 * kPi * s.x0 * f.modulation);
      for (cplx& z : v) z *= phase;
    }
    return {PiecewisePotential(std::move(x), std::move(v)), f.modulation};
  }
  ModulatedPotential operator()(const sym::Dilation& s) const {
    if (!(s.lambda > 0.0)) throw std::invalid_argument("dilation: lambda must be positive");
    std::vector<double> x(f.base.breakpoints().begin(), f.base.breakpoints().end());
    for (double& xk : x) xk *= s.lambda;
    std::vector<cplx> v(f.base.values().begin(), f.base.values().end());
    for (cplx& z : v) z /= s.lambda;
    return {PiecewisePotential(std::move(x), std::move(v)), f.modulation / s.lambda};
  }
  ModulatedPotential operator()(const sym::Conjugation&) const {
    std::vector<cplx> v(f.base.values().begin(), f.base.values().end());
    for (cplx& z : v) z = std::conj(z);
    std::vector<double> x(f.base.breakpoints().begin(), f.base.breakpoints().end());
    return {PiecewisePotential(std::move(x), std::move(v)), -f.modulation};
  }
};

struct SymmetryNamer {
  std::string operator()(const sym::Unimodular& s) const { return fmt::format("unimodular(theta={})", s.theta); }
  std::string operator()(const sym::Modulation& s) const { return fmt::format("modulation(xi0={})", s.xi0); }
  std::string operator()(const sym::Translation& s) const { return fmt::format("translation(x0={})", s.x0); }
  std::string operator()(const sym::Dilation& s) const { return fmt::format("dilation(lambda={})", s.lambda); }
  std::string operator()(const sym::Conjugation&) const { return "conjugation"; }
};

}  // namespace

ModulatedPotential apply_symmetry(const ModulatedPotential& f, const Symmetry& s) {
  return std::visit(SymmetryApplier{f}, s);
}

std::string describe(const Symmetry& s) { return std::visit(SymmetryNamer{}, s); }

}  // namespace nlft
