#include "nlft/gaussians.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlft/linear.hpp"
#include "nlft/nelder_mead.hpp"
#include "nlft/parallel.hpp"
#include "nlft/random.hpp"

namespace nlft {

void GaussianParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("gaussian: alpha must be positive");
}

double GaussianParams::peak() const {
  return std::abs(c) * std::exp(v.real() * v.real() / (4.0 * alpha));
}

double gaussian_lp_norm(const GaussianParams& g, double p) {
  g.validate();
  if (!(p >= 1.0)) throw std::invalid_argument("gaussian_lp_norm: p must be >= 1");
  return g.peak() * std::pow(kPi / (p * g.alpha), 1.0 / (2.0 * p));
}

GaussianParams gaussian_transform(const GaussianParams& g) {
  g.validate();
  // c sqrt(pi/alpha) e^{v^2/(4 alpha)} exp(-(pi^2/alpha) xi^2 - (i pi v / alpha) xi)
  GaussianParams out;
  out.c = g.c * std::sqrt(kPi / g.alpha) * std::exp(g.v * g.v / (4.0 * g.alpha));
  out.alpha = kPi * kPi / g.alpha;
  out.v = cplx(0.0, -kPi) * g.v / g.alpha;
  return out;
}

StandardForm standard_form(const GaussianParams& g) {
  g.validate();
  // c e^{Re(v)^2/(4a)} e^{i Im(v) x} e^{-a (x - Re(v)/(2a))^2}
  StandardForm s;
  s.dilation = std::sqrt(kPi / g.alpha);
  s.translation = g.center();
  s.modulation = g.v.imag() / (2.0 * kPi);
  s.scaling = g.c * std::exp(g.v.real() * g.v.real() / (4.0 * g.alpha)) * s.dilation;
  return s;
}

cplx reduce_to_standard(const GaussianParams& g, const StandardForm& s, double x) {
  const double y = s.dilation * x + s.translation;
  return s.dilation * std::polar(1.0, -2.0 * kPi * s.modulation * y) * g(y) / s.scaling;
}

ModulatedPotential apply_standard_form(const PiecewisePotential& standard, const StandardForm& s) {
  ModulatedPotential f(standard);
  f = apply_symmetry(f, sym::Dilation{s.dilation});
  f = apply_symmetry(f, sym::Translation{s.translation});
  f = apply_symmetry(f, sym::Modulation{s.modulation});
  f.base = f.base.scaled(s.scaling);
  return f;
}

double gaussian_tail_pp(const GaussianParams& g, double lo, double hi, double p) {
  g.validate();
  if (lo > hi) throw std::invalid_argument("gaussian_tail_pp: lo must not exceed hi");
  const double beta = p * g.alpha;
  const double mu = g.center();
  const double rb = std::sqrt(beta);
  return std::pow(g.peak(), p) * 0.5 * std::sqrt(kPi / beta) *
         (std::erfc(rb * (mu - lo)) + std::erfc(rb * (hi - mu)));
}

double Discretization::lp_error_bound(double p) const {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_error_bound: p must be >= 1");
  const GaussianParams& g = gaussian;
  const double mu = g.center();
  const double peak = g.peak();
  CompensatedSum inner;
  for (std::size_t k = 0; k < potential.layers(); ++k) {
    const double a = potential.breakpoints()[k];
    const double b = potential.breakpoints()[k + 1];
    const double h = b - a;
    const double xm = std::clamp(mu, a, b);
    const double sup_g = peak * std::exp(-g.alpha * (xm - mu) * (xm - mu));
    const double sup_slope = std::max(std::abs(-2.0 * g.alpha * a + g.v), std::abs(-2.0 * g.alpha * b + g.v));
    const double lip = sup_g * sup_slope;
    // integral over the layer of (lip |x - m|)^p
    inner += std::pow(lip, p) * 2.0 * std::pow(0.5 * h, p + 1.0) / (p + 1.0);
  }
  return std::pow(inner.value(), 1.0 / p) + std::pow(gaussian_tail_pp(g, lo, hi, p), 1.0 / p);
}

Discretization sample_to_potential(const GaussianParams& g, double lo, double hi, std::size_t layers) {
  g.validate();
  if (layers < 1) throw std::invalid_argument("sample_to_potential: need at least one layer");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("sample_to_potential: window must be finite with lo < hi");
  std::vector<double> x(layers + 1);
  std::vector<cplx> v(layers);
  const double h = (hi - lo) / static_cast<double>(layers);
  for (std::size_t k = 0; k <= layers; ++k) x[k] = lo + h * static_cast<double>(k);
  x.back() = hi;
  for (std::size_t k = 0; k < layers; ++k) v[k] = g(0.5 * (x[k] + x[k + 1]));
  return {PiecewisePotential(std::move(x), std::move(v)), g, lo, hi};
}

namespace {

/// Centered form A exp(-alpha (x - mu)^2 + i omega x); avoids overflow for far-off centers.
struct Centered {
  cplx amp;
  double alpha, mu, omega;

  static Centered from(const GaussianParams& g) {
    const double mu = g.center();
    return {g.c * std::exp(g.alpha * mu * mu), g.alpha, mu, g.v.imag()};
  }
  GaussianParams params() const {
    return {amp * std::exp(-alpha * mu * mu), alpha, cplx(2.0 * alpha * mu, omega)};
  }
  cplx operator()(double x) const {
    const double d = x - mu;
    return amp * std::exp(-alpha * d * d) * std::polar(1.0, omega * x);
  }
};

double lp_distance_centered(const ModulatedPotential& f, const Centered& g, double p) {
  const GaussianParams gp = g.params();
  const PiecewisePotential& base = f.base;
  if (base.empty()) return gaussian_lp_norm(gp, p);

  const GaussRule& rule = gauss_legendre(8);
  const double rate = std::abs(g.omega - 2.0 * kPi * f.modulation);
  const double panel_max = std::min(0.5 / std::sqrt(g.alpha), 1.0 / (1.0 + rate));
  const double nu = 2.0 * kPi * f.modulation;
  CompensatedSum sum;
  for (std::size_t k = 0; k < base.layers(); ++k) {
    const double a = base.breakpoints()[k];
    const double h = base.width(k);
    const cplx value = base.values()[k];
    auto fx = [&](double x) { return (nu == 0.0) ? value : value * std::polar(1.0, nu * x); };
    auto diff = [&](double x) { return fx(x) - g(x); };
    // Derivative of |f - G|^2 / 2; a sign change marks an interior minimum,
    // where |f - G|^p may have a kink.
    auto slope = [&](double x) {
      const cplx gx = g(x);
      const cplx dg = gx * cplx(-2.0 * g.alpha * (x - g.mu), g.omega);
      const cplx df = fx(x) * cplx(0.0, nu);
      return std::real(std::conj(fx(x) - gx) * (df - dg));
    };
    auto panel = [&](double lo, double hi) {
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      double acc = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * std::pow(std::abs(diff(mid + half * rule.nodes[i])), p);
      return half * acc;
    };
    const auto panels = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(h / panel_max)), 1, 64);
    const double w = h / static_cast<double>(panels);
    double lo = a, s_lo = slope(a);
    for (std::size_t j = 0; j < panels; ++j) {
      const double hi = (j + 1 == panels) ? a + h : a + w * static_cast<double>(j + 1);
      const double s_hi = slope(hi);
      if (s_lo < 0.0 && s_hi > 0.0) {
        // Illinois false position on the slope.
        double l = lo, r = hi, sl = s_lo, sr = s_hi;
        int side = 0;
        for (int it = 0; it < 12 && r - l > 1e-9 * w; ++it) {
          const double m = (l * sr - r * sl) / (sr - sl);
          const double sm = slope(m);
          if (sm > 0.0) {
            r = m;
            sr = sm;
            if (side == -1) sl *= 0.5;
            side = -1;
          } else {
            l = m;
            sl = sm;
            if (side == 1) sr *= 0.5;
            side = 1;
          }
        }
        const double cut = std::clamp((l * sr - r * sl) / (sr - sl), lo, hi);
        sum += panel(lo, cut);
        sum += panel(cut, hi);
      } else {
        sum += panel(lo, hi);
      }
      lo = hi;
      s_lo = s_hi;
    }
  }
  // Outside the support only the Gaussian remains. Use the centered peak to
  // stay finite when the center is far from the origin.
  const double beta = p * g.alpha;
  const double rb = std::sqrt(beta);
  const double tail = std::pow(std::abs(g.amp), p) * 0.5 * std::sqrt(kPi / beta) *
                      (std::erfc(rb * (g.mu - base.left())) + std::erfc(rb * (base.right() - g.mu)));
  sum += tail;
  return std::pow(std::max(sum.value(), 0.0), 1.0 / p);
}

std::vector<double> pack(const Centered& g) {
  return {g.amp.real(), g.amp.imag(), std::log(g.alpha), g.mu, g.omega};
}

Centered unpack(const std::vector<double>& z) {
  return {cplx(z[0], z[1]), std::exp(std::clamp(z[2], -40.0, 40.0)), z[3], z[4]};
}

DistResult run_simplex(const ModulatedPotential& f, double p, const Centered& start,
                       const DistOptions& opts) {
  const auto objective = [&](const std::vector<double>& z) { return lp_distance_centered(f, unpack(z), p); };
  const double amp = std::max(std::abs(start.amp), 1e-3);
  const double ra = std::sqrt(start.alpha);
  const std::vector<double> step{0.1 * amp, 0.1 * amp, 0.2, 0.2 / ra, 0.2 * ra};
  SimplexOptions so;
  so.max_evaluations = opts.max_evaluations;
  so.ftol = opts.ftol;
  so.xtol = 1e-9;
  so.restarts = 2;
  const SimplexResult r = nelder_mead(objective, pack(start), step, so);
  DistResult out;
  out.distance = r.value;
  out.best = unpack(r.x).params();
  out.converged = r.converged;
  out.starts = 1;
  out.evaluations = r.evaluations;
  return out;
}

}  // namespace

double lp_distance(const ModulatedPotential& f, const GaussianParams& g, double p) {
  g.validate();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_distance: p must be >= 1");
  return lp_distance_centered(f, Centered::from(g), p);
}

GaussianParams moment_matched_gaussian(const ModulatedPotential& f) {
  const PiecewisePotential& base = f.base;
  if (base.empty()) return GaussianParams::standard();
  CompensatedSum mass, first;
  for (std::size_t k = 0; k < base.layers(); ++k) {
    const double a = base.breakpoints()[k], b = base.breakpoints()[k + 1];
    const double m = std::abs(base.values()[k]);
    mass += m * (b - a);
    first += m * 0.5 * (b * b - a * a);
  }
  if (!(mass.value() > 0.0)) return GaussianParams::standard();
  const double mu = first.value() / mass.value();
  CompensatedSum second;
  for (std::size_t k = 0; k < base.layers(); ++k) {
    const double a = base.breakpoints()[k] - mu, b = base.breakpoints()[k + 1] - mu;
    second += std::abs(base.values()[k]) * (b * b * b - a * a * a) / 3.0;
  }
  const double var = std::max(second.value() / mass.value(), 1e-12);
  const double alpha = 1.0 / (2.0 * var);
  const double sigma = std::sqrt(var);

  // Dominant frequency: coarse scan of |f^| around the carried modulation.
  double best_xi = f.modulation;
  double best_abs = -1.0;
  for (int j = -80; j <= 80; ++j) {
    const double xi = f.modulation + (2.0 / sigma) * j / 80.0;
    const double m = std::abs(linear_ft(f, xi));
    if (m > best_abs) {
      best_abs = m;
      best_xi = xi;
    }
  }
  const cplx fhat = linear_ft(f, best_xi);
  // |A| sqrt(pi/alpha) = mass; the phase of A is that of f^ at the peak frequency.
  const double amp_abs = mass.value() / std::sqrt(kPi / alpha);
  const double phase = (std::abs(fhat) > 0.0) ? std::arg(fhat * std::polar(1.0, 2.0 * kPi * best_xi * mu)) : 0.0;
  Centered c{std::polar(amp_abs, phase), alpha, mu, 2.0 * kPi * best_xi};
  return c.params();
}

DistResult dist_p_from(const ModulatedPotential& f, double p, const GaussianParams& start,
                       const DistOptions& opts) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("dist_p: p must lie in (1, 2)");
  start.validate();
  return run_simplex(f, p, Centered::from(start), opts);
}

DistResult dist_p(const ModulatedPotential& f, double p, const DistOptions& opts) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("dist_p: p must lie in (1, 2)");
  if (opts.starts < 1) throw std::invalid_argument("dist_p: need at least one start");
  const Centered init = Centered::from(moment_matched_gaussian(f));

  std::vector<Centered> starts{init};
  Rng rng(opts.seed);
  for (int s = 1; s < opts.starts; ++s) {
    Centered c = init;
    c.amp *= std::polar(1.0 + 0.2 * rng.normal(), 0.3 * rng.normal());
    c.alpha *= std::exp(0.4 * rng.normal());
    c.mu += 0.3 * rng.normal() / std::sqrt(init.alpha);
    c.omega += 0.5 * rng.normal() * std::sqrt(init.alpha);
    starts.push_back(c);
  }

  std::vector<DistResult> runs(starts.size());
  parallel_for(starts.size(), opts.threads, [&](std::size_t i) { runs[i] = run_simplex(f, p, starts[i], opts); });

  DistResult best = runs.front();
  int evaluations = 0;
  for (const DistResult& r : runs) {
    evaluations += r.evaluations;
    if (r.distance < best.distance) best = r;
  }
  best.starts = static_cast<int>(runs.size());
  best.evaluations = evaluations;
  return best;
}

}  // namespace nlft
