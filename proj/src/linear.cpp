#include "nlft/linear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlft/parallel.hpp"

namespace nlft {

cplx linear_ft(const ModulatedPotential& f, double xi) {
  const double eta = xi - f.modulation;
  const auto x = f.base.breakpoints();
  CompensatedComplexSum sum;
  for (std::size_t k = 0; k < f.base.layers(); ++k)
    sum += f.base.values()[k] * exp_segment_integral(x[k], x[k + 1], eta);
  return sum.value();
}

std::vector<cplx> linear_ft(const ModulatedPotential& f, std::span<const double> xi,
                            unsigned threads) {
  std::vector<cplx> out(xi.size());
  parallel_for(xi.size(), threads, [&](std::size_t i) { out[i] = linear_ft(f, xi[i]); });
  return out;
}

cplx gaussian_ft(const GaussianParams& g, double xi) {
  g.validate();
  const cplx w = g.v - cplx(0.0, 2.0 * kPi * xi);
  return g.c * std::sqrt(kPi / g.alpha) * std::exp(w * w / (4.0 * g.alpha));
}

cplx PrefixCurve::in_layer(std::size_t k, double x) const {
  return prefix[k] + values[k] * exp_segment_integral(breakpoints[k], x, xi);
}

cplx PrefixCurve::tail_in_layer(std::size_t k, double x) const {
  return suffix[k + 1] + values[k] * exp_segment_integral(x, breakpoints[k + 1], xi);
}

PrefixCurve prefix_curve(const PiecewisePotential& f, double xi) {
  PrefixCurve c;
  c.xi = xi;
  c.breakpoints.assign(f.breakpoints().begin(), f.breakpoints().end());
  c.values.assign(f.values().begin(), f.values().end());
  const std::size_t n = f.layers();
  std::vector<cplx> pieces(n);
  for (std::size_t k = 0; k < n; ++k)
    pieces[k] = c.values[k] * exp_segment_integral(c.breakpoints[k], c.breakpoints[k + 1], xi);

  c.prefix.assign(n + 1, cplx{});
  c.suffix.assign(n + 1, cplx{});
  CompensatedComplexSum fwd;
  for (std::size_t k = 0; k < n; ++k) {
    fwd += pieces[k];
    c.prefix[k + 1] = fwd.value();
  }
  CompensatedComplexSum bwd;
  for (std::size_t k = n; k-- > 0;) {
    bwd += pieces[k];
    c.suffix[k] = bwd.value();
  }
  return c;
}

MaxTruncatedFt max_truncated_ft(const ModulatedPotential& f, double xi, int refinement) {
  if (refinement < 1) throw std::invalid_argument("max_truncated_ft: refinement must be >= 1");
  const PiecewisePotential& base = f.base;
  if (base.empty()) return {};
  const PrefixCurve curve = prefix_curve(base, xi - f.modulation);

  std::vector<cplx> pts;
  pts.reserve(base.layers() * static_cast<std::size_t>(refinement + 1) + 1);
  double lipschitz_width = 0.0;
  for (std::size_t k = 0; k < base.layers(); ++k) {
    const double lo = base.breakpoints()[k];
    const double h = base.width(k);
    pts.push_back(curve.prefix[k]);
    for (int j = 1; j <= refinement; ++j)
      pts.push_back(curve.in_layer(k, lo + h * j / (refinement + 1.0)));
    lipschitz_width = std::max(lipschitz_width, std::abs(base.values()[k]) * h);
  }
  pts.push_back(curve.prefix.back());

  // Diameter of the sampled point set (every chord G(t) - G(s) is an interval integral).
  double best2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best2 = std::max(best2, std::norm(pts[j] - pts[i]));

  MaxTruncatedFt out;
  out.value = std::sqrt(best2);
  out.error_bound = 2.0 * lipschitz_width / refinement;
  return out;
}

}  // namespace nlft
