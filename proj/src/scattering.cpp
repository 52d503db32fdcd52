#include "nlft/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlft/parallel.hpp"

namespace nlft {

TransferMatrix layer_matrix(cplx value, double width, double xi) {
  if (!(width > 0.0)) throw std::invalid_argument("layer_matrix: width must be positive");
  const double w = kPi * xi;
  const double kappa2 = std::norm(value) - w * w;
  const double z = kappa2 * width * width;
  double ch, sh_over_k;
  if (std::abs(z) < 1e-8) {
    // |kappa h| < 1e-4: even Taylor series of cosh and sinh(kh)/k.
    ch = 1.0 + z / 2.0 + z * z / 24.0;
    sh_over_k = width * (1.0 + z / 6.0 + z * z / 120.0);
  } else if (kappa2 > 0.0) {
    const double k = std::sqrt(kappa2);
    ch = std::cosh(k * width);
    sh_over_k = std::sinh(k * width) / k;
  } else {
    const double k = std::sqrt(-kappa2);
    ch = std::cos(k * width);
    sh_over_k = std::sin(k * width) / k;
  }
  TransferMatrix m;
  m.m11 = cplx(ch, -w * sh_over_k);
  m.m22 = cplx(ch, w * sh_over_k);
  m.m12 = std::conj(value) * sh_over_k;
  m.m21 = value * sh_over_k;
  return m;
}

void SpectralGrid::validate() const {
  if (!(xi_max > 0.0) || !std::isfinite(xi_max))
    throw std::invalid_argument("grid: xi_max must be positive");
  if (count < 3 || count % 2 == 0) throw std::invalid_argument("grid: count must be odd and >= 3");
}

std::vector<double> SpectralGrid::nodes() const {
  validate();
  const auto half = static_cast<std::ptrdiff_t>((count - 1) / 2);
  const double h = xi_max / static_cast<double>(half);
  std::vector<double> out(count);
  for (std::ptrdiff_t i = -half; i <= half; ++i)
    out[static_cast<std::size_t>(i + half)] = h * static_cast<double>(i);
  out.front() = -xi_max;
  out.back() = xi_max;
  return out;
}

double ScatteringData::log_a2(std::size_t i) const { return std::log1p(std::norm(b[i])); }

std::vector<TransferMatrix> prefix_matrices(const PiecewisePotential& f, double xi,
                                            const NlftOptions& opts) {
  std::vector<TransferMatrix> out;
  out.reserve(f.layers() + 1);
  TransferMatrix m;
  out.push_back(m);
  for (std::size_t k = 0; k < f.layers(); ++k) {
    m = layer_matrix(f.values()[k], f.width(k), xi) * m;
    if (opts.renormalize_every != 0 && (k + 1) % opts.renormalize_every == 0) m.project_su11();
    out.push_back(m);
  }
  return out;
}

Amplitudes nlft_at(const ModulatedPotential& f, double xi, const NlftOptions& opts) {
  if (f.base.empty()) return {};
  const double eta = xi - f.modulation;
  TransferMatrix m;
  for (std::size_t k = 0; k < f.base.layers(); ++k) {
    m = layer_matrix(f.base.values()[k], f.base.width(k), eta) * m;
    if (opts.renormalize_every != 0 && (k + 1) % opts.renormalize_every == 0) m.project_su11();
  }
  // Rotated start (e^{-i pi x0 eta}, 0); undo the rotation at the right edge.
  const double x0 = f.base.left();
  const double xn = f.base.right();
  const double sign = opts.flip_boundary_phase ? -1.0 : 1.0;
  const cplx start = std::polar(1.0, -kPi * x0 * eta);
  Amplitudes out;
  out.a = m.m11 * start * std::polar(1.0, sign * kPi * xn * eta);
  out.b = m.m21 * start * std::polar(1.0, -sign * kPi * xn * eta);
  return out;
}

ScatteringData nlft(const ModulatedPotential& f, std::span<const double> xi,
                    const NlftOptions& opts) {
  ScatteringData out;
  out.xi.assign(xi.begin(), xi.end());
  out.a.resize(xi.size());
  out.b.resize(xi.size());
  parallel_for(xi.size(), opts.threads, [&](std::size_t i) {
    const Amplitudes ab = nlft_at(f, xi[i], opts);
    out.a[i] = ab.a;
    out.b[i] = ab.b;
  });
  return out;
}

ScatteringData nlft(const ModulatedPotential& f, const SpectralGrid& grid,
                    const NlftOptions& opts) {
  const std::vector<double> nodes = grid.nodes();
  return nlft(f, nodes, opts);
}

Amplitudes nlft_ode_oracle(const ModulatedPotential& f, double xi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("ode oracle: step must be positive");
  if (f.base.empty()) return {};
  if (step > f.base.min_width() * (1.0 + 1e-12))
    throw std::invalid_argument("ode oracle: step exceeds the smallest layer width");
  // Coefficient g(x) = f_k e^{2 pi i x (xi0 - xi)}; a' = conj(g) b, b' = g a.
  const double nu = 2.0 * kPi * (f.modulation - xi);
  cplx a{1.0}, b{};
  for (std::size_t k = 0; k < f.base.layers(); ++k) {
    const cplx value = f.base.values()[k];
    const double lo = f.base.breakpoints()[k];
    const double width = f.base.width(k);
    const auto steps = static_cast<std::size_t>(std::ceil(width / step - 1e-9));
    const double h = width / static_cast<double>(steps);
    const auto g = [&](double x) { return value * std::polar(1.0, nu * x); };
    for (std::size_t s = 0; s < steps; ++s) {
      const double x = lo + h * static_cast<double>(s);
      const cplx g0 = g(x), gm = g(x + 0.5 * h), g1 = g(x + h);
      const cplx ka1 = std::conj(g0) * b, kb1 = g0 * a;
      const cplx a2 = a + 0.5 * h * ka1, b2 = b + 0.5 * h * kb1;
      const cplx ka2 = std::conj(gm) * b2, kb2 = gm * a2;
      const cplx a3 = a + 0.5 * h * ka2, b3 = b + 0.5 * h * kb2;
      const cplx ka3 = std::conj(gm) * b3, kb3 = gm * a3;
      const cplx a4 = a + h * ka3, b4 = b + h * kb3;
      const cplx ka4 = std::conj(g1) * b4, kb4 = g1 * a4;
      a += h / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
      b += h / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
    }
  }
  return {a, b};
}

std::vector<cplx> reflection_trace(const ModulatedPotential& f, double xi,
                                   std::span<const double> nodes) {
  std::vector<cplx> out(nodes.size());
  if (f.base.empty()) return out;
  if (!std::is_sorted(nodes.begin(), nodes.end()))
    throw std::invalid_argument("reflection_trace: nodes must be sorted");
  if (!nodes.empty() && (nodes.front() < f.base.left() || nodes.back() > f.base.right()))
    throw std::invalid_argument("reflection_trace: nodes must lie inside the support");

  const double eta = xi - f.modulation;
  const auto x = f.base.breakpoints();
  TransferMatrix m;
  std::size_t k = 0;  // m is the product over layers [0, k)
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double u = nodes[i];
    while (k < f.base.layers() && x[k + 1] <= u) {
      m = layer_matrix(f.base.values()[k], f.base.width(k), eta) * m;
      ++k;
    }
    TransferMatrix mu = m;
    if (k < f.base.layers() && u > x[k]) mu = layer_matrix(f.base.values()[k], u - x[k], eta) * m;
    // r = b/a with b = b~ e^{-i pi u eta}, a = a~ e^{i pi u eta}.
    const cplx r = (mu.m21 / mu.m11) * std::polar(1.0, -2.0 * kPi * u * eta);
    if (!(std::abs(r) < 1.0)) throw std::logic_error("reflection_trace: |r| >= 1");
    out[i] = r;
  }
  return out;
}

TruncationReport truncation_convergence(const PiecewisePotential& f, const SpectralGrid& grid,
                                        std::span<const double> radii, const NlftOptions& opts) {
  if (radii.empty()) throw std::invalid_argument("truncation: need at least one radius");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("truncation: radii must increase");
  const std::vector<double> nodes = grid.nodes();
  const ScatteringData ref = nlft(truncate(f, radii.back()), nodes, opts);

  TruncationReport rep;
  rep.radii.assign(radii.begin(), radii.end());
  for (double r : radii) {
    const ScatteringData d = nlft(truncate(f, r), nodes, opts);
    double sup = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      sup = std::max(sup, std::abs(d.a[i] - ref.a[i]) + std::abs(d.b[i] - ref.b[i]));
    rep.sup_difference.push_back(sup);
  }
  for (std::size_t i = 1; i < rep.sup_difference.size(); ++i)
    if (rep.sup_difference[i] > rep.sup_difference[i - 1]) rep.nonincreasing = false;
  return rep;
}

}  // namespace nlft
