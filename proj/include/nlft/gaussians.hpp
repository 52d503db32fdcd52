#pragma once

#include <cstdint>

#include "nlft/numerics.hpp"
#include "nlft/potential.hpp"

namespace nlft {

/// G(x) = c exp(-alpha x^2 + v x) with alpha > 0.
struct GaussianParams {
  cplx c{1.0};
  double alpha = kPi;
  cplx v{};

  /// e^{-pi x^2}.
  static GaussianParams standard() { return {}; }

  void validate() const;
  cplx operator()(double x) const { return c * std::exp(-alpha * x * x + v * x); }

  /// Peak height |c| e^{Re(v)^2 / (4 alpha)} of |G|.
  double peak() const;
  /// Location Re(v) / (2 alpha) of the peak of |G|.
  double center() const { return v.real() / (2.0 * alpha); }
};

/// Closed-form ||G||_p = |c| e^{Re(v)^2/(4 alpha)} (pi / (p alpha))^{1/(2p)}.
double gaussian_lp_norm(const GaussianParams& g, double p);

/// The Fourier transform of G written again as a Gaussian in xi.
GaussianParams gaussian_transform(const GaussianParams& g);

/// G = scaling * M_modulation T_translation D_dilation (e^{-pi x^2}), where
/// M multiplies by e^{2 pi i x xi0}, T shifts by x0 and D is the L^1-normalized
/// dilation x -> lambda^{-1} g(x / lambda).
struct StandardForm {
  cplx scaling{1.0};
  double modulation = 0.0;
  double translation = 0.0;
  double dilation = 1.0;
};

StandardForm standard_form(const GaussianParams& g);

/// Evaluates the inverse symmetries applied to G at x; equals e^{-pi x^2}.
cplx reduce_to_standard(const GaussianParams& g, const StandardForm& s, double x);

/// Applies the forward symmetries of `s` to a (discretized) standard profile.
ModulatedPotential apply_standard_form(const PiecewisePotential& standard, const StandardForm& s);

/// Midpoint step approximation of G on a window, with rigorous bounds on the
/// approximation error (window tails in closed form plus a per-layer
/// Lipschitz bound).
struct Discretization {
  PiecewisePotential potential;
  GaussianParams gaussian;
  double lo = 0.0, hi = 0.0;

  /// Upper bound on ||potential - G||_1.
  double l1_error_bound() const { return lp_error_bound(1.0); }
  /// Upper bound on ||potential - G||_p.
  double lp_error_bound(double p) const;
};

Discretization sample_to_potential(const GaussianParams& g, double lo, double hi, std::size_t layers);

/// integral of |G|^p outside [lo, hi], in closed form.
double gaussian_tail_pp(const GaussianParams& g, double lo, double hi, double p);

/// ||f - G||_p with 8-point Gauss-Legendre panels on the support of f and
/// closed-form Gaussian tails outside it.
double lp_distance(const ModulatedPotential& f, const GaussianParams& g, double p);

struct DistOptions {
  int starts = 8;
  std::uint64_t seed = 1;
  int max_evaluations = 3000;
  double ftol = 1e-12;
  unsigned threads = 1;
};

struct DistResult {
  /// Smallest ||f - G||_p found: an upper bound on the distance to the Gaussians.
  double distance = 0.0;
  GaussianParams best;
  bool converged = false;
  int starts = 0;
  int evaluations = 0;
};

/// Initial guess from the mass, mean, spread and dominant frequency of f.
GaussianParams moment_matched_gaussian(const ModulatedPotential& f);

/// Multi-start Nelder-Mead over the centered parameters (amplitude, log alpha,
/// center, frequency) of the Gaussian.
DistResult dist_p(const ModulatedPotential& f, double p, const DistOptions& opts = {});

/// Single Nelder-Mead run from a given starting Gaussian.
DistResult dist_p_from(const ModulatedPotential& f, double p, const GaussianParams& start,
                       const DistOptions& opts = {});

}  // namespace nlft
