#pragma once

#include <span>
#include <vector>

#include "nlft/gaussians.hpp"
#include "nlft/numerics.hpp"
#include "nlft/potential.hpp"

namespace nlft {

/// f^(xi) = integral of f(x) e^{-2 pi i x xi} dx, exact for step potentials.
cplx linear_ft(const ModulatedPotential& f, double xi);
std::vector<cplx> linear_ft(const ModulatedPotential& f, std::span<const double> xi,
                            unsigned threads = 1);

/// Closed-form transform c sqrt(pi/alpha) exp((v - 2 pi i xi)^2 / (4 alpha)).
cplx gaussian_ft(const GaussianParams& g, double xi);

/// Partial integrals G(x) = integral_{-inf}^x f(t) e^{-2 pi i t xi} dt of a
/// step potential at fixed xi. prefix[k] = G(x_k); suffix[k] = f^(xi) - G(x_k),
/// each accumulated separately so neither loses precision near its end.
struct PrefixCurve {
  double xi = 0.0;
  std::vector<double> breakpoints;
  std::vector<cplx> values;
  std::vector<cplx> prefix;
  std::vector<cplx> suffix;

  /// G(x) for x inside layer k (closed form: a circular arc, or a segment at xi = 0).
  cplx in_layer(std::size_t k, double x) const;
  /// f^(xi) - G(x) for x inside layer k.
  cplx tail_in_layer(std::size_t k, double x) const;
  cplx total() const { return prefix.empty() ? cplx{} : prefix.back(); }
};

PrefixCurve prefix_curve(const PiecewisePotential& f, double xi);

struct MaxTruncatedFt {
  /// Largest sampled chord of the prefix curve (a lower bound for F* f(xi)).
  double value = 0.0;
  /// F* f(xi) <= value + error_bound.
  double error_bound = 0.0;
  double upper() const { return value + error_bound; }
};

/// Maximally truncated transform: sup over intervals I of |int_I f e^{-2 pi i x xi}|,
/// as the diameter of the prefix curve sampled at breakpoints plus `refinement`
/// interior nodes per layer.
MaxTruncatedFt max_truncated_ft(const ModulatedPotential& f, double xi, int refinement);

}  // namespace nlft
