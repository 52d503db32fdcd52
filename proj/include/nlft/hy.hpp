#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nlft/numerics.hpp"
#include "nlft/potential.hpp"
#include "nlft/scattering.hpp"

namespace nlft {

/// B_p = p^{1/(2p)} q^{-1/(2q)} for p in [1, 2]; B_1 = 1.
double beckner(double p);

/// Conjugate exponent p / (p - 1).
double conjugate_exponent(double p);

/// An L^q norm over the frequency line from a trapezoid sum plus a tail model.
struct SpectralNorm {
  /// Norm including the modelled tail.
  double value = 0.0;
  /// Norm of the grid part alone.
  double grid_value = 0.0;
  /// value - grid_value.
  double tail = 0.0;
};

struct AdaptiveGridOptions {
  /// Node spacing; 0 picks 1/(8 L) with L the support length of f.
  double spacing = 0.0;
  /// Initial half-width; 0 picks 16 / L.
  double xi_max = 0.0;
  double rtol = 1e-6;
  int max_doublings = 10;
  /// Extra doublings after convergence.
  int extra_doublings = 0;
  unsigned threads = 1;
};

struct HYReport {
  double p = 0.0, q = 0.0;
  double l1 = 0.0, lp = 0.0;
  SpectralNorm fhat_q;
  SpectralNorm nonlinear_q;
  double beckner = 0.0;
  double linear_ratio = 0.0;
  double nonlinear_ratio = 0.0;
  /// B_p - nonlinear_ratio.
  double deficit = 0.0;
  /// B_p e^{||f||_1} ||f||_p - nonlinear L^q norm.
  double altineq_slack = 0.0;
  double xi_max = 0.0;
  double spacing = 0.0;
  int doublings = 0;
  bool converged = false;
  /// Relative change of each norm at the last doubling.
  double last_change_linear = 0.0;
  double last_change_nonlinear = 0.0;
};

/// Both Hausdorff-Young numerators on a uniform grid whose half-width doubles
/// until each tail-corrected norm changes by less than rtol. Throws
/// std::invalid_argument for f = 0 ("ratio undefined for f = 0") or p outside (1, 2).
HYReport nonlinear_ratio(const ModulatedPotential& f, double p, const AdaptiveGridOptions& opts = {},
                         const NlftOptions& nlft_opts = {});

/// ||g||_q over the line from samples on a uniform symmetric grid (nodes
/// sorted). Tail beyond the grid modelled as C |xi|^{-q}, with C the mean of
/// |g| |xi|^q over the outer half of each side.
SpectralNorm spectral_norm(std::span<const double> xi, std::span<const double> abs_g, double q);

struct SweepRow {
  double c = 0.0;
  HYReport report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// deficit = intercept + eps_hat * c^2 ||shape||_1^2 (least squares). Empirical, not certified.
  LinearFit deficit_fit;
  double eps_hat() const { return deficit_fit.slope; }
  /// Log-log slope of linear_ratio - nonlinear_ratio against c.
  LinearFit gap_fit;
  bool deficit_positive = true;
  bool nonlinear_below_linear = true;
  double min_altineq_slack = 0.0;
  /// The constant of the main inequality as a formula; never evaluated (depends on an unknown constant).
  std::string gamma_formula;
};

SweepResult small_potential_sweep(const PiecewisePotential& shape, double p, std::span<const double> c_list,
                                  const AdaptiveGridOptions& opts = {});

struct SearchFamily {
  std::size_t layers = 4;
  double lo = 0.0;
  double hi = 1.0;
  /// Box bound on the real and imaginary part of each layer value.
  double value_bound = 1.0;
  /// Candidates with smaller L^1 norm are rejected.
  double l1_floor = 1e-2;
};

struct SearchOptions {
  int iterations = 100;
  std::uint64_t seed = 1;
  int restarts = 1;
  double step = 0.2;
  double rtol = 1e-5;
  unsigned threads = 1;
};

struct SearchStep {
  int iteration = 0;
  double rho = 0.0;
  double best_rho = 0.0;
  bool accepted = false;
};

struct SearchResult {
  PiecewisePotential best;
  double rho = 0.0;
  HYReport report;
  /// Log of the winning restart.
  std::vector<SearchStep> log;
  int restart = 0;
};

/// rho(f) = ||(log|a|^2)^{1/2}||_q / ||f^||_q.
double rho_of(const HYReport& r);

/// Seeded hill climbing over step potentials of a fixed layout maximising rho.
SearchResult counterexample_search(double p, const SearchFamily& family, const SearchOptions& opts);

}  // namespace nlft
