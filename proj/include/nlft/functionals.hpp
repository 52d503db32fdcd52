#pragma once

#include <span>
#include <vector>

#include "nlft/numerics.hpp"
#include "nlft/potential.hpp"
#include "nlft/scattering.hpp"

namespace nlft {

/// Quartic operator: Re of the integral of F(x1) F(x2) conj(F(x3) F(x4)) over
/// {min(x1, x2) > max(x3, x4)}, F(x) = f(x) e^{-2 pi i x xi}. Evaluated through
/// the one-dimensional reduction 2 Re int conj(F(u)) conj(P(u)) T(u)^2 du with
/// P, T the prefix and suffix integrals of F.
Estimate quartic_q(const ModulatedPotential& f, double xi, double tol = 1e-12);

/// Quadrilinear form with f1, f2 in the upper pair of variables and f3, f4
/// (conjugated) in the lower pair. phi_quadrilinear(f, f, f, f) = quartic_q(f).
Estimate phi_quadrilinear(const ModulatedPotential& f1, const ModulatedPotential& f2,
                          const ModulatedPotential& f3, const ModulatedPotential& f4, double xi,
                          double tol = 1e-12);

/// log|a|^2 - |f^|^2 + Q f, which is the error operator by the expansion identity.
Estimate error_e_residual(const ModulatedPotential& f, double xi, double tol = 1e-12);

/// The error operator from its two quartic integrals with r^2 weights,
/// reduced to nested one-dimensional integrals. Panels per layer are doubled
/// until successive results agree to `tol` (or a refinement cap is hit).
Estimate error_e_direct(const ModulatedPotential& f, double xi, double tol = 1e-9);

struct ExpansionRow {
  double xi = 0.0;
  double log_a2 = 0.0;
  double fhat_sq = 0.0;
  double q_op = 0.0;
  double q_err = 0.0;
  double e_residual = 0.0;
  /// ||f||_1^2 (F* f)^2 and 12 ||f||_1^4 (F* f)^2 with the certified upper value of F*.
  double bound_q = 0.0;
  double bound_e = 0.0;
  /// log_a2 - (fhat_sq - q_op + e_residual).
  double identity_error() const { return log_a2 - (fhat_sq - q_op + e_residual); }
};

struct ExpansionOptions {
  double tol = 1e-12;
  int fstar_refinement = 64;
  unsigned threads = 1;
};

std::vector<ExpansionRow> expansion_report(const ModulatedPotential& f, std::span<const double> xi,
                                           const ExpansionOptions& opts = {});

/// Integral of Q f(xi) |f^(xi)|^{q-2} over the line.
struct HValue {
  double value = 0.0;
  /// Estimated contribution beyond the grid ends (already included in value).
  double tail = 0.0;
  /// Accumulated quadrature error of the Q evaluations, propagated to the integral.
  double quadrature_error = 0.0;
};

/// Trapezoid rule on a uniform symmetric grid with a power-law tail model.
HValue h_from_samples(std::span<const double> xi, std::span<const double> q_op,
                      std::span<const double> abs_fhat, std::span<const double> q_err, double q);

HValue h_functional(const ModulatedPotential& f, double p, const SpectralGrid& grid,
                    double tol = 1e-12, unsigned threads = 1);

/// Quotients from the proof of the elementary inequalities, as functions of t = v/u.
/// Part (a): (|1+t|^{q/2} - 1 - (q/2) t) / (|t|^{q/2} [+ t^2 when q > 4]).
/// Part (b): ||1+t|^{q-2} - 1| / (|t|^{q-2} [+ |t| when q > 3]).
double lemma_quotient_a(double q, double t);
double lemma_quotient_b(double q, double t);

struct LemmaLimits {
  double zero_pos = 0.0;
  double zero_neg = 0.0;
  double inf_pos = 0.0;
  double inf_neg = 0.0;
};

struct LemmaReport {
  double q = 0.0;
  /// Grid suprema, the empirical stand-ins for the constants D_q and E_q.
  double sup_a = 0.0;
  double sup_b = 0.0;
  double argsup_a = 0.0;
  double argsup_b = 0.0;
  /// One-sided limits extrapolated (Aitken delta-squared) from the grid.
  LemmaLimits limits_a;
  LemmaLimits limits_b;
  bool finite = true;
  /// Grid points where the quotient exceeds the reported supremum (always 0 by construction,
  /// kept as a wiring check).
  std::size_t violations = 0;
};

/// Log-spaced +-10^{-8} .. +-10^{6} (eight points per decade) plus fine
/// neighbourhoods of 0 and -1. Sorted.
std::vector<double> default_lemma_grid();

/// Throws std::invalid_argument unless q > 2.
LemmaReport lemma_numeric_check(double q, std::span<const double> t_grid);

/// Aitken delta-squared limit of three terms; falls back to the last term when
/// the second difference vanishes.
double aitken(double s0, double s1, double s2);

}  // namespace nlft
