#pragma once

#include <span>
#include <vector>

#include "nlft/numerics.hpp"
#include "nlft/potential.hpp"

namespace nlft {

/// 2x2 propagator for the rotated state (a e^{-i pi x xi}, b e^{i pi x xi}).
/// Single-layer propagators have the SU(1,1) shape m22 = conj(m11),
/// m21 = conj(m12) and unit determinant.
struct TransferMatrix {
  cplx m11{1.0}, m12{}, m21{}, m22{1.0};

  static TransferMatrix identity() { return {}; }
  cplx det() const { return m11 * m22 - m12 * m21; }

  /// Restores m22 = conj(m11) and m21 = conj(m12) from the first row.
  void project_su11() {
    m22 = std::conj(m11);
    m21 = std::conj(m12);
  }

  friend TransferMatrix operator*(const TransferMatrix& l, const TransferMatrix& r) {
    return {l.m11 * r.m11 + l.m12 * r.m21, l.m11 * r.m12 + l.m12 * r.m22,
            l.m21 * r.m11 + l.m22 * r.m21, l.m21 * r.m12 + l.m22 * r.m22};
  }
};

/// Exact exp(h M) for M = [[-i pi xi, conj(value)], [value, i pi xi]].
/// Throws std::invalid_argument for width <= 0.
TransferMatrix layer_matrix(cplx value, double width, double xi);

/// Uniform grid of `count` (odd, >= 3) nodes symmetric about 0 on [-xi_max, xi_max].
struct SpectralGrid {
  double xi_max = 8.0;
  std::size_t count = 257;

  void validate() const;
  double spacing() const { return 2.0 * xi_max / static_cast<double>(count - 1); }
  std::vector<double> nodes() const;
};

struct Amplitudes {
  cplx a{1.0};
  cplx b{};
};

struct ScatteringData {
  std::vector<double> xi;
  std::vector<cplx> a;
  std::vector<cplx> b;

  std::size_t size() const { return xi.size(); }
  /// log|a|^2, evaluated as log1p(|b|^2) so small potentials keep full
  /// relative precision.
  double log_a2(std::size_t i) const;
  cplx reflection(std::size_t i) const { return b[i] / a[i]; }
};

struct NlftOptions {
  unsigned threads = 1;
  /// Re-project the running product onto the SU(1,1) shape every this many
  /// layers; 0 disables.
  std::size_t renormalize_every = 1024;
  /// Negative control for the verification suite: flips the sign of the
  /// boundary phase restored at the right edge. Never set in production use.
  bool flip_boundary_phase = false;
};

/// Running transfer products at each breakpoint of f, for frequency xi
/// (modulation not applied). Entry k is the product over layers [0, k).
std::vector<TransferMatrix> prefix_matrices(const PiecewisePotential& f, double xi,
                                            const NlftOptions& opts = {});

/// (a(xi), b(xi)) for one frequency.
Amplitudes nlft_at(const ModulatedPotential& f, double xi, const NlftOptions& opts = {});

ScatteringData nlft(const ModulatedPotential& f, std::span<const double> xi,
                    const NlftOptions& opts = {});
ScatteringData nlft(const ModulatedPotential& f, const SpectralGrid& grid,
                    const NlftOptions& opts = {});

/// Classical fixed-step RK4 on the unrotated system, steps aligned to the
/// breakpoints. Requires 0 < step <= smallest layer width.
Amplitudes nlft_ode_oracle(const ModulatedPotential& f, double xi, double step);

/// r(x, xi) = b(x, xi) / a(x, xi) at each node; nodes sorted inside [left, right].
std::vector<cplx> reflection_trace(const ModulatedPotential& f, double xi,
                                   std::span<const double> nodes);

struct TruncationReport {
  std::vector<double> radii;
  /// sup over the grid of |a_R - a_Rmax| + |b_R - b_Rmax|.
  std::vector<double> sup_difference;
  bool nonincreasing = true;
};

TruncationReport truncation_convergence(const PiecewisePotential& f, const SpectralGrid& grid,
                                        std::span<const double> radii,
                                        const NlftOptions& opts = {});

}  // namespace nlft
