#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nlft/numerics.hpp"

namespace nlft {

/// Compactly supported step function. Layer k carries values()[k] on
/// [breakpoints()[k], breakpoints()[k+1]); the function vanishes outside
/// [left(), right()]. Immutable once constructed.
class PiecewisePotential {
 public:
  /// The zero potential (no layers).
  PiecewisePotential() = default;

  /// Throws std::invalid_argument unless the breakpoints are finite and
  /// strictly increasing and there is exactly one value per layer.
  PiecewisePotential(std::vector<double> breakpoints, std::vector<cplx> values);

  static PiecewisePotential box(double lo, double hi, cplx value);

  std::span<const double> breakpoints() const { return x_; }
  std::span<const cplx> values() const { return v_; }
  std::size_t layers() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double left() const;
  double right() const;
  double width(std::size_t k) const { return x_[k + 1] - x_[k]; }
  double min_width() const;
  double max_abs_value() const;

  /// Point evaluation (right-continuous at breakpoints).
  cplx operator()(double x) const;

  PiecewisePotential scaled(cplx c) const;

  /// Merges adjacent layers with equal values and strips zero-valued layers at
  /// either end. Two potentials describe the same function iff their
  /// canonical forms compare equal.
  PiecewisePotential canonical() const;

  friend bool operator==(const PiecewisePotential& a, const PiecewisePotential& b) {
    return a.x_ == b.x_ && a.v_ == b.v_;
  }

 private:
  std::vector<double> x_;
  std::vector<cplx> v_;
};

/// True when both describe the same function on the real line.
bool same_function(const PiecewisePotential& f, const PiecewisePotential& g);

/// A step potential multiplied by exp(2 pi i x * modulation). Modulated step
/// functions are not step functions; the scattering and Fourier routines
/// absorb the modulation as an exact frequency shift.
struct ModulatedPotential {
  PiecewisePotential base;
  double modulation = 0.0;

  ModulatedPotential() = default;
  ModulatedPotential(PiecewisePotential f, double xi0 = 0.0)  // NOLINT: implicit by design
      : base(std::move(f)), modulation(xi0) {}

  cplx operator()(double x) const;
};

/// Finite union of closed, pairwise disjoint intervals with positive total
/// measure. Touching intervals are merged.
class IntervalSet {
 public:
  explicit IntervalSet(std::vector<std::pair<double, double>> intervals);
  std::span<const std::pair<double, double>> intervals() const { return iv_; }
  double measure() const { return measure_; }
  IntervalSet dilated(double lambda) const;

 private:
  std::vector<std::pair<double, double>> iv_;
  double measure_ = 0.0;
};

struct HypothesisConfig {
  double p = 4.0 / 3.0;
  double A = 1.0;
  double lambda = 0.5;
  double delta = 0.1;

  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

/// Outcome of the three small-potential hypotheses. Margins are signed slacks:
/// nonnegative exactly when the corresponding condition holds.
struct HypothesisReport {
  bool small_l1 = false;       // (i)   ||f||_1 <= delta
  bool concentrated = false;   // (ii)  ||f||_{L1(S)} >= lambda ||f||_1
  bool lp_controlled = false;  // (iii) ||f||_p^p <= A |S|^{1-p} ||f||_1
  double margin_small_l1 = 0.0;
  double margin_concentrated = 0.0;
  double margin_lp_controlled = 0.0;
  bool all() const { return small_l1 && concentrated && lp_controlled; }
};

/// Exact L^p norm of a step function, p >= 1.
double lp_norm(const PiecewisePotential& f, double p);
double lp_norm(const ModulatedPotential& f, double p);

/// Exact integral of |f| over S.
double l1_norm_on_set(const PiecewisePotential& f, const IntervalSet& s);

HypothesisReport check_hypotheses(const PiecewisePotential& f, const IntervalSet& s,
                                  const HypothesisConfig& cfg);

/// f * 1_[-R, R].
PiecewisePotential truncate(const PiecewisePotential& f, double radius);

namespace sym {
struct Unimodular {
  double theta;
};
struct Modulation {
  double xi0;
};
struct Translation {
  double x0;
};
/// f -> lambda^{-1} f(x / lambda), preserving the L^1 norm.
struct Dilation {
  double lambda;
};
struct Conjugation {};
}  // namespace sym

using Symmetry =
    std::variant<sym::Unimodular, sym::Modulation, sym::Translation, sym::Dilation, sym::Conjugation>;

ModulatedPotential apply_symmetry(const ModulatedPotential& f, const Symmetry& s);

std::string describe(const Symmetry& s);

}  // namespace nlft
