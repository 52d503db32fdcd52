#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nlft {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Neumaier (improved Kahan) summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
    return *this;
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

/// sin(u)/u with the removable singularity filled in.
inline double sinc(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

/// Exact value of the integral of exp(-2 pi i t xi) over [lo, hi].
/// Written as a phase times a sinc so that xi -> 0 needs no special case.
inline cplx exp_segment_integral(double lo, double hi, double xi) {
  const double h = hi - lo;
  const double phase = -kPi * (lo + hi) * xi;
  return std::polar(h * sinc(kPi * h * xi), phase);
}

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule for 1 <= n <= 64. Thread-safe.
const GaussRule& gauss_legendre(int n);

/// Apply an n-point rule on [lo, hi] to a callable returning double or cplx.
template <class Fn>
auto gauss_integrate(const Fn& fn, double lo, double hi, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  using R = decltype(fn(mid));
  R acc{};
  for (std::size_t j = 0; j < rule.nodes.size(); ++j)
    acc += rule.weights[j] * fn(mid + half * rule.nodes[j]);
  return acc * half;
}

/// Value with an error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Integrate a smooth complex integrand over [lo, hi] whose oscillation rate is
/// bounded by `omega` (radians per unit length). Panels carry at most ~2 rad of
/// phase; each panel compares 6- and 12-point rules and bisects while the
/// difference exceeds its share of `tol`. Returns the 12-point sum and the
/// accumulated difference as the error estimate.
template <class Fn>
std::pair<cplx, double> integrate_oscillatory(const Fn& fn, double lo, double hi,
                                              double omega, double tol) {
  if (!(hi > lo)) return {cplx{}, 0.0};
  const double len = hi - lo;
  const auto panels = static_cast<std::size_t>(std::ceil(omega * len / 2.0)) + 1;
  const double width = len / static_cast<double>(panels);
  CompensatedComplexSum total;
  double err = 0.0;

  struct Pending {
    double a, b;
    int depth;
  };
  std::vector<Pending> stack;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = lo + width * static_cast<double>(k);
    const double b = (k + 1 == panels) ? hi : a + width;
    stack.push_back({a, b, 0});
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      const cplx coarse = gauss_integrate(fn, p.a, p.b, 6);
      const cplx fine = gauss_integrate(fn, p.a, p.b, 12);
      const double diff = std::abs(fine - coarse);
      const double share = tol * (p.b - p.a) / len;
      if (diff <= share || p.depth >= 20) {
        total += fine;
        err += diff;
      } else {
        const double m = 0.5 * (p.a + p.b);
        stack.push_back({m, p.b, p.depth + 1});
        stack.push_back({p.a, m, p.depth + 1});
      }
    }
  }
  return {total.value(), err};
}

/// Ordinary least-squares slope and intercept of y against x, with R^2.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x).
LinearFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace nlft
