#include "nlft/functionals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlft/linear.hpp"
#include "nlft/parallel.hpp"

namespace nlft {
namespace {

/// Prefix/suffix integrals of one potential, evaluated anywhere on the line.
struct CurveView {
  PrefixCurve curve;
  bool empty = true;

  explicit CurveView(const PiecewisePotential& f, double eta) : curve(prefix_curve(f, eta)), empty(f.empty()) {}

  /// Layer containing u, or -1 left of the support, or layers() right of it.
  std::ptrdiff_t locate(double u) const {
    const auto& x = curve.breakpoints;
    if (empty || u < x.front()) return -1;
    if (u >= x.back()) return static_cast<std::ptrdiff_t>(curve.values.size());
    const auto it = std::upper_bound(x.begin(), x.end(), u);
    return static_cast<std::ptrdiff_t>(it - x.begin()) - 1;
  }

  struct Point {
    cplx F, P, T;
  };

  Point at(std::ptrdiff_t k, double u) const {
    if (empty) return {};
    const auto n = static_cast<std::ptrdiff_t>(curve.values.size());
    if (k < 0) return {cplx{}, cplx{}, curve.total()};
    if (k >= n) return {cplx{}, curve.total(), cplx{}};
    const auto kk = static_cast<std::size_t>(k);
    return {curve.values[kk] * std::polar(1.0, -2.0 * kPi * u * curve.xi), curve.in_layer(kk, u),
            curve.tail_in_layer(kk, u)};
  }
};

double total_length(std::span<const double> cells) { return cells.back() - cells.front(); }

}  // namespace

Estimate quartic_q(const ModulatedPotential& f, double xi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("quartic_q: tol must be positive");
  const PiecewisePotential& base = f.base;
  if (base.empty()) return {};
  const double eta = xi - f.modulation;
  const PrefixCurve c = prefix_curve(base, eta);
  const double omega = 4.0 * kPi * std::abs(eta);
  const double len = base.right() - base.left();

  CompensatedComplexSum sum;
  double err = 0.0;
  for (std::size_t k = 0; k < base.layers(); ++k) {
    const double a = base.breakpoints()[k], b = base.breakpoints()[k + 1];
    const cplx fk = base.values()[k];
    if (fk == cplx{}) continue;
    const auto integrand = [&](double u) {
      const cplx F = fk * std::polar(1.0, -2.0 * kPi * u * eta);
      const cplx T = c.tail_in_layer(k, u);
      return std::conj(F) * std::conj(c.in_layer(k, u)) * T * T;
    };
    const auto [v, e] = integrate_oscillatory(integrand, a, b, omega, tol * (b - a) / len / 2.0);
    sum += v;
    err += e;
  }
  return {2.0 * sum.value().real(), 2.0 * err};
}

Estimate phi_quadrilinear(const ModulatedPotential& f1, const ModulatedPotential& f2,
                          const ModulatedPotential& f3, const ModulatedPotential& f4, double xi,
                          double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("phi_quadrilinear: tol must be positive");
  const std::array<const ModulatedPotential*, 4> fs{&f1, &f2, &f3, &f4};
  std::vector<double> cells;
  for (const auto* f : fs) {
    if (f->base.empty()) return {};
    cells.insert(cells.end(), f->base.breakpoints().begin(), f->base.breakpoints().end());
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  std::vector<CurveView> views;
  double omega = 0.0;
  for (const auto* f : fs) {
    views.emplace_back(f->base, xi - f->modulation);
    omega += 2.0 * kPi * std::abs(xi - f->modulation);
  }
  const double len = total_length(cells);

  CompensatedComplexSum sum;
  double err = 0.0;
  for (std::size_t j = 0; j + 1 < cells.size(); ++j) {
    const double a = cells[j], b = cells[j + 1];
    const double mid = 0.5 * (a + b);
    std::array<std::ptrdiff_t, 4> idx{};
    for (std::size_t i = 0; i < 4; ++i) idx[i] = views[i].locate(mid);
    const auto n3 = static_cast<std::ptrdiff_t>(f3.base.layers());
    const auto n4 = static_cast<std::ptrdiff_t>(f4.base.layers());
    const bool lower_live = (idx[2] >= 0 && idx[2] < n3) || (idx[3] >= 0 && idx[3] < n4);
    if (!lower_live) continue;
    const auto integrand = [&](double u) {
      const auto p1 = views[0].at(idx[0], u);
      const auto p2 = views[1].at(idx[1], u);
      const auto p3 = views[2].at(idx[2], u);
      const auto p4 = views[3].at(idx[3], u);
      return p1.T * p2.T * (std::conj(p3.F) * std::conj(p4.P) + std::conj(p4.F) * std::conj(p3.P));
    };
    const auto [v, e] = integrate_oscillatory(integrand, a, b, omega, tol * (b - a) / len);
    sum += v;
    err += e;
  }
  return {sum.value().real(), err};
}

Estimate error_e_residual(const ModulatedPotential& f, double xi, double tol) {
  if (f.base.empty()) return {};
  const Amplitudes s = nlft_at(f, xi);
  const double log_a2 = std::log1p(std::norm(s.b));
  const double fhat_sq = std::norm(linear_ft(f, xi));
  const Estimate q = quartic_q(f, xi, tol);
  return {log_a2 - fhat_sq + q.value, q.error};
}

namespace {

double e_direct_pass(const PiecewisePotential& f, double eta, int multiplier) {
  constexpr int kNodes = 16;
  const GaussRule& rule = gauss_legendre(kNodes);
  const PrefixCurve c = prefix_curve(f, eta);
  const std::vector<TransferMatrix> pre = prefix_matrices(f, eta);

  auto reflection = [&](std::size_t k, double u) {
    const double h = u - f.breakpoints()[k];
    const TransferMatrix m = (h > 0.0) ? layer_matrix(f.values()[k], h, eta) * pre[k] : pre[k];
    return (m.m21 / m.m11) * std::polar(1.0, -2.0 * kPi * u * eta);
  };

  CompensatedComplexSum total;
  cplx k_run{};  // integral of W = F conj(r)^2 from the left end
  for (std::size_t k = 0; k < f.layers(); ++k) {
    const double a = f.breakpoints()[k];
    const double h = f.width(k);
    const cplx fk = f.values()[k];
    auto W = [&](double u) {
      const cplx r = reflection(k, u);
      return fk * std::polar(1.0, -2.0 * kPi * u * eta) * std::conj(r * r);
    };
    const int base_panels = 1 + static_cast<int>(std::ceil(h * (2.0 * kPi * std::abs(eta) + std::abs(fk))));
    const int panels = base_panels * multiplier;
    const double w = h / panels;
    for (int p = 0; p < panels; ++p) {
      const double p0 = a + w * p;
      const double p1 = p0 + w;
      const double mid = 0.5 * (p0 + p1);
      cplx panel{};
      for (int i = 0; i < kNodes; ++i) {
        const double u = mid + 0.5 * w * rule.nodes[i];
        const cplx inner = k_run + gauss_integrate(W, p0, u, kNodes);
        const cplx F = fk * std::polar(1.0, -2.0 * kPi * u * eta);
        const cplx T = c.tail_in_layer(k, u);
        const cplx wu = W(u);
        const cplx term1 = 2.0 * T * T * (std::conj(F) * inner + wu * std::conj(c.in_layer(k, u)));
        const cplx term2 = 2.0 * wu * T * T * inner;
        panel += rule.weights[i] * (term1 - term2);
      }
      total += 0.5 * w * panel;
      k_run += gauss_integrate(W, p0, p1, kNodes);
    }
  }
  return total.value().real();
}

}  // namespace

Estimate error_e_direct(const ModulatedPotential& f, double xi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("error_e_direct: tol must be positive");
  if (f.base.empty()) return {};
  const double eta = xi - f.modulation;
  double prev = e_direct_pass(f.base, eta, 1);
  double diff = std::numeric_limits<double>::infinity();
  for (int m = 2; m <= 32; m *= 2) {
    const double cur = e_direct_pass(f.base, eta, m);
    diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= tol) break;
  }
  return {prev, diff};
}

std::vector<ExpansionRow> expansion_report(const ModulatedPotential& f, std::span<const double> xi,
                                           const ExpansionOptions& opts) {
  std::vector<ExpansionRow> rows(xi.size());
  const double l1 = lp_norm(f, 1.0);
  parallel_for(xi.size(), opts.threads, [&](std::size_t i) {
    ExpansionRow& r = rows[i];
    r.xi = xi[i];
    const Amplitudes s = nlft_at(f, xi[i]);
    r.log_a2 = std::log1p(std::norm(s.b));
    r.fhat_sq = std::norm(linear_ft(f, xi[i]));
    const Estimate q = quartic_q(f, xi[i], opts.tol);
    r.q_op = q.value;
    r.q_err = q.error;
    r.e_residual = r.log_a2 - r.fhat_sq + r.q_op;
    const double fstar = f.base.empty() ? 0.0 : max_truncated_ft(f, xi[i], opts.fstar_refinement).upper();
    r.bound_q = l1 * l1 * fstar * fstar;
    r.bound_e = 12.0 * l1 * l1 * l1 * l1 * fstar * fstar;
  });
  return rows;
}

HValue h_from_samples(std::span<const double> xi, std::span<const double> q_op,
                      std::span<const double> abs_fhat, std::span<const double> q_err, double q) {
  const std::size_t n = xi.size();
  if (n < 3 || q_op.size() != n || abs_fhat.size() != n || q_err.size() != n)
    throw std::invalid_argument("h_from_samples: mismatched or too short samples");
  const double h = xi[1] - xi[0];
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = q_op[i] * std::pow(abs_fhat[i], q - 2.0);

  CompensatedSum trap;
  double qerr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    trap += w * g[i];
    qerr += w * q_err[i] * std::pow(abs_fhat[i], q - 2.0);
  }

  const double xmax = std::max(std::abs(xi.front()), std::abs(xi.back()));
  double tail = 0.0;
  for (int side : {-1, 1}) {
    double acc = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = side * xi[i];
      if (s >= 0.5 * xmax && s <= xmax) {
        acc += g[i] * std::pow(s, q);
        ++count;
      }
    }
    if (count > 0) tail += (acc / count) * std::pow(xmax, 1.0 - q) / (q - 1.0);
  }
  return {trap.value() + tail, tail, qerr};
}

HValue h_functional(const ModulatedPotential& f, double p, const SpectralGrid& grid, double tol,
                    unsigned threads) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("h_functional: p must lie in (1, 2)");
  grid.validate();
  if (f.base.empty()) return {};
  const double q = p / (p - 1.0);
  const std::vector<double> xi = grid.nodes();
  std::vector<double> qv(xi.size()), qe(xi.size()), fh(xi.size());
  parallel_for(xi.size(), threads, [&](std::size_t i) {
    const Estimate e = quartic_q(f, xi[i], tol);
    qv[i] = e.value;
    qe[i] = e.error;
    fh[i] = std::abs(linear_ft(f, xi[i]));
  });
  return h_from_samples(xi, qv, fh, qe, q);
}

double lemma_quotient_a(double q, double t) {
  const double s = 0.5 * q;
  const bool extra = q > 4.0;
  const double at = std::abs(t);
  if (t == 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (at <= 0.1) {
    // Binomial series of (1+t)^s - 1 - s t.
    double term = s * t;
    double sum = 0.0;
    for (int k = 2; k < 80; ++k) {
      term *= (s - k + 1) / k * t;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum / (std::pow(at, s) + (extra ? t * t : 0.0));
  }
  if (at >= 1e3) {
    const double num = std::pow(std::abs(1.0 + 1.0 / t), s) - std::pow(at, -s) - s * t * std::pow(at, -s);
    return num / (1.0 + (extra ? std::pow(at, 2.0 - s) : 0.0));
  }
  const double num = std::pow(std::abs(1.0 + t), s) - 1.0 - s * t;
  return num / (std::pow(at, s) + (extra ? t * t : 0.0));
}

double lemma_quotient_b(double q, double t) {
  const double e = q - 2.0;
  const bool extra = q > 3.0;
  const double at = std::abs(t);
  if (t == 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (at >= 1e3) {
    const double num = std::abs(std::pow(std::abs(1.0 + 1.0 / t), e) - std::pow(at, -e));
    return num / (1.0 + (extra ? std::pow(at, 1.0 - e) : 0.0));
  }
  const double log_mod = (t > -1.0) ? std::log1p(t) : std::log(-1.0 - t);
  const double num = std::abs(std::expm1(e * log_mod));
  return num / (std::pow(at, e) + (extra ? at : 0.0));
}

double aitken(double s0, double s1, double s2) {
  const double d2 = s2 - 2.0 * s1 + s0;
  if (d2 == 0.0 || !std::isfinite(d2)) return s2;
  const double d1 = s2 - s1;
  return s2 - d1 * d1 / d2;
}

namespace {

/// Two rounds of Aitken on five terms of a geometric sample sequence.
double extrapolate(std::span<const double> s) {
  if (s.size() < 5) throw std::invalid_argument("extrapolate: need five terms");
  const double a0 = aitken(s[0], s[1], s[2]);
  const double a1 = aitken(s[1], s[2], s[3]);
  const double a2 = aitken(s[2], s[3], s[4]);
  return aitken(a0, a1, a2);
}

LemmaLimits limits_of(double (*quotient)(double, double), double q, std::span<const double> grid) {
  std::vector<double> pos, neg;
  for (double t : grid) (t > 0.0 ? pos : neg).push_back(t);
  if (pos.size() < 5 || neg.size() < 5) throw std::invalid_argument("lemma grid too small");
  // pos ascending; neg ascending (most negative first).
  auto sample = [&](auto first, auto last) {
    std::vector<double> v;
    for (auto it = first; it != last; ++it) v.push_back(quotient(q, *it));
    return v;
  };
  LemmaLimits out;
  // Approach each limit point monotonically: far-to-near order.
  out.zero_pos = extrapolate(sample(pos.rend() - 5, pos.rend()));
  out.zero_neg = extrapolate(sample(neg.end() - 5, neg.end()));
  out.inf_pos = extrapolate(sample(pos.end() - 5, pos.end()));
  out.inf_neg = extrapolate(sample(neg.rend() - 5, neg.rend()));
  return out;
}

}  // namespace

std::vector<double> default_lemma_grid() {
  std::vector<double> t;
  for (int k = -64; k <= 64; ++k) {
    const double v = std::pow(10.0, k / 8.0);
    t.push_back(v);
    t.push_back(-v);
  }
  for (int j = 1; j <= 50; ++j) {
    t.push_back(j * 1e-3);
    t.push_back(-j * 1e-3);
    t.push_back(-1.0 + j * 1e-3);
    t.push_back(-1.0 - j * 1e-3);
  }
  t.push_back(-1.0);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

LemmaReport lemma_numeric_check(double q, std::span<const double> t_grid) {
  if (!(q > 2.0) || !std::isfinite(q)) throw std::invalid_argument("lemma_numeric_check: q must exceed 2");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("lemma_numeric_check: grid must be sorted");
  LemmaReport rep;
  rep.q = q;
  rep.sup_a = rep.sup_b = -std::numeric_limits<double>::infinity();
  std::vector<double> grid;
  for (double t : t_grid) {
    if (t == 0.0) continue;
    grid.push_back(t);
    const double qa = lemma_quotient_a(q, t);
    const double qb = lemma_quotient_b(q, t);
    if (!std::isfinite(qa) || !std::isfinite(qb)) rep.finite = false;
    if (qa > rep.sup_a) {
      rep.sup_a = qa;
      rep.argsup_a = t;
    }
    if (qb > rep.sup_b) {
      rep.sup_b = qb;
      rep.argsup_b = t;
    }
  }
  for (double t : grid)
    if (lemma_quotient_a(q, t) > rep.sup_a || lemma_quotient_b(q, t) > rep.sup_b) ++rep.violations;

  // Limits use only the geometric part of the grid: the outermost and innermost five points per side.
  std::vector<double> geometric;
  for (double t : grid) {
    const double lg = std::log10(std::abs(t)) * 8.0;
    if (std::abs(lg - std::round(lg)) < 1e-9) geometric.push_back(t);
  }
  rep.limits_a = limits_of(&lemma_quotient_a, q, geometric);
  rep.limits_b = limits_of(&lemma_quotient_b, q, geometric);
  return rep;
}

}  // namespace nlft
