#include "nlft/verify.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nlft/functionals.hpp"
#include "nlft/hy.hpp"
#include "nlft/linear.hpp"
#include "nlft/random.hpp"
#include "nlft/scattering.hpp"

namespace nlft {
namespace {

struct Worst {
  double value = 0.0;
  void see(double v) { value = std::max(value, std::isfinite(v) ? v : INFINITY); }
};

CheckResult check(std::string name, double observed, double limit, std::string detail = {}) {
  return {std::move(name), observed <= limit, observed, limit, std::move(detail)};
}

double sup_diff(const ScatteringData& d, std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    m = std::max(m, std::max(std::abs(d.a[i] - a[i]), std::abs(d.b[i] - b[i])));
  return m;
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  Rng rng(opts.seed);
  RandomPotentialSpec spec;
  spec.max_layers = 20;
  std::vector<PiecewisePotential> suite;
  for (int i = 0; i < opts.potentials; ++i) suite.push_back(random_potential(rng, spec));

  NlftOptions no;
  no.threads = opts.threads;
  no.flip_boundary_phase = opts.inject_phase_bug;
  const SpectralGrid grid{4.0, 81};
  const std::vector<double> xi = grid.nodes();

  Worst conservation, riemann, unimodular, modulation, translation, dilation, conjugation, additivity, oracle;
  Worst identity, dom_q, dom_e;
  for (const PiecewisePotential& f : suite) {
    const double l1 = lp_norm(f, 1.0);
    const ScatteringData d = nlft(f, xi, no);
    for (std::size_t i = 0; i < d.size(); ++i) {
      conservation.see(std::abs(std::norm(d.a[i]) - std::norm(d.b[i]) - 1.0));
      riemann.see(std::log(std::abs(d.a[i]) + std::abs(d.b[i])) - l1);
    }

    {
      const double theta = 0.7;
      const ScatteringData t = nlft(apply_symmetry(f, sym::Unimodular{theta}), xi, no);
      std::vector<cplx> a(d.a), b(d.b);
      for (auto& v : b) v *= std::polar(1.0, theta);
      unimodular.see(sup_diff(t, a, b));
    }
    {
      // Right side from the unmodulated transform at shifted frequencies; left
      // side additionally checked against the pointwise ODE oracle.
      const double xi0 = 0.37;
      const ModulatedPotential g = apply_symmetry(f, sym::Modulation{xi0});
      const ScatteringData t = nlft(g, xi, no);
      std::vector<double> shifted(xi);
      for (auto& v : shifted) v -= xi0;
      const ScatteringData s = nlft(f, shifted, no);
      modulation.see(sup_diff(t, s.a, s.b));
      const double step = std::min(1e-4, f.min_width());
      for (double x : {-1.1, 0.4}) {
        const Amplitudes ode = nlft_ode_oracle(g, x, step);
        const Amplitudes ref = nlft_at(f, x - xi0, no);
        modulation.see(std::max(std::abs(ode.a - ref.a), std::abs(ode.b - ref.b)));
      }
    }
    {
      const double x0 = 1.3;
      const ScatteringData t = nlft(apply_symmetry(f, sym::Translation{x0}), xi, no);
      std::vector<cplx> b(d.b);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] *= std::polar(1.0, -2.0 * kPi * x0 * xi[i]);
      translation.see(sup_diff(t, d.a, b));
    }
    {
      const double lambda = 1.7;
      const ScatteringData t = nlft(apply_symmetry(f, sym::Dilation{lambda}), xi, no);
      std::vector<double> scaled(xi);
      for (auto& v : scaled) v *= lambda;
      const ScatteringData s = nlft(f, scaled, no);
      dilation.see(sup_diff(t, s.a, s.b));
    }
    {
      const ScatteringData t = nlft(apply_symmetry(f, sym::Conjugation{}), xi, no);
      std::vector<cplx> a(xi.size()), b(xi.size());
      for (std::size_t i = 0; i < xi.size(); ++i) {
        a[i] = std::conj(d.a[xi.size() - 1 - i]);
        b[i] = std::conj(d.b[xi.size() - 1 - i]);
      }
      conjugation.see(sup_diff(t, a, b));
    }
    if (f.layers() >= 2) {
      const std::size_t m = f.layers() / 2;
      const auto x = f.breakpoints();
      const auto v = f.values();
      const PiecewisePotential f1({x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m) + 1},
                                  {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)});
      const PiecewisePotential f2({x.begin() + static_cast<std::ptrdiff_t>(m), x.end()},
                                  {v.begin() + static_cast<std::ptrdiff_t>(m), v.end()});
      const ScatteringData s1 = nlft(f1, xi, no), s2 = nlft(f2, xi, no);
      std::vector<cplx> a(xi.size()), b(xi.size());
      for (std::size_t i = 0; i < xi.size(); ++i) {
        a[i] = s1.a[i] * s2.a[i] + s1.b[i] * std::conj(s2.b[i]);
        b[i] = s1.a[i] * s2.b[i] + s1.b[i] * std::conj(s2.a[i]);
      }
      additivity.see(sup_diff(d, a, b));
    }
    {
      const double step = std::min(1e-3, f.min_width());
      for (double x : {-2.3, 0.0, 0.7}) {
        const Amplitudes ode = nlft_ode_oracle(f, x, step);
        const Amplitudes tm = nlft_at(f, x, no);
        oracle.see(std::max(std::abs(ode.a - tm.a), std::abs(ode.b - tm.b)));
      }
    }
    {
      const std::vector<double> coarse = SpectralGrid{4.0, 41}.nodes();
      ExpansionOptions eo;
      eo.threads = opts.threads;
      for (const ExpansionRow& r : expansion_report(f, coarse, eo)) {
        identity.see(std::abs(r.identity_error()));
        dom_q.see(std::abs(r.q_op) - r.bound_q - r.q_err - 1e-12);
        dom_e.see(std::abs(r.e_residual) - r.bound_e - r.q_err - 1e-12);
      }
    }
  }

  std::vector<CheckResult> out;
  out.push_back(check("conservation", conservation.value, 1e-9));
  out.push_back(check("riemann_lebesgue", riemann.value, 1e-12));
  out.push_back(check("symmetry_unimodular", unimodular.value, 1e-9));
  out.push_back(check("symmetry_modulation", modulation.value, 1e-9));
  out.push_back(check("symmetry_translation", translation.value, 1e-9));
  out.push_back(check("symmetry_dilation", dilation.value, 1e-9));
  out.push_back(check("symmetry_conjugation", conjugation.value, 1e-9));
  out.push_back(check("symmetry_additivity", additivity.value, 1e-9));
  out.push_back(check("oracle_rk4", oracle.value, 1e-8));
  out.push_back(check("expansion_identity", identity.value, 1e-12));
  out.push_back(check("domination_q", dom_q.value, 0.0, "|Q| - bound_q - tol"));
  out.push_back(check("domination_e", dom_e.value, 0.0, "|E| - bound_e - tol"));

  {
    Worst plancherel, altineq;
    AdaptiveGridOptions go;
    go.rtol = 1e-3;
    go.threads = opts.threads;
    for (std::size_t i = 0; i < std::min<std::size_t>(2, suite.size()); ++i) {
      const PiecewisePotential& f = suite[i];
      const HYReport r = nonlinear_ratio(f, 1.999, go, no);
      plancherel.see(std::abs(r.nonlinear_q.value / lp_norm(f, 2.0) - 1.0));
      const HYReport r43 = nonlinear_ratio(f, 4.0 / 3.0, go, no);
      altineq.see(-r43.altineq_slack);
    }
    out.push_back(check("plancherel_p1.999", plancherel.value, 1e-2, "relative gap to ||f||_2"));
    out.push_back(check("altineq", altineq.value, 1e-8, "negated slack"));
  }

  {
    const std::vector<double> t = default_lemma_grid();
    Worst lim;
    bool finite = true;
    std::size_t violations = 0;
    for (double q : {2.5, 3.0, 4.0, 6.0}) {
      const LemmaReport r = lemma_numeric_check(q, t);
      finite = finite && r.finite && std::isfinite(r.sup_a) && std::isfinite(r.sup_b);
      violations += r.violations;
      const double a0 = q >= 4.0 ? q * (q - 2.0) / 8.0 : 0.0;
      const double b0 = q >= 3.0 ? q - 2.0 : 0.0;
      for (double v : {r.limits_a.zero_pos - a0, r.limits_a.zero_neg - a0, r.limits_b.zero_pos - b0,
                       r.limits_b.zero_neg - b0, r.limits_a.inf_pos - 1.0, r.limits_a.inf_neg - 1.0,
                       r.limits_b.inf_pos - 1.0, r.limits_b.inf_neg - 1.0})
        lim.see(std::abs(v));
    }
    CheckResult c = check("lemma_limits", lim.value, 1e-6);
    c.pass = c.pass && finite && violations == 0;
    c.detail = fmt::format("finite={} violations={}", finite, violations);
    out.push_back(c);
  }
  return out;
}

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
  std::size_t failed = 0;
  for (const CheckResult& c : checks) {
    if (!c.pass) ++failed;
    fmt::print(os, "{} {} observed={:.6e} limit={:.6e}{}{}\n", c.pass ? "PASS" : "FAIL", c.name, c.observed,
               c.limit, c.detail.empty() ? "" : " ", c.detail);
  }
  fmt::print(os, "{} of {} checks passed\n", checks.size() - failed, checks.size());
}

}  // namespace nlft
