#include <doctest.h>

#include <cmath>

#include "nlft/functionals.hpp"
#include "nlft/gaussians.hpp"
#include "nlft/linear.hpp"
#include "nlft/random.hpp"
#include "oracles.hpp"

using namespace nlft;

namespace {

PiecewisePotential small_random(Rng& rng, std::size_t max_layers) {
  RandomPotentialSpec spec;
  spec.max_layers = max_layers;
  spec.min_width = 0.1;
  spec.max_width = 0.5;
  spec.max_l1 = 1.0;
  return random_potential(rng, spec);
}

double fstar_upper(const PiecewisePotential& f, double xi) { return max_truncated_ft(f, xi, 64).upper(); }

}  // namespace

TEST_CASE("quartic operator examples") {
  CHECK(quartic_q(PiecewisePotential(), 0.3).value == 0.0);
  const auto box = PiecewisePotential::box(0, 1, 1.0);
  CHECK(quartic_q(box, 0.0).value == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  const oracle::Value o = oracle::brute_force_phi({box, box, box, box}, 0.0);
  CHECK(o.value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("quartic operator is quartic-homogeneous") {
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const PiecewisePotential f = random_potential(rng);
    const double xi = rng.uniform(-3, 3);
    const double q = quartic_q(f, xi).value;
    CHECK(quartic_q(f.scaled(2.0), xi).value == doctest::Approx(16.0 * q).epsilon(1e-10).scale(1e-12));
    const cplx c = rng.in_disk(2.0);
    CHECK(quartic_q(f.scaled(c), xi).value ==
          doctest::Approx(std::pow(std::abs(c), 4) * q).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("quartic operator matches the four-dimensional oracle") {
  Rng rng(32);
  for (int i = 0; i < 4; ++i) {
    const PiecewisePotential f = small_random(rng, 3);
    for (double xi : {0.0, 0.3, -0.3, 1.0, -1.0}) {
      const oracle::Value o = oracle::brute_force_phi({f, f, f, f}, xi);
      const Estimate q = quartic_q(f, xi);
      CHECK(std::abs(q.value - o.value) <= std::max(1e-8, o.error));
    }
  }
}

TEST_CASE("quadrilinear form matches the oracle slot by slot") {
  Rng rng(33);
  for (int i = 0; i < 3; ++i) {
    // Shared breakpoints keep the oracle's cell count small.
    const std::vector<double> x{rng.uniform(-0.5, 0.0), rng.uniform(0.1, 0.4), rng.uniform(0.5, 0.9)};
    std::array<PiecewisePotential, 4> f;
    for (auto& g : f) g = PiecewisePotential(x, {rng.in_disk(1.0), rng.in_disk(1.0)});
    for (double xi : {0.0, 0.3, -1.0}) {
      const oracle::Value o = oracle::brute_force_phi(f, xi);
      const Estimate p = phi_quadrilinear(f[0], f[1], f[2], f[3], xi);
      CHECK(std::abs(p.value - o.value) <= std::max(1e-8, o.error));
    }
  }
}

TEST_CASE("quadrilinear form: diagonal, zero slots, multilinearity and bounds") {
  Rng rng(34);
  for (int i = 0; i < 10; ++i) {
    const PiecewisePotential f = random_potential(rng);
    const double xi = rng.uniform(-3, 3);
    CHECK(std::abs(phi_quadrilinear(f, f, f, f, xi).value - quartic_q(f, xi).value) < 1e-10);

    const PiecewisePotential g = random_potential(rng), h = random_potential(rng), k = random_potential(rng);
    const PiecewisePotential z;
    CHECK(phi_quadrilinear(z, g, h, k, xi).value == 0.0);
    CHECK(phi_quadrilinear(f, g, h, z, xi).value == 0.0);

    // Additivity in the first slot, with f + f' represented on a common refinement.
    const PiecewisePotential f2 = random_potential(rng);
    std::vector<double> x(f.breakpoints().begin(), f.breakpoints().end());
    x.insert(x.end(), f2.breakpoints().begin(), f2.breakpoints().end());
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    std::vector<cplx> v;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      const double m = 0.5 * (x[j] + x[j + 1]);
      v.push_back(f(m) + f2(m));
    }
    const PiecewisePotential s(x, v);
    // Phi is real-linear in each slot: Re of a complex-multilinear form.
    for (int slot = 0; slot < 4; ++slot) {
      std::array<PiecewisePotential, 4> a{g, h, k, g}, b = a, c = a;
      a[slot] = s;
      b[slot] = f;
      c[slot] = f2;
      const double lhs = phi_quadrilinear(a[0], a[1], a[2], a[3], xi).value;
      const double rhs = phi_quadrilinear(b[0], b[1], b[2], b[3], xi).value +
                         phi_quadrilinear(c[0], c[1], c[2], c[3], xi).value;
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }

    const double p = std::abs(phi_quadrilinear(f, g, h, k, xi).value);
    CHECK(p <= lp_norm(f, 1.0) * lp_norm(g, 1.0) * fstar_upper(h, xi) * fstar_upper(k, xi) + 1e-12);
    CHECK(p <= lp_norm(h, 1.0) * lp_norm(k, 1.0) * fstar_upper(f, xi) * fstar_upper(g, xi) + 1e-12);
  }
}

TEST_CASE("expansion identity and pointwise domination") {
  Rng rng(35);
  const auto xi = SpectralGrid{4.0, 41}.nodes();
  for (int i = 0; i < 6; ++i) {
    const PiecewisePotential f = random_potential(rng);
    const auto rows = expansion_report(f, xi);
    REQUIRE(rows.size() == xi.size());
    for (const auto& r : rows) {
      CHECK(std::abs(r.identity_error()) <= 1e-12);
      CHECK(std::abs(r.q_op) <= r.bound_q + r.q_err + 1e-12);
      CHECK(std::abs(r.e_residual) <= r.bound_e + r.q_err + 1e-12);
    }
  }
  CHECK(error_e_residual(PiecewisePotential(), 0.5).value == 0.0);
}

TEST_CASE("direct and residual error operators agree") {
  const auto box = PiecewisePotential::box(0, 1, 0.3);
  const Estimate d = error_e_direct(box, 0.0);
  const Estimate r = error_e_residual(box, 0.0);
  CHECK(std::abs(d.value - r.value) <= 1e-6);
  CHECK(error_e_direct(PiecewisePotential(), 0.0).value == 0.0);

  Rng rng(36);
  for (int i = 0; i < 4; ++i) {
    const PiecewisePotential f = small_random(rng, 4);
    for (double xi : {0.0, 0.7, -1.5}) {
      const Estimate a = error_e_direct(f, xi, 1e-10);
      const Estimate b = error_e_residual(f, xi);
      CHECK(std::abs(a.value - b.value) <= std::max(1e-8, 10.0 * (a.error + b.error)));
    }
  }
}

TEST_CASE("small-potential orders: log|a|^2 - |f^|^2 ~ c^4, error operator ~ c^6") {
  const PiecewisePotential shape({0.0, 0.4, 1.0, 1.3}, {cplx(1.0, 0.5), cplx(-0.5, 1.0), cplx(0.8, 0.0)});
  const auto xi = SpectralGrid{3.0, 31}.nodes();
  std::vector<double> cs, dev, err;
  for (double c = 0.02; c <= 0.2 + 1e-12; c += 0.02) {
    const PiecewisePotential f = shape.scaled(c);
    double d = 0.0, e = 0.0;
    for (double x : xi) {
      const Amplitudes s = nlft_at(f, x);
      d = std::max(d, std::abs(std::log1p(std::norm(s.b)) - std::norm(linear_ft(f, x))));
      e = std::max(e, std::abs(error_e_residual(f, x, 1e-14 * std::pow(c, 4)).value));
    }
    cs.push_back(c);
    dev.push_back(d);
    err.push_back(e);
  }
  const LinearFit four = fit_loglog(cs, dev);
  const LinearFit six = fit_loglog(cs, err);
  CHECK(four.slope == doctest::Approx(4.0).epsilon(0.1 / 4.0));
  CHECK(six.slope == doctest::Approx(6.0).epsilon(0.2 / 6.0));
}

TEST_CASE("functional H") {
  const SpectralGrid grid{4.0, 81};
  CHECK(h_functional(PiecewisePotential(), 4.0 / 3.0, grid).value == 0.0);
  Rng rng(37);
  const PiecewisePotential f = random_potential(rng);
  for (double p : {4.0 / 3.0, 1.5, 1.8}) {
    const double q = p / (p - 1.0);
    const HValue h = h_functional(f, p, grid);
    const cplx c(0.6, -1.1);
    const HValue hc = h_functional(f.scaled(c), p, grid);
    CHECK(hc.value == doctest::Approx(std::pow(std::abs(c), q + 2.0) * h.value).epsilon(1e-8));
  }
}

TEST_CASE("functional H is positive on a discretized Gaussian") {
  const Discretization d = sample_to_potential(GaussianParams::standard(), -5.0, 5.0, 400);
  const SpectralGrid grid{4.0, 81};
  for (double q : {2.5, 3.0, 4.0, 6.0}) {
    const double p = q / (q - 1.0);
    const HValue h = h_functional(d.potential, p, grid);
    CHECK(h.value > 0.0);
    CHECK(h.value > 10.0 * (std::abs(h.tail) + h.quadrature_error));
  }
}

TEST_CASE("h_from_samples integrates a known profile") {
  // Q |f^|^{q-2} = (1 + xi^2)^{-2}, decaying like |xi|^{-q}; integral pi/2.
  const auto xi = SpectralGrid{50.0, 5001}.nodes();
  std::vector<double> qv, fh, er(xi.size(), 0.0);
  for (double x : xi) {
    qv.push_back(1.0 / std::pow(1.0 + x * x, 2));
    fh.push_back(1.0);
  }
  const HValue h = h_from_samples(xi, qv, fh, er, 4.0);
  CHECK(h.value == doctest::Approx(kPi / 2).epsilon(1e-6));
  CHECK(h.tail > 0.0);
}

TEST_CASE("lemma quotients") {
  CHECK_THROWS_AS(lemma_numeric_check(2.0, default_lemma_grid()), std::invalid_argument);
  CHECK_THROWS_AS(lemma_numeric_check(1.5, default_lemma_grid()), std::invalid_argument);
  // Part (a) at q = 4 is t^2 / t^2.
  for (double t : {-3.0, -0.5, 0.25, 2.0}) CHECK(lemma_quotient_a(4.0, t) == doctest::Approx(1.0));
  for (double t : {1e-3, 0.05, 0.3, 5.0, 1e5})
    CHECK(lemma_quotient_a(3.0, t) ==
          doctest::Approx((std::pow(1 + t, 1.5) - 1 - 1.5 * t) / std::pow(t, 1.5)).epsilon(1e-7));

  const auto grid = default_lemma_grid();
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid.front() <= -1e6);
  CHECK(grid.back() >= 1e6);
  for (double q : {2.5, 3.0, 4.0, 6.0}) {
    const LemmaReport r = lemma_numeric_check(q, grid);
    CHECK(r.finite);
    CHECK(r.violations == 0);
    for (double t : grid) {
      CHECK(lemma_quotient_a(q, t) <= r.sup_a);
      CHECK(lemma_quotient_b(q, t) <= r.sup_b);
    }
  }
}

TEST_CASE("lemma limits") {
  const auto grid = default_lemma_grid();
  for (double q : {2.5, 3.0, 4.0, 6.0}) {
    const LemmaReport r = lemma_numeric_check(q, grid);
    CAPTURE(q);
    CHECK(r.limits_a.inf_pos == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.limits_a.inf_neg == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.limits_b.inf_pos == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.limits_b.inf_neg == doctest::Approx(1.0).epsilon(1e-6));
    if (q < 4.0) {
      CHECK(std::abs(r.limits_a.zero_pos) < 1e-6);
      CHECK(std::abs(r.limits_a.zero_neg) < 1e-6);
    } else {
      CHECK(r.limits_a.zero_pos == doctest::Approx(q * (q - 2.0) / 8.0).epsilon(1e-6));
      CHECK(r.limits_a.zero_neg == doctest::Approx(q * (q - 2.0) / 8.0).epsilon(1e-6));
    }
  }
  CHECK(aitken(1.0, 1.5, 1.75) == doctest::Approx(2.0));
  CHECK(aitken(1.0, 1.0, 1.0) == 1.0);
}
