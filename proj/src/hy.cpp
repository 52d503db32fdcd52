#include "nlft/hy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlft/linear.hpp"
#include "nlft/parallel.hpp"
#include "nlft/random.hpp"

namespace nlft {

double conjugate_exponent(double p) { return p / (p - 1.0); }

double beckner(double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("beckner: p must lie in [1, 2]");
  if (p == 1.0) return 1.0;
  const double q = conjugate_exponent(p);
  return std::pow(p, 1.0 / (2.0 * p)) * std::pow(q, -1.0 / (2.0 * q));
}

SpectralNorm spectral_norm(std::span<const double> xi, std::span<const double> abs_g, double q) {
  const std::size_t n = xi.size();
  if (n < 3 || abs_g.size() != n) throw std::invalid_argument("spectral_norm: need matching samples");
  const double h = xi[1] - xi[0];
  CompensatedSum trap;
  for (std::size_t i = 0; i < n; ++i) trap += ((i == 0 || i + 1 == n) ? 0.5 * h : h) * std::pow(abs_g[i], q);

  const double xmax = std::max(std::abs(xi.front()), std::abs(xi.back()));
  double tail = 0.0;
  for (int side : {-1, 1}) {
    double acc = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = side * xi[i];
      if (s >= 0.5 * xmax && s <= xmax) {
        acc += std::pow(abs_g[i] * s, q);
        ++count;
      }
    }
    if (count > 0) tail += (acc / count) * std::pow(xmax, 1.0 - q) / (q - 1.0);
  }
  SpectralNorm out;
  out.grid_value = std::pow(trap.value(), 1.0 / q);
  out.value = std::pow(trap.value() + tail, 1.0 / q);
  out.tail = out.value - out.grid_value;
  return out;
}

HYReport nonlinear_ratio(const ModulatedPotential& f, double p, const AdaptiveGridOptions& opts,
                         const NlftOptions& nlft_opts) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("nonlinear_ratio: p must lie in (1, 2)");
  const double l1 = lp_norm(f, 1.0);
  if (!(l1 > 0.0)) throw std::invalid_argument("ratio undefined for f = 0");

  HYReport rep;
  rep.p = p;
  rep.q = conjugate_exponent(p);
  rep.l1 = l1;
  rep.lp = lp_norm(f, p);
  rep.beckner = beckner(p);

  const double len = f.base.right() - f.base.left();
  const double h = opts.spacing > 0.0 ? opts.spacing : 1.0 / (8.0 * len);
  const double xi0 = opts.xi_max > 0.0 ? opts.xi_max : 16.0 / len;
  std::size_t half = static_cast<std::size_t>(std::ceil(xi0 / h));
  rep.spacing = h;

  // Samples at +-j h for j = 0..half, grown outward on each doubling.
  std::vector<double> lin_pos{}, lin_neg{}, non_pos{}, non_neg{};
  auto extend = [&](std::size_t upto) {
    const std::size_t from = lin_pos.size();
    lin_pos.resize(upto + 1);
    lin_neg.resize(upto + 1);
    non_pos.resize(upto + 1);
    non_neg.resize(upto + 1);
    NlftOptions inner = nlft_opts;
    inner.threads = 1;
    parallel_for(upto + 1 - from, opts.threads, [&](std::size_t i) {
      const std::size_t j = from + i;
      const double x = h * static_cast<double>(j);
      for (int side : {1, -1}) {
        const double xs = side * x;
        const double lin = std::abs(linear_ft(f, xs));
        const Amplitudes s = nlft_at(f, xs, inner);
        const double non = std::sqrt(std::log1p(std::norm(s.b)));
        (side > 0 ? lin_pos : lin_neg)[j] = lin;
        (side > 0 ? non_pos : non_neg)[j] = non;
      }
    });
  };
  auto norms = [&](std::size_t m) {
    std::vector<double> xs, lin, non;
    for (std::size_t j = m; j > 0; --j) {
      xs.push_back(-h * static_cast<double>(j));
      lin.push_back(lin_neg[j]);
      non.push_back(non_neg[j]);
    }
    for (std::size_t j = 0; j <= m; ++j) {
      xs.push_back(h * static_cast<double>(j));
      lin.push_back(lin_pos[j]);
      non.push_back(non_pos[j]);
    }
    return std::pair{spectral_norm(xs, lin, rep.q), spectral_norm(xs, non, rep.q)};
  };

  extend(half);
  auto [lin, non] = norms(half);
  auto double_once = [&] {
    half *= 2;
    extend(half);
    const auto [lin2, non2] = norms(half);
    rep.last_change_linear = std::abs(lin2.value - lin.value) / lin2.value;
    rep.last_change_nonlinear = std::abs(non2.value - non.value) / std::max(non2.value, 1e-300);
    lin = lin2;
    non = non2;
    ++rep.doublings;
  };
  for (int d = 0; d < opts.max_doublings && !rep.converged; ++d) {
    double_once();
    rep.converged = rep.last_change_linear < opts.rtol && rep.last_change_nonlinear < opts.rtol;
  }
  for (int d = 0; d < opts.extra_doublings; ++d) double_once();

  rep.xi_max = h * static_cast<double>(half);
  rep.fhat_q = lin;
  rep.nonlinear_q = non;
  rep.linear_ratio = lin.value / rep.lp;
  rep.nonlinear_ratio = non.value / rep.lp;
  rep.deficit = rep.beckner - rep.nonlinear_ratio;
  rep.altineq_slack = rep.beckner * std::exp(rep.l1) * rep.lp - non.value;
  return rep;
}

SweepResult small_potential_sweep(const PiecewisePotential& shape, double p, std::span<const double> c_list,
                                  const AdaptiveGridOptions& opts) {
  if (c_list.empty()) throw std::invalid_argument("sweep: empty c list");
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    if (!(c_list[i] > 0.0)) throw std::invalid_argument("sweep: c values must be positive");
    if (i > 0 && !(c_list[i] > c_list[i - 1])) throw std::invalid_argument("sweep: c values must increase");
  }
  SweepResult out;
  out.rows.resize(c_list.size());
  AdaptiveGridOptions inner = opts;
  inner.threads = 1;
  parallel_for(c_list.size(), opts.threads, [&](std::size_t i) {
    out.rows[i].c = c_list[i];
    out.rows[i].report = nonlinear_ratio(shape.scaled(c_list[i]), p, inner);
  });

  const double l1 = lp_norm(shape, 1.0);
  std::vector<double> x, deficit, cs, gap;
  out.min_altineq_slack = out.rows.front().report.altineq_slack;
  for (const SweepRow& r : out.rows) {
    x.push_back(r.c * r.c * l1 * l1);
    deficit.push_back(r.report.deficit);
    cs.push_back(r.c);
    gap.push_back(r.report.linear_ratio - r.report.nonlinear_ratio);
    if (!(r.report.deficit > 0.0)) out.deficit_positive = false;
    if (!(r.report.nonlinear_ratio < r.report.linear_ratio)) out.nonlinear_below_linear = false;
    out.min_altineq_slack = std::min(out.min_altineq_slack, r.report.altineq_slack);
  }
  out.deficit_fit = fit_line(x, deficit);
  if (out.nonlinear_below_linear && cs.size() >= 2) out.gap_fit = fit_loglog(cs, gap);
  out.gamma_formula = fmt::format("sqrt(8 * {:.17g} * ||f||_1 / c_p)", beckner(p));
  return out;
}

double rho_of(const HYReport& r) { return r.nonlinear_q.value / r.fhat_q.value; }

namespace {

struct Walk {
  PiecewisePotential best;
  double rho = 0.0;
  HYReport report;
  std::vector<SearchStep> log;
};

PiecewisePotential layout(const SearchFamily& fam, const std::vector<cplx>& values) {
  std::vector<double> x(fam.layers + 1);
  for (std::size_t k = 0; k <= fam.layers; ++k)
    x[k] = fam.lo + (fam.hi - fam.lo) * static_cast<double>(k) / static_cast<double>(fam.layers);
  x.back() = fam.hi;
  return PiecewisePotential(std::move(x), values);
}

Walk climb(double p, const SearchFamily& fam, const SearchOptions& opts, std::uint64_t seed) {
  Rng rng(seed);
  AdaptiveGridOptions grid;
  grid.rtol = opts.rtol;
  grid.max_doublings = 8;
  const double b = fam.value_bound;
  auto clampv = [&](double v) { return std::clamp(v, -b, b); };

  std::vector<cplx> cur(fam.layers);
  PiecewisePotential f;
  do {
    for (auto& v : cur) v = cplx(rng.uniform(-b, b), rng.uniform(-b, b));
    f = layout(fam, cur);
  } while (lp_norm(f, 1.0) < fam.l1_floor);

  Walk w;
  w.best = f;
  w.report = nonlinear_ratio(f, p, grid);
  w.rho = rho_of(w.report);

  double step = opts.step * b;
  int failures = 0;
  for (int it = 1; it <= opts.iterations; ++it) {
    std::vector<cplx> cand = cur;
    for (auto& v : cand) v = cplx(clampv(v.real() + step * rng.normal()), clampv(v.imag() + step * rng.normal()));
    const PiecewisePotential g = layout(fam, cand);
    SearchStep s;
    s.iteration = it;
    if (lp_norm(g, 1.0) >= fam.l1_floor) {
      const HYReport r = nonlinear_ratio(g, p, grid);
      s.rho = rho_of(r);
      if (s.rho > w.rho) {
        cur = std::move(cand);
        w.best = g;
        w.rho = s.rho;
        w.report = r;
        s.accepted = true;
      }
    }
    if (s.accepted) {
      failures = 0;
    } else if (++failures >= 10) {
      step *= 0.7;
      failures = 0;
    }
    s.best_rho = w.rho;
    w.log.push_back(s);
  }
  return w;
}

}  // namespace

SearchResult counterexample_search(double p, const SearchFamily& family, const SearchOptions& opts) {
  if (opts.iterations < 1) throw std::invalid_argument("search: iterations must be >= 1");
  if (opts.restarts < 1) throw std::invalid_argument("search: restarts must be >= 1");
  if (family.layers < 1 || !(family.hi > family.lo) || !(family.value_bound > 0.0) || !(family.l1_floor > 0.0))
    throw std::invalid_argument("search: invalid family");
  if (family.l1_floor >= family.value_bound * std::sqrt(2.0) * (family.hi - family.lo))
    throw std::invalid_argument("search: L1 floor unreachable inside the value box");

  Rng seeder(opts.seed);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(opts.restarts));
  for (auto& s : seeds) s = static_cast<std::uint64_t>(seeder.uniform() * 0x1.0p63);

  std::vector<Walk> walks(seeds.size());
  parallel_for(seeds.size(), opts.threads, [&](std::size_t i) { walks[i] = climb(p, family, opts, seeds[i]); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < walks.size(); ++i)
    if (walks[i].rho > walks[best].rho) best = i;
  SearchResult out;
  out.best = walks[best].best;
  out.rho = walks[best].rho;
  out.report = walks[best].report;
  out.log = std::move(walks[best].log);
  out.restart = static_cast<int>(best);
  return out;
}

}  // namespace nlft
