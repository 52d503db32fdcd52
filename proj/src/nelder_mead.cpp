#include "nlft/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nlft {
namespace {

struct Simplex {
  std::vector<std::vector<double>> pts;
  std::vector<double> vals;
};

double diameter(const Simplex& s) {
  double d = 0.0;
  for (std::size_t i = 1; i < s.pts.size(); ++i)
    for (std::size_t j = 0; j < s.pts[i].size(); ++j)
      d = std::max(d, std::abs(s.pts[i][j] - s.pts[0][j]));
  return d;
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                          std::vector<double> start, const std::vector<double>& step,
                          const SimplexOptions& opts) {
  const std::size_t n = start.size();
  if (n == 0 || step.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");

  SimplexResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double y = fn(x);
    return std::isfinite(y) ? y : INFINITY;
  };

  std::vector<double> best = std::move(start);
  double best_val = eval(best);

  for (int round = 0; round <= opts.restarts; ++round) {
    Simplex s;
    s.pts.push_back(best);
    s.vals.push_back(best_val);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> p = best;
      p[i] += step[i];
      s.vals.push_back(eval(p));
      s.pts.push_back(std::move(p));
    }

    bool converged = false;
    std::vector<std::size_t> order(n + 1);
    while (res.evaluations < opts.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return s.vals[a] < s.vals[b]; });
      Simplex sorted;
      for (std::size_t i : order) {
        sorted.pts.push_back(s.pts[i]);
        sorted.vals.push_back(s.vals[i]);
      }
      s = std::move(sorted);

      if (std::abs(s.vals.back() - s.vals.front()) <= opts.ftol && diameter(s) <= opts.xtol) {
        converged = true;
        break;
      }

      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) centroid[j] += s.pts[i][j] / static_cast<double>(n);

      auto along = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (s.pts[n][j] - centroid[j]);
        return p;
      };

      std::vector<double> xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < s.vals[0]) {
        std::vector<double> xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          s.pts[n] = std::move(xe);
          s.vals[n] = fe;
        } else {
          s.pts[n] = std::move(xr);
          s.vals[n] = fr;
        }
      } else if (fr < s.vals[n - 1]) {
        s.pts[n] = std::move(xr);
        s.vals[n] = fr;
      } else {
        const bool outside = fr < s.vals[n];
        std::vector<double> xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : s.vals[n])) {
          s.pts[n] = std::move(xc);
          s.vals[n] = fc;
        } else {
          for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) s.pts[i][j] = s.pts[0][j] + 0.5 * (s.pts[i][j] - s.pts[0][j]);
            s.vals[i] = eval(s.pts[i]);
          }
        }
      }
    }

    const auto it = std::min_element(s.vals.begin(), s.vals.end());
    const std::size_t ib = static_cast<std::size_t>(it - s.vals.begin());
    if (s.vals[ib] <= best_val) {
      best_val = s.vals[ib];
      best = s.pts[ib];
    }
    res.converged = converged;
    if (res.evaluations >= opts.max_evaluations) break;
  }
  res.x = std::move(best);
  res.value = best_val;
  return res;
}

}  // namespace nlft
