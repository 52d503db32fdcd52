#pragma once

#include <functional>
#include <vector>

namespace nlft {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct SimplexOptions {
  int max_evaluations = 2000;
  /// Stop when the spread of vertex values and the simplex diameter both fall below these.
  double ftol = 1e-12;
  double xtol = 1e-10;
  /// Restart from the best vertex once converged, to escape premature collapse.
  int restarts = 1;
};

/// Downhill simplex minimization (standard reflection/expansion/contraction/shrink
/// coefficients 1, 2, 1/2, 1/2). `step` sets the initial simplex edge per coordinate.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                          std::vector<double> start, const std::vector<double>& step,
                          const SimplexOptions& opts = {});

}  // namespace nlft
