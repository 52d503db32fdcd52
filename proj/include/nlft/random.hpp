#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nlft/numerics.hpp"
#include "nlft/potential.hpp"

namespace nlft {

/// mt19937_64 with hand-rolled uniform/normal transforms, so sequences are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  cplx in_disk(double radius) {
    const double r = radius * std::sqrt(uniform());
    return std::polar(r, 2.0 * kPi * uniform());
  }

 private:
  std::mt19937_64 engine_;
};

struct RandomPotentialSpec {
  std::size_t max_layers = 50;
  double min_width = 0.05;
  double max_width = 0.5;
  double max_l1 = 2.0;
  double min_l1 = 0.1;
};

/// Random complex step potential: layer count uniform in [1, max_layers],
/// start uniform in [-1, 1], L^1 norm uniform in [min_l1, max_l1].
inline PiecewisePotential random_potential(Rng& rng, const RandomPotentialSpec& spec = {}) {
  const std::size_t n = 1 + rng.index(spec.max_layers);
  std::vector<double> x{rng.uniform(-1.0, 1.0)};
  std::vector<cplx> v;
  for (std::size_t k = 0; k < n; ++k) {
    x.push_back(x.back() + rng.uniform(spec.min_width, spec.max_width));
    v.push_back(rng.in_disk(1.0));
  }
  PiecewisePotential f(std::move(x), std::move(v));
  double l1 = 0.0;
  for (std::size_t k = 0; k < f.layers(); ++k) l1 += std::abs(f.values()[k]) * f.width(k);
  if (l1 == 0.0) return f;
  return f.scaled(rng.uniform(spec.min_l1, spec.max_l1) / l1);
}

}  // namespace nlft
