#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nlft {

struct CheckResult {
  std::string name;
  bool pass = false;
  /// Worst observed value of the checked quantity and the limit it is held to.
  double observed = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int potentials = 6;
  unsigned threads = 1;
  /// Negative control: scattering runs with a wrong boundary phase.
  bool inject_phase_bug = false;
};

/// Runs the invariant suite on seeded random potentials: conservation,
/// Riemann-Lebesgue, the symmetry rules, oracle agreement, nonlinear
/// Plancherel, the expansion identity, the pointwise domination bounds, the
/// cheap inequality and the elementary-inequality verifier.
std::vector<CheckResult> run_verify(const VerifyOptions& opts);

void print_checks(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace nlft
