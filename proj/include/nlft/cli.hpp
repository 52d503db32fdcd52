#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace nlft::cli {

/// Exit codes: success, failed check, usage or configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string potential;
  double p = 4.0 / 3.0;

  struct Grid {
    double xi_max = 8.0;
    std::size_t count = 257;
    double rtol = 1e-6;
  } grid;

  struct Hypotheses {
    double A = 1.0;
    double lambda = 0.5;
    double delta = 0.1;
    std::string set;
  } hypotheses;

  std::vector<double> sweep{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};

  struct Search {
    int iterations = 100;
    int restarts = 1;
    std::size_t layers = 4;
    double lo = 0.0;
    double hi = 1.0;
    double value_bound = 1.0;
    double l1_floor = 1e-2;
    double step = 0.2;
  } search;

  struct Dist {
    int starts = 8;
    int max_evaluations = 3000;
  } dist;

  struct Verify {
    int potentials = 6;
    bool inject_phase_bug = false;
  } verify;

  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 1;

  /// Throws ConfigError naming the first out-of-range field.
  void validate() const;
};

/// Overlays the keys present in `j` onto `base`; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& c);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlft::cli
