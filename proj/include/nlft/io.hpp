#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlft/functionals.hpp"
#include "nlft/gaussians.hpp"
#include "nlft/hy.hpp"
#include "nlft/linear.hpp"
#include "nlft/potential.hpp"
#include "nlft/scattering.hpp"

namespace nlft::io {

/// Raised for unreadable or malformed input files; what() names the file and,
/// for JSON syntax errors, the line and column.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json_file(const std::string& path);

/// {"breakpoints":[x0,...,xn], "values":[[re,im],...]}; empty lists give the zero potential.
PiecewisePotential potential_from_json(const nlohmann::json& j);
nlohmann::json potential_to_json(const PiecewisePotential& f);
PiecewisePotential read_potential(const std::string& path);

/// {"intervals":[[a,b],...]}
IntervalSet interval_set_from_json(const nlohmann::json& j);
IntervalSet read_interval_set(const std::string& path);

nlohmann::json gaussian_to_json(const GaussianParams& g);
nlohmann::json hy_report_to_json(const HYReport& r);

/// Shortest round-trip formatting used in every CSV.
std::string num(double v);

void write_transform_csv(std::ostream& os, const ScatteringData& d);
void write_linear_csv(std::ostream& os, std::span<const double> xi, std::span<const cplx> fhat,
                      std::span<const MaxTruncatedFt> fstar);
void write_expansion_csv(std::ostream& os, std::span<const ExpansionRow> rows);
void write_sweep_csv(std::ostream& os, const SweepResult& s);

}  // namespace nlft::io
