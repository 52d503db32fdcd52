#include "nlft/io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <sstream>

namespace nlft::io {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(fmt::format("{}: expected a number", what));
  return j.get<double>();
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("{}: cannot open file", path));
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError(fmt::format("{}:{}:{}: JSON syntax error", path, line, col));
  }
}

PiecewisePotential potential_from_json(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
    throw InputError("potential: expected an object with \"breakpoints\" and \"values\"");
  const json& xs = j.at("breakpoints");
  const json& vs = j.at("values");
  if (!xs.is_array() || !vs.is_array()) throw InputError("potential: breakpoints and values must be arrays");
  if (xs.empty() && vs.empty()) return {};
  std::vector<double> x;
  for (const json& e : xs) x.push_back(number(e, "potential breakpoint"));
  std::vector<cplx> v;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const json& e = vs[i];
    if (e.is_number()) {
      v.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      v.emplace_back(number(e[0], "potential value"), number(e[1], "potential value"));
    } else {
      throw InputError(fmt::format("potential: value {} must be [re, im]", i));
    }
  }
  try {
    return PiecewisePotential(std::move(x), std::move(v));
  } catch (const std::invalid_argument& e) {
    throw InputError(fmt::format("potential: {}", e.what()));
  }
}

json potential_to_json(const PiecewisePotential& f) {
  json j;
  j["breakpoints"] = json::array();
  j["values"] = json::array();
  for (double x : f.breakpoints()) j["breakpoints"].push_back(x);
  for (cplx v : f.values()) j["values"].push_back({v.real(), v.imag()});
  return j;
}

PiecewisePotential read_potential(const std::string& path) {
  try {
    return potential_from_json(read_json_file(path));
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw InputError(fmt::format("{}: {}", path, msg));
  }
}

IntervalSet interval_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("intervals") || !j.at("intervals").is_array())
    throw InputError("interval set: expected an object with an \"intervals\" array");
  std::vector<std::pair<double, double>> iv;
  for (const json& e : j.at("intervals")) {
    if (!e.is_array() || e.size() != 2) throw InputError("interval set: each interval must be [a, b]");
    iv.emplace_back(number(e[0], "interval end"), number(e[1], "interval end"));
  }
  try {
    return IntervalSet(std::move(iv));
  } catch (const std::invalid_argument& e) {
    throw InputError(fmt::format("interval set: {}", e.what()));
  }
}

IntervalSet read_interval_set(const std::string& path) {
  try {
    return interval_set_from_json(read_json_file(path));
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw InputError(fmt::format("{}: {}", path, msg));
  }
}

json gaussian_to_json(const GaussianParams& g) {
  return {{"c", {g.c.real(), g.c.imag()}}, {"alpha", g.alpha}, {"v", {g.v.real(), g.v.imag()}}};
}

json hy_report_to_json(const HYReport& r) {
  auto norm = [](const SpectralNorm& n) {
    return json{{"value", n.value}, {"grid_value", n.grid_value}, {"tail", n.tail}};
  };
  return {{"p", r.p},
          {"q", r.q},
          {"l1", r.l1},
          {"lp", r.lp},
          {"fhat_q", norm(r.fhat_q)},
          {"nonlinear_q", norm(r.nonlinear_q)},
          {"beckner", r.beckner},
          {"linear_ratio", r.linear_ratio},
          {"nonlinear_ratio", r.nonlinear_ratio},
          {"deficit", r.deficit},
          {"altineq_slack", r.altineq_slack},
          {"xi_max", r.xi_max},
          {"spacing", r.spacing},
          {"doublings", r.doublings},
          {"converged", r.converged},
          {"last_change_linear", r.last_change_linear},
          {"last_change_nonlinear", r.last_change_nonlinear}};
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_transform_csv(std::ostream& os, const ScatteringData& d) {
  os << "xi,re_a,im_a,re_b,im_b,log_a2\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    fmt::print(os, "{},{},{},{},{},{}\n", num(d.xi[i]), num(d.a[i].real()), num(d.a[i].imag()), num(d.b[i].real()),
               num(d.b[i].imag()), num(d.log_a2(i)));
}

void write_linear_csv(std::ostream& os, std::span<const double> xi, std::span<const cplx> fhat,
                      std::span<const MaxTruncatedFt> fstar) {
  os << "xi,abs_fhat,fstar,fstar_err\n";
  for (std::size_t i = 0; i < xi.size(); ++i)
    fmt::print(os, "{},{},{},{}\n", num(xi[i]), num(std::abs(fhat[i])), num(fstar[i].value),
               num(fstar[i].error_bound));
}

void write_expansion_csv(std::ostream& os, std::span<const ExpansionRow> rows) {
  os << "xi,log_a2,fhat_sq,q_op,e_residual,bound_q,bound_e,q_op_err\n";
  for (const ExpansionRow& r : rows)
    fmt::print(os, "{},{},{},{},{},{},{},{}\n", num(r.xi), num(r.log_a2), num(r.fhat_sq), num(r.q_op),
               num(r.e_residual), num(r.bound_q), num(r.bound_e), num(r.q_err));
}

void write_sweep_csv(std::ostream& os, const SweepResult& s) {
  os << "c,l1,lp,linear_ratio,nonlinear_ratio,deficit,altineq_slack,linear_tail,nonlinear_tail\n";
  for (const SweepRow& row : s.rows) {
    const HYReport& r = row.report;
    fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", num(row.c), num(r.l1), num(r.lp), num(r.linear_ratio),
               num(r.nonlinear_ratio), num(r.deficit), num(r.altineq_slack), num(r.fhat_q.tail),
               num(r.nonlinear_q.tail));
  }
}

}  // namespace nlft::io
