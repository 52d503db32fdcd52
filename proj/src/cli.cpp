#include "nlft/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nlft/functionals.hpp"
#include "nlft/gaussians.hpp"
#include "nlft/hy.hpp"
#include "nlft/io.hpp"
#include "nlft/linear.hpp"
#include "nlft/scattering.hpp"
#include "nlft/verify.hpp"

namespace nlft::cli {

using nlohmann::json;

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  if (!(p > 1.0 && p < 2.0)) fail("p must lie in (1, 2)");
  if (!(grid.xi_max > 0.0)) fail("grid.xi_max must be positive");
  if (grid.count < 3 || grid.count % 2 == 0) fail("grid.count must be odd and >= 3");
  if (!(grid.rtol > 0.0)) fail("grid.rtol must be positive");
  try {
    HypothesisConfig{p, hypotheses.A, hypotheses.lambda, hypotheses.delta}.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("hypotheses: ") + e.what());
  }
  if (sweep.empty()) fail("sweep must list at least one c");
  for (std::size_t i = 0; i < sweep.size(); ++i)
    if (!(sweep[i] > 0.0) || (i > 0 && !(sweep[i] > sweep[i - 1]))) fail("sweep must be positive and increasing");
  if (search.iterations < 1) fail("search.iterations must be >= 1");
  if (search.restarts < 1) fail("search.restarts must be >= 1");
  if (search.layers < 1) fail("search.layers must be >= 1");
  if (!(search.hi > search.lo)) fail("search.hi must exceed search.lo");
  if (!(search.value_bound > 0.0)) fail("search.value_bound must be positive");
  if (!(search.l1_floor > 0.0)) fail("search.l1_floor must be positive");
  if (!(search.step > 0.0)) fail("search.step must be positive");
  if (dist.starts < 1) fail("dist.starts must be >= 1");
  if (dist.max_evaluations < 10) fail("dist.max_evaluations must be >= 10");
  if (verify.potentials < 1) fail("verify.potentials must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
}

namespace {

template <class T>
void take(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("config: field \"{}\" has the wrong type", key));
  }
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(fmt::format("config: {} must be an object", where));
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) throw ConfigError(fmt::format("config: unknown field \"{}\" in {}", k, where));
  }
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig c) {
  only_keys(j,
            {"command", "potential", "p", "grid", "hypotheses", "sweep", "search", "dist", "verify", "seed", "out",
             "threads"},
            "config");
  take(j, "command", c.command);
  take(j, "potential", c.potential);
  take(j, "p", c.p);
  take(j, "sweep", c.sweep);
  take(j, "seed", c.seed);
  take(j, "out", c.out);
  take(j, "threads", c.threads);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    only_keys(g, {"xi_max", "count", "rtol"}, "grid");
    take(g, "xi_max", c.grid.xi_max);
    take(g, "count", c.grid.count);
    take(g, "rtol", c.grid.rtol);
  }
  if (j.contains("hypotheses")) {
    const json& h = j.at("hypotheses");
    only_keys(h, {"A", "lambda", "delta", "set"}, "hypotheses");
    take(h, "A", c.hypotheses.A);
    take(h, "lambda", c.hypotheses.lambda);
    take(h, "delta", c.hypotheses.delta);
    take(h, "set", c.hypotheses.set);
  }
  if (j.contains("search")) {
    const json& s = j.at("search");
    only_keys(s, {"iterations", "restarts", "layers", "lo", "hi", "value_bound", "l1_floor", "step"}, "search");
    take(s, "iterations", c.search.iterations);
    take(s, "restarts", c.search.restarts);
    take(s, "layers", c.search.layers);
    take(s, "lo", c.search.lo);
    take(s, "hi", c.search.hi);
    take(s, "value_bound", c.search.value_bound);
    take(s, "l1_floor", c.search.l1_floor);
    take(s, "step", c.search.step);
  }
  if (j.contains("dist")) {
    const json& d = j.at("dist");
    only_keys(d, {"starts", "max_evaluations"}, "dist");
    take(d, "starts", c.dist.starts);
    take(d, "max_evaluations", c.dist.max_evaluations);
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    only_keys(v, {"potentials", "inject_phase_bug"}, "verify");
    take(v, "potentials", c.verify.potentials);
    take(v, "inject_phase_bug", c.verify.inject_phase_bug);
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"potential", c.potential},
          {"p", c.p},
          {"grid", {{"xi_max", c.grid.xi_max}, {"count", c.grid.count}, {"rtol", c.grid.rtol}}},
          {"hypotheses",
           {{"A", c.hypotheses.A}, {"lambda", c.hypotheses.lambda}, {"delta", c.hypotheses.delta},
            {"set", c.hypotheses.set}}},
          {"sweep", c.sweep},
          {"search",
           {{"iterations", c.search.iterations},
            {"restarts", c.search.restarts},
            {"layers", c.search.layers},
            {"lo", c.search.lo},
            {"hi", c.search.hi},
            {"value_bound", c.search.value_bound},
            {"l1_floor", c.search.l1_floor},
            {"step", c.search.step}}},
          {"dist", {{"starts", c.dist.starts}, {"max_evaluations", c.dist.max_evaluations}}},
          {"verify", {{"potentials", c.verify.potentials}, {"inject_phase_bug", c.verify.inject_phase_bug}}},
          {"seed", c.seed},
          {"out", c.out},
          {"threads", c.threads}};
}

namespace {

PiecewisePotential need_potential(const RunConfig& c) {
  if (c.potential.empty()) throw ConfigError(fmt::format("{}: a potential file is required (--potential)", c.command));
  return io::read_potential(c.potential);
}

void provenance(std::ostream& os, const RunConfig& c) { os << "# config " << config_to_json(c).dump() << '\n'; }

int cmd_transform(const RunConfig& c, std::ostream& os) {
  const PiecewisePotential f = need_potential(c);
  NlftOptions no;
  no.threads = c.threads;
  const ScatteringData d = nlft(f, SpectralGrid{c.grid.xi_max, c.grid.count}, no);
  provenance(os, c);
  io::write_transform_csv(os, d);
  return kExitOk;
}

int cmd_linear(const RunConfig& c, std::ostream& os) {
  const PiecewisePotential f = need_potential(c);
  const std::vector<double> xi = SpectralGrid{c.grid.xi_max, c.grid.count}.nodes();
  const std::vector<cplx> fhat = linear_ft(f, xi, c.threads);
  std::vector<MaxTruncatedFt> fstar(xi.size());
  if (!f.empty())
    for (std::size_t i = 0; i < xi.size(); ++i) fstar[i] = max_truncated_ft(f, xi[i], 64);
  provenance(os, c);
  io::write_linear_csv(os, xi, fhat, fstar);
  return kExitOk;
}

int cmd_expansion(const RunConfig& c, std::ostream& os) {
  const PiecewisePotential f = need_potential(c);
  ExpansionOptions eo;
  eo.threads = c.threads;
  const std::vector<double> xi = SpectralGrid{c.grid.xi_max, c.grid.count}.nodes();
  const std::vector<ExpansionRow> rows = expansion_report(f, xi, eo);
  provenance(os, c);
  io::write_expansion_csv(os, rows);
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
  VerifyOptions vo;
  vo.seed = c.seed;
  vo.potentials = c.verify.potentials;
  vo.threads = c.threads;
  vo.inject_phase_bug = c.verify.inject_phase_bug;
  const std::vector<CheckResult> checks = run_verify(vo);
  provenance(os, c);
  print_checks(os, checks);
  for (const CheckResult& r : checks)
    if (!r.pass) return kExitCheckFailed;
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& os) {
  const PiecewisePotential shape =
      c.potential.empty() ? PiecewisePotential::box(0.0, 1.0, 1.0) : io::read_potential(c.potential);
  if (shape.empty()) throw ConfigError("sweep: the shape must be nonzero");
  AdaptiveGridOptions go;
  go.rtol = c.grid.rtol;
  go.threads = c.threads;
  const SweepResult s = small_potential_sweep(shape, c.p, c.sweep, go);
  provenance(os, c);
  io::write_sweep_csv(os, s);
  fmt::print(os, "# eps_hat {} (empirical, not certified)\n", io::num(s.eps_hat()));
  fmt::print(os, "# deficit_fit intercept {} r_squared {}\n", io::num(s.deficit_fit.intercept),
             io::num(s.deficit_fit.r_squared));
  fmt::print(os, "# gap_loglog_slope {} r_squared {}\n", io::num(s.gap_fit.slope), io::num(s.gap_fit.r_squared));
  fmt::print(os, "# deficit_positive {} nonlinear_below_linear {} min_altineq_slack {}\n", s.deficit_positive,
             s.nonlinear_below_linear, io::num(s.min_altineq_slack));
  fmt::print(os, "# gamma {}\n", s.gamma_formula);
  return kExitOk;
}

int cmd_search(const RunConfig& c, std::ostream& os) {
  SearchFamily fam{c.search.layers, c.search.lo, c.search.hi, c.search.value_bound, c.search.l1_floor};
  SearchOptions so;
  so.iterations = c.search.iterations;
  so.seed = c.seed;
  so.restarts = c.search.restarts;
  so.step = c.search.step;
  so.threads = c.threads;
  const SearchResult r = counterexample_search(c.p, fam, so);
  json log = json::array();
  for (const SearchStep& s : r.log)
    log.push_back({{"iteration", s.iteration}, {"rho", s.rho}, {"best_rho", s.best_rho}, {"accepted", s.accepted}});
  const json j = {{"config", config_to_json(c)},
                  {"rho", r.rho},
                  {"restart", r.restart},
                  {"best", io::potential_to_json(r.best)},
                  {"report", io::hy_report_to_json(r.report)},
                  {"log", log}};
  os << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_dist(const RunConfig& c, std::ostream& os) {
  const PiecewisePotential f = need_potential(c);
  DistOptions d;
  d.starts = c.dist.starts;
  d.seed = c.seed;
  d.max_evaluations = c.dist.max_evaluations;
  d.threads = c.threads;
  const DistResult r = dist_p(f, c.p, d);
  const json j = {{"config", config_to_json(c)},
                  {"dist", r.distance},
                  {"gaussian", io::gaussian_to_json(r.best)},
                  {"starts", r.starts},
                  {"converged", r.converged},
                  {"evaluations", r.evaluations}};
  os << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_hypotheses(const RunConfig& c, std::ostream& os) {
  const PiecewisePotential f = need_potential(c);
  if (c.hypotheses.set.empty()) throw ConfigError("hypotheses: an interval set file is required (hypotheses.set)");
  const IntervalSet s = io::read_interval_set(c.hypotheses.set);
  const HypothesisReport r = check_hypotheses(f, s, {c.p, c.hypotheses.A, c.hypotheses.lambda, c.hypotheses.delta});
  const json j = {{"config", config_to_json(c)},
                  {"i", r.small_l1},
                  {"ii", r.concentrated},
                  {"iii", r.lp_controlled},
                  {"margins", {{"i", r.margin_small_l1}, {"ii", r.margin_concentrated}, {"iii", r.margin_lp_controlled}}}};
  os << j.dump(2) << '\n';
  return r.all() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for the SU(1,1) nonlinear Fourier transform"};
  app.require_subcommand(1);
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_path, potential_path;
  unsigned threads = 0;
  bool phase_bug = false;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_out = app.add_option("--out", out_path, "output file (default: stdout)");
  auto* o_threads = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  auto* o_potential = app.add_option("--potential", potential_path, "potential JSON file");
  auto* o_bug = app.add_flag("--inject-phase-bug", phase_bug, "verify: negative control with a wrong boundary phase");
  app.fallthrough();
  const std::pair<const char*, const char*> commands[] = {
      {"transform", "a, b and log|a|^2 on a spectral grid (CSV)"},
      {"linear", "linear Fourier transform on a spectral grid (CSV)"},
      {"verify", "built-in property checks"},
      {"sweep", "small-potential Hausdorff-Young sweep (JSON)"},
      {"search", "seeded counterexample search (JSON)"},
      {"dist", "L^p distance to the Gaussian family (JSON)"},
      {"expansion", "quartic expansion and domination bounds (CSV)"},
      {"hypotheses", "check the hypothesis set of a potential"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunConfig cfg;
  try {
    if (*o_config) cfg = config_from_json(io::read_json_file(config_path));
    cfg.command = app.get_subcommands().front()->get_name();
    if (*o_seed) cfg.seed = seed;
    if (*o_out) cfg.out = out_path;
    if (*o_threads) cfg.threads = threads;
    if (*o_potential) cfg.potential = potential_path;
    if (*o_bug) cfg.verify.inject_phase_bug = true;
    cfg.validate();
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      fmt::print(err, "error: cannot write {}\n", cfg.out);
      return kExitUsage;
    }
    os = &file;
  }

  try {
    const std::string& cmd = cfg.command;
    if (cmd == "transform") return cmd_transform(cfg, *os);
    if (cmd == "linear") return cmd_linear(cfg, *os);
    if (cmd == "verify") return cmd_verify(cfg, *os);
    if (cmd == "sweep") return cmd_sweep(cfg, *os);
    if (cmd == "search") return cmd_search(cfg, *os);
    if (cmd == "dist") return cmd_dist(cfg, *os);
    if (cmd == "expansion") return cmd_expansion(cfg, *os);
    if (cmd == "hypotheses") return cmd_hypotheses(cfg, *os);
  } catch (const io::InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
  fmt::print(err, "error: unknown command {}\n", cfg.command);
  return kExitUsage;
}

}  // namespace nlft::cli
