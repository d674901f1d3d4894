#include "heisadams/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "heisadams/constants.hpp"
#include "heisadams/extremals.hpp"
#include "heisadams/field_io.hpp"
#include "heisadams/grid.hpp"
#include "heisadams/rearrange.hpp"
#include "heisadams/varsolve.hpp"
#include "json.hpp"

namespace heisadams::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands = {"constants", "rearrange-check", "sharpness", "capacity",
                                            "solve",     "continuation",    "lambda",    "plot-data"};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  // Temp file then rename, so readers never see a partial artifact.
  void write(const std::string& name, const std::string& content) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw ConfigError("cannot write " + tmp.string());
      os << content;
      if (!os.flush()) throw ConfigError("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
    if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
  }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

Json config_json(const RunConfig& c) {
  return Json{{"command", c.command},     {"grid", c.grid},
              {"extent", c.extent},       {"a", c.a},
              {"nl", c.nl},               {"lambdaFactor", c.lambda_factor},
              {"alpha0", c.alpha0},       {"tol", c.tol},
              {"out", c.out},             {"seed", c.seed},
              {"betas", c.betas},         {"ks", c.ks},
              {"ell", c.ell},             {"nmax", c.nmax},
              {"samples", c.samples},     {"pairs", c.pairs},
              {"maxIterations", c.max_iterations}, {"reading", c.reading},
              {"artifact", c.artifact}};
}

MountainPassOptions solver_options(const RunConfig& c) {
  MountainPassOptions o;
  o.tol = c.tol;
  o.max_iterations = c.max_iterations;
  return o;
}

Json solver_defaults(const MountainPassOptions& o) {
  return Json{{"pathPoints", o.path_points},         {"tol", o.tol},
              {"armijo", o.armijo},                  {"initialStep", o.initial_step},
              {"trivialityFloor", o.triviality_floor}, {"maxIterations", o.max_iterations},
              {"tMax", o.t_max},                     {"cgTolerance", o.cg_tolerance}};
}

Json hypotheses_json(const HypothesisReport& rep) {
  Json arr = Json::array();
  for (const auto& c : rep.checks)
    arr.push_back({{"name", c.name},
                   {"applicable", c.applicable},
                   {"passed", c.passed},
                   {"worst", c.worst},
                   {"witnessU", c.witness_u},
                   {"detail", c.detail}});
  return arr;
}

void require_exponent(const RunConfig& c) {
  if (!(c.a >= 0.0 && c.a < 4.0)) throw ConfigError("--a must lie in [0, 4)");
}

// Nonlinearity for the configured model; Lambda is needed by the critical model.
NonlinearitySpec build_nonlinearity(const RunConfig& c, double lambda) {
  if (c.nl == "cubic") return cubic_nonlinearity();
  if (c.nl == "critical") {
    if (!(c.alpha0 > 0.0)) throw ConfigError("--alpha0 must be positive");
    return critical_nonlinearity(c.lambda_factor * lambda, c.alpha0);
  }
  if (c.nl == "zero") return zero_nonlinearity();
  throw ConfigError("unknown nonlinearity '" + c.nl + "' (cubic, critical, zero)");
}

int cmd_constants(const RunConfig& c, Artifacts& art, Json& summary) {
  const SharpConstants k = compute_constants();
  const MonteCarloConstants mc = monte_carlo_constants(c.samples, c.seed);
  Json j;
  j["constants"] = Json::parse(constants_to_json(k));
  auto est = [](const MonteCarloEstimate& e) { return Json{{"value", e.value}, {"stdError", e.std_error}}; };
  j["monteCarlo"] = {{"samples", c.samples},
                     {"unitBallVolume", est(mc.unit_ball_volume)},
                     {"gamma1Integral", est(mc.gamma1_integral)},
                     {"gamma1", est(mc.gamma1)}};
  art.write_json("constants.json", j);
  summary["converged"] = k.converged;
  return k.converged ? kSuccess : kConvergenceFailure;
}

int cmd_rearrange(const RunConfig& c, Artifacts& art, Json& summary) {
  const DomainPtr ball = GridDomain::koranyi_ball(c.grid, 1.0);
  // g = rho^{-2}, the origin node carrying its cell average.
  const auto w2 = ball->singular_weight(2.0);
  GridField g(ball);
  for (std::size_t o : ball->physical_nodes()) g[o] = (*w2)[o];
  const RearrangementProfile prof = decreasing_rearrangement(g);
  const double omega = prof.total_measure();
  const double v = closed_form_constants().unit_ball_volume;
  double star_dev = 0.0, ratio_dev = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double t = omega * (0.1 + 0.8 * i / 80.0);
    const double fs = prof(t);
    star_dev = std::max(star_dev, std::abs(fs / std::sqrt(v / t) - 1.0));
    ratio_dev = std::max(ratio_dev, std::abs(double_star(prof, t) / (2.0 * fs) - 1.0));
  }
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const DomainPtr small = GridDomain::box(7, 1.0);
  double worst_hl = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < c.pairs; ++p) {
    GridField f(small), h(small);
    for (std::size_t o : small->physical_nodes()) {
      f[o] = uni(rng);
      h[o] = uni(rng);
    }
    double scale = 0.0;
    for (std::size_t o : small->physical_nodes())
      scale += std::abs(f[o] * h[o]) * small->measure(o);
    worst_hl = std::min(worst_hl, hardy_littlewood_slack(f, h) / std::max(scale, 1e-300));
  }
  const OneDReduction red = one_d_reduction(g);

  std::ostringstream csv;
  write_profile_csv(csv, prof);
  art.write("profile.csv", csv.str());
  const bool hl_ok = c.pairs == 0 || worst_hl >= -1e-12;
  art.write_json("rearrange.json", {{"grid", c.grid},
                                    {"measure", omega},
                                    {"maxStarDeviation", star_dev},
                                    {"maxDoubleStarRatioDeviation", ratio_dev},
                                    {"hardyLittlewoodPairs", c.pairs},
                                    {"worstRelativeHardyLittlewoodSlack", c.pairs ? worst_hl : 0.0},
                                    {"oneDL2Defect", red.l2_defect}});
  summary["hardyLittlewoodOk"] = hl_ok;
  return hl_ok ? kSuccess : kConvergenceFailure;
}

int cmd_sharpness(const RunConfig& c, Artifacts& art, Json& summary) {
  require_exponent(c);
  const std::vector<double> betas = parse_betas(c.betas, c.a);
  const std::vector<int> ks = parse_ks(c.ks);
  const SharpnessTable t = sharpness_probe(c.a, betas, ks, c.grid, c.extent);
  std::ostringstream csv;
  write_sharpness_csv(csv, t);
  art.write("sharpness.csv", csv.str());
  const double threshold = closed_form_constants().big_a * (1.0 - c.a / 4.0);
  art.write_json("sharpness.json",
                 {{"a", c.a}, {"threshold", threshold}, {"betas", betas}, {"ks", ks}, {"maxNorm", t.max_norm}});
  summary["maxNorm"] = t.max_norm;
  return kSuccess;
}

int cmd_capacity(const RunConfig& c, Artifacts& art, Json& summary) {
  if (!(c.ell > 0.0 && c.ell < 1.0)) throw ConfigError("--ell must lie in (0, 1)");
  const DomainPtr ball = GridDomain::koranyi_ball(c.grid, 1.0);
  CapacityProfile p;
  try {
    p = capacity_profile(c.ell, ball);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::ostringstream bin;
  write_field_binary(bin, p.field);
  art.write("capacity.bin", bin.str());
  art.write_json("capacity.json", {{"ell", p.ell},
                                   {"energy", p.energy},
                                   {"bound", p.bound},
                                   {"ratio", p.energy / p.bound},
                                   {"slack", p.slack},
                                   {"rings", p.rings},
                                   {"cgIterations", p.solve.iterations},
                                   {"cgConverged", p.solve.converged}});
  summary["ratio"] = p.energy / p.bound;
  return p.solve.converged ? kSuccess : kConvergenceFailure;
}

int cmd_lambda(const RunConfig& c, Artifacts& art, Json& summary) {
  require_exponent(c);
  const DomainPtr box = GridDomain::box(c.grid, c.extent);
  const LambdaEstimate l = lambda_estimate(box, c.a, c.tol);
  art.write_json("lambda.json", {{"a", c.a},
                                 {"lambda", l.value},
                                 {"residual", l.residual},
                                 {"iterations", l.iterations},
                                 {"converged", l.converged}});
  summary["lambda"] = l.value;
  return l.converged ? kSuccess : kConvergenceFailure;
}

void write_trace(Artifacts& art, const std::string& name, const MountainPassState& st) {
  std::ostringstream os;
  os << "iteration,level,gradResidual,norm\n";
  for (const auto& r : st.history)
    os << r.iteration << ',' << fmt(r.level) << ',' << fmt(r.residual) << ',' << fmt(r.norm) << '\n';
  art.write(name, os.str());
}

int cmd_solve(const RunConfig& c, Artifacts& art, Json& summary) {
  require_exponent(c);
  const DomainPtr box = GridDomain::box(c.grid, c.extent);
  const LambdaEstimate lam = lambda_estimate(box, c.a, 1e-8);
  const NonlinearitySpec nl = build_nonlinearity(c, lam.value);

  SamplePlan plan;
  if (nl.growth == GrowthClass::Critical) {
    plan.m_estimate = m_constant(8, {std::min<std::size_t>(c.grid, 17)}).back().value;
    plan.u_max = 2.0 * nl.r0 + 1.0;
  }
  const HypothesisReport hyp = validate_hypotheses(nl, c.a, lam.value, plan);
  Json result{{"nl", nl.name}, {"a", c.a}, {"Lambda", lam.value}, {"hypotheses", hypotheses_json(hyp)}};
  const bool hyp_ok = hyp.all_passed({"primitive", "H1", "H2", "H3", "H4", "H5"});
  if (!hyp_ok) {
    art.write_json("solve.json", result);
    summary["hypotheses"] = false;
    return kHypothesisFailure;
  }

  const MountainPassOptions opts = solver_options(c);
  const MountainPassResult r = mountain_pass_solve(nl, c.a, box, opts);
  std::ostringstream bin;
  write_field_binary(bin, r.u);
  art.write("solution.bin", bin.str());
  write_trace(art, "trace.csv", r.state);
  result["status"] = to_string(r.state.status);
  result["level"] = r.state.level_estimate;
  result["energy"] = energy(r.u, nl, c.a);
  result["gradResidual"] = r.state.grad_residual;
  result["iterations"] = r.state.history.size();
  result["endpointEnergy"] = r.state.endpoint_energy;
  if (nl.growth == GrowthClass::Critical)
    result["levelBound"] = level_bound(c.a, nl.alpha0, closed_form_constants());
  art.write_json("solve.json", result);
  summary["status"] = to_string(r.state.status);
  return r.state.converged() ? kSuccess : kConvergenceFailure;
}

int cmd_continuation(const RunConfig& c, Artifacts& art, Json& summary) {
  if (c.nmax < 2) throw ConfigError("--nmax must be >= 2");
  const DomainPtr box = GridDomain::box(c.grid, c.extent);
  double lambda = 0.0;
  if (c.nl == "critical") lambda = lambda_estimate(box, continuation_exponent(1), 1e-8).value;
  const NonlinearitySpec nl = build_nonlinearity(c, lambda);
  const ContinuationResult res = critical_continuation(nl, c.nmax, box, solver_options(c));
  std::ostringstream os;
  os << "n,a,norm,diffNorm,intFu,intF,level,residual,status\n";
  for (const auto& s : res.steps)
    os << s.n << ',' << fmt(s.a) << ',' << fmt(s.norm) << ',' << fmt(s.diff_norm) << ','
       << fmt(s.int_fu) << ',' << fmt(s.int_big_f) << ',' << fmt(s.level) << ',' << fmt(s.residual)
       << ',' << to_string(s.status) << '\n';
  art.write("continuation.csv", os.str());
  art.write_json("continuation.json",
                 {{"completed", res.completed}, {"tailDecreasing", res.tail_decreasing}, {"steps", res.steps.size()}});
  summary["completed"] = res.completed;
  return res.completed ? kSuccess : kConvergenceFailure;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p, std::string& header) {
  std::ifstream is(p);
  if (!is) throw ConfigError("missing artifact " + p.string());
  std::getline(is, header);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

int cmd_plot_data(const RunConfig& c, Artifacts& art, Json& summary) {
  if (c.artifact.empty()) throw ConfigError("plot-data needs --artifact");
  std::string header;
  const auto rows = read_csv(c.artifact, header);
  if (header == "k,beta,a,value,normEstimate") {
    std::vector<std::string> betas;
    for (const auto& r : rows)
      if (std::find(betas.begin(), betas.end(), r.at(1)) == betas.end()) betas.push_back(r.at(1));
    for (std::size_t b = 0; b < betas.size(); ++b) {
      std::ostringstream os;
      os << "# beta " << betas[b] << "\n# k value\n";
      for (const auto& r : rows)
        if (r.at(1) == betas[b]) os << r.at(0) << ' ' << r.at(3) << '\n';
      art.write("series_beta" + std::to_string(b) + ".dat", os.str());
    }
  } else if (header == "iteration,level,gradResidual,norm") {
    std::ostringstream os;
    os << "# iteration level\n";
    for (const auto& r : rows) os << r.at(0) << ' ' << r.at(1) << '\n';
    art.write("trace_level.dat", os.str());
  } else if (header.rfind("n,a,norm,diffNorm", 0) == 0) {
    std::ostringstream os;
    os << "# a norm diffNorm\n";
    for (const auto& r : rows) os << r.at(1) << ' ' << r.at(2) << ' ' << r.at(3) << '\n';
    art.write("continuation.dat", os.str());
  } else {
    throw ConfigError("unrecognized artifact header: " + header);
  }
  summary["rows"] = rows.size();
  return kSuccess;
}

}  // namespace

std::vector<double> parse_betas(const std::string& text, double a) {
  const double big_a = closed_form_constants().big_a;
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) continue;
    double mult = 1.0;
    if (tok.back() == 'A') {
      mult = big_a;
      tok.pop_back();
    } else if (tok.back() == 'T') {
      mult = big_a * (1.0 - a / 4.0);
      tok.pop_back();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = tok.empty() ? 1.0 : std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad beta '" + tok + "'");
    }
    if (!tok.empty() && used != tok.size()) throw ConfigError("bad beta '" + tok + "'");
    if (!(v * mult >= 0.0)) throw ConfigError("betas must be non-negative");
    out.push_back(v * mult);
  }
  if (out.empty()) throw ConfigError("no betas given");
  return out;
}

std::vector<int> parse_ks(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  auto to_int = [](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad k '" + s + "'");
    }
    if (used != s.size() || v < 2) throw ConfigError("bad k '" + s + "' (integers >= 2)");
    return v;
  };
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) continue;
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(tok));
    } else {
      const int lo = to_int(tok.substr(0, dots)), hi = to_int(tok.substr(dots + 2));
      if (hi < lo) throw ConfigError("empty k range '" + tok + "'");
      for (int k = lo; k <= hi; ++k) out.push_back(k);
    }
  }
  if (out.empty()) throw ConfigError("no ks given");
  return out;
}

int run(const RunConfig& cfg, std::ostream& log) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
    throw ConfigError("unknown command '" + cfg.command + "'");
  if (cfg.grid < 5) throw ConfigError("--grid must be >= 5");
  if (!(cfg.extent > 0.0)) throw ConfigError("--extent must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (cfg.reading != "squared" && cfg.reading != "linear") throw ConfigError("--reading must be squared or linear");

  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec || !fs::is_directory(cfg.out)) throw ConfigError("cannot create output directory " + cfg.out);
  Artifacts art(cfg.out);
  Json summary = Json::object();

  int code = kSuccess;
  const std::string& c = cfg.command;
  if (c == "constants") code = cmd_constants(cfg, art, summary);
  else if (c == "rearrange-check") code = cmd_rearrange(cfg, art, summary);
  else if (c == "sharpness") code = cmd_sharpness(cfg, art, summary);
  else if (c == "capacity") code = cmd_capacity(cfg, art, summary);
  else if (c == "lambda") code = cmd_lambda(cfg, art, summary);
  else if (c == "solve") code = cmd_solve(cfg, art, summary);
  else if (c == "continuation") code = cmd_continuation(cfg, art, summary);
  else code = cmd_plot_data(cfg, art, summary);

  Json manifest{{"config", config_json(cfg)},
                {"solverDefaults", solver_defaults(solver_options(cfg))},
                {"quadratureDefaults",
                 {{"gaugeCutoff", QuadratureOptions{}.gauge_cutoff},
                  {"relativeTolerance", QuadratureOptions{}.relative_tolerance},
                  {"maxDepth", QuadratureOptions{}.max_depth}}},
                {"samplePlanDefaults",
                 {{"uMax", SamplePlan{}.u_max}, {"uSamples", SamplePlan{}.u_samples}, {"delta", SamplePlan{}.delta}}},
                {"artifacts", art.names()},
                {"summary", summary},
                {"exitCode", code}};
  art.write_json("manifest.json", manifest);
  log << c << ": exit " << code << ", artifacts in " << cfg.out << '\n';
  return code;
}

int main(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Singular Adams inequality experiments on the Heisenberg group"};
  app.set_config("--config", "", "flat key=value configuration file");
  app.add_option("--grid", cfg.grid, "nodes per axis");
  app.add_option("--extent", cfg.extent, "box half extent or ball radius");
  app.add_option("--a", cfg.a, "singular exponent");
  app.add_option("--nl", cfg.nl, "nonlinearity: cubic, critical, zero");
  app.add_option("--lambda-factor", cfg.lambda_factor, "critical model lambda / Lambda");
  app.add_option("--alpha0", cfg.alpha0, "critical exponent alpha0");
  app.add_option("--tol", cfg.tol, "solver tolerance");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--seed", cfg.seed, "seed for randomized inputs");
  app.add_option("--betas", cfg.betas, "betas, e.g. 0.9A,1.0A,1.25T");
  app.add_option("--ks", cfg.ks, "ks, e.g. 2,4,8 or 2..32");
  app.add_option("--ell", cfg.ell, "inner radius of the capacity condenser");
  app.add_option("--nmax", cfg.nmax, "continuation steps");
  app.add_option("--samples", cfg.samples, "Monte-Carlo samples");
  app.add_option("--pairs", cfg.pairs, "random field pairs");
  app.add_option("--max-iterations", cfg.max_iterations, "solver iteration cap");
  app.add_option("--reading", cfg.reading, "M integrand reading: squared or linear");
  app.add_option("--artifact", cfg.artifact, "artifact for plot-data");
  for (const auto& name : kCommands) app.add_subcommand(name)->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    return run(cfg, log);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConvergenceFailure;
  }
}

}  // namespace heisadams::cli
