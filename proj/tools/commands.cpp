#include "commands.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcpt/errors.hpp"
#include "gcpt/oracle.hpp"
#include "gcpt/population.hpp"
#include "gcpt/sampling.hpp"
#include "gcpt/scenario_io.hpp"
#include "gcpt/valuation.hpp"
#include "gcpt/weighting.hpp"

namespace gcpt::cli {

using nlohmann::json;

namespace {

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// nlohmann::json serialization with every float printed at 17 significant digits.
void write_json(const json& j, std::string& s) {
  switch (j.type()) {
    case json::value_t::object: {
      s += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) s += ',';
        first = false;
        s += json(it.key()).dump();
        s += ':';
        write_json(it.value(), s);
      }
      s += '}';
      break;
    }
    case json::value_t::array: {
      s += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ',';
        write_json(j[i], s);
      }
      s += ']';
      break;
    }
    case json::value_t::number_float:
      s += num(j.get<double>());
      break;
    default:
      s += j.dump();
  }
}

std::string dump17(const json& j) {
  std::string s;
  write_json(j, s);
  return s;
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

CptAgent load_agent(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("agent file readable", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw InvalidParameter("agent file is JSON", ex.what());
  }
  return parse_agent(j);
}

void require_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidParameter("sigma >= 0", "sigma = " + num(sigma));
}

json breakdown_json(const ValuationBreakdown& b) {
  return json{{"total", b.total},
              {"loss_part", b.loss_part},
              {"gain_part", b.gain_part},
              {"intermediates",
               {{"mu_hat_minus", b.mu_hat_minus},
                {"sigma_hat_minus", b.sigma_hat_minus},
                {"mu_bar_hat_plus", b.mu_bar_hat_plus},
                {"sigma_hat_plus", b.sigma_hat_plus},
                {"x_minus", b.x_minus},
                {"x_bar_plus", b.x_bar_plus}}}};
}

int cmd_value(const std::string& agent_file, double mu, double sigma, std::ostream& out) {
  require_sigma(sigma);
  const CptAgent agent = load_agent(agent_file);
  json j;
  if (sigma == 0.0) {
    const double total = cpt_value_degenerate(agent, mu);
    j = json{{"total", total},
             {"loss_part", std::min(total, 0.0)},
             {"gain_part", std::max(total, 0.0)},
             {"intermediates", nullptr}};
  } else {
    j = breakdown_json(cpt_value(agent, GaussianGamble(mu, sigma)));
  }
  out << dump17(j) << '\n';
  return kOk;
}

int cmd_ce(const std::string& agent_file, double mu, double sigma, std::ostream& out) {
  require_sigma(sigma);
  const CptAgent agent = load_agent(agent_file);
  const double ce = sigma == 0.0 ? mu : certainty_equivalent(agent, GaussianGamble(mu, sigma));
  const double total =
      sigma == 0.0 ? cpt_value_degenerate(agent, mu) : cpt_value(agent, GaussianGamble(mu, sigma)).total;
  out << dump17(json{{"certainty_equivalent", ce}, {"total", total}}) << '\n';
  return kOk;
}

int cmd_grad(const std::string& agent_file, double mu, double sigma, std::ostream& out) {
  require_sigma(sigma);
  if (sigma == 0.0) throw InvalidParameter("sigma > 0", "the gradient needs a non-degenerate gamble");
  const CptAgent agent = load_agent(agent_file);
  const CptGradient g = cpt_gradient(agent, GaussianGamble(mu, sigma));
  json partials = json::object();
  for (int i = 0; i < kNumParams; ++i)
    partials[std::string(param_name(static_cast<Param>(i)))] = g.partials(i);
  out << dump17(json{{"gradient", partials}}) << '\n';
  return kOk;
}

int cmd_weight_table(double p0, double gamma, int points, std::ostream& out) {
  if (points < 2) throw InvalidParameter("points >= 2", std::to_string(points));
  const WeightingParams w(p0, gamma);
  out << "p,w,w_prime\n";
  for (int i = 0; i < points; ++i) {
    const double p = static_cast<double>(i) / (points - 1);
    out << num(p) << ',' << num(distort(w, p)) << ',';
    if (i > 0 && i < points - 1) out << num(distort_derivative(w, p));
    out << '\n';
  }
  return kOk;
}

struct OracleCheckOptions {
  std::uint64_t draws = 500;
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-8;
  double quad_tol = 1e-10;
  std::string agent_file;
};

int cmd_oracle_check(const OracleCheckOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.draws < 1) throw InvalidParameter("draws >= 1", std::to_string(opt.draws));
  std::optional<CptAgent> fixed;
  if (!opt.agent_file.empty()) fixed = load_agent(opt.agent_file);
  OracleConfig cfg;
  cfg.abs_tol = opt.quad_tol;
  cfg.validate();

  std::mt19937_64 rng(opt.seed);
  double worst = -1.0;
  std::uint64_t worst_id = 0;
  std::optional<std::pair<CptAgent, GaussianGamble>> worst_case;
  out << "draw,closed_form,quadrature,abs_diff\n";
  for (std::uint64_t d = 0; d < opt.draws; ++d) {
    const CptAgent agent = fixed ? *fixed : draw_agent(rng);
    const GaussianGamble g = draw_gamble(rng);
    const double closed = cpt_value(agent, g).total;
    double quad;
    try {
      quad = quadrature_value(agent, g, cfg);
    } catch (const OracleFailure& ex) {
      err << "oracle-check: draw " << d << ": " << ex.what() << '\n';
      return kCheckFailed;
    }
    const double diff = std::abs(closed - quad);
    out << d << ',' << num(closed) << ',' << num(quad) << ',' << num(diff) << '\n';
    if (diff > worst) {
      worst = diff;
      worst_id = d;
      worst_case.emplace(agent, g);
    }
  }
  const bool pass = worst <= opt.tol;
  err << "oracle-check: " << (pass ? "PASS" : "FAIL") << " draws=" << opt.draws
      << " max_abs_diff=" << num(worst) << " tol=" << num(opt.tol) << " worst_draw=" << worst_id
      << '\n';
  if (!pass) {
    json params = agent_to_json(worst_case->first);
    params["mu"] = worst_case->second.mu();
    params["sigma"] = worst_case->second.sigma();
    err << "oracle-check: worst draw parameters " << dump17(params) << '\n';
    return kCheckFailed;
  }
  return kOk;
}

std::ofstream open_trace(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidParameter("trace file writable", "cannot open '" + path + "'");
  return f;
}

int cmd_optimize(const std::string& scenario_file, const std::string& method, std::uint64_t budget,
                 std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  const PopulationScenario scn = load_scenario_file(scenario_file);
  const OptimizeMethod m = method == "ascent" ? OptimizeMethod::ascent : OptimizeMethod::grid;
  const OptimizationResult res = optimize_program(scn, m, budget, seed);
  if (!out_path.empty()) {
    std::ofstream trace = open_trace(out_path);
    trace << "evaluation";
    for (Eigen::Index i = 0; i < scn.bounds.dim(); ++i) trace << ",p" << i;
    trace << ",gain\n";
    for (std::size_t k = 0; k < res.trace.size(); ++k) {
      trace << k;
      for (Eigen::Index i = 0; i < res.trace[k].program.size(); ++i)
        trace << ',' << num(res.trace[k].program(i));
      trace << ',' << num(res.trace[k].gain) << '\n';
    }
  }
  out << dump17(json{{"method", method},
                     {"program", to_json(res.best)},
                     {"gain", res.gain},
                     {"adoption", adoption_fraction(scn, res.best)},
                     {"evaluations", res.trace.size()}})
      << '\n';
  return kOk;
}

int cmd_equilibrium(const std::string& scenario_file, double tol, const std::string& out_path,
                    std::ostream& out) {
  const PopulationScenario scn = load_scenario_file(scenario_file);
  const Program p = scn.program.value_or(scn.bounds.center());
  const EquilibriumResult res = equilibrium(scn, p, tol);
  if (!out_path.empty()) {
    std::ofstream trace = open_trace(out_path);
    trace << "iteration,lo,hi,mid,psi_mid\n";
    for (std::size_t k = 0; k < res.trace.size(); ++k) {
      const BisectionStep& s = res.trace[k];
      trace << k << ',' << num(s.lo) << ',' << num(s.hi) << ',' << num(s.mid) << ','
            << num(s.psi_mid) << '\n';
    }
  }
  out << dump17(json{{"q", res.q},
                     {"residual", res.residual},
                     {"psi", social_response(scn, p, res.q)},
                     {"individuals", scn.individuals.size()},
                     {"program", to_json(p)},
                     {"bisection_steps", res.trace.size()}})
      << '\n';
  return kOk;
}

int cmd_bench(std::uint64_t n, std::uint64_t seed, std::ostream& out) {
  if (n < 1) throw InvalidParameter("n >= 1", std::to_string(n));
  std::mt19937_64 rng(seed);
  std::vector<CptAgent> agents;
  std::vector<GaussianGamble> gambles;
  agents.reserve(n);
  gambles.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    agents.push_back(draw_agent(rng));
    gambles.push_back(draw_gamble(rng));
  }
  using clock = std::chrono::steady_clock;
  double sink = 0.0;

  const auto t0 = clock::now();
  for (std::uint64_t i = 0; i < n; ++i) sink += cpt_value(agents[i], gambles[i]).total;
  const auto t1 = clock::now();
  OracleConfig cfg;
  for (std::uint64_t i = 0; i < n; ++i) sink -= quadrature_value(agents[i], gambles[i], cfg);
  const auto t2 = clock::now();

  const double closed_s = std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9);
  const double quad_s = std::max(std::chrono::duration<double>(t2 - t1).count(), 1e-9);
  const double dn = static_cast<double>(n);
  out << dump17(json{{"n", n},
                     {"seed", seed},
                     {"closed_form_seconds", closed_s},
                     {"quadrature_seconds", quad_s},
                     {"closed_form_per_second", dn / closed_s},
                     {"quadrature_per_second", dn / quad_s},
                     {"speedup", quad_s / closed_s},
                     {"checksum_residual", sink}})
      << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian CPT valuation engine", "gcpt"};
  app.require_subcommand(1);

  std::string agent_file;
  double mu = 0.0;
  double sigma = 1.0;

  auto add_valuation_cmd = [&](const char* name, const char* help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("agent-file", agent_file, "agent JSON file")->required();
    c->add_option("--mu", mu, "mean reward")->required();
    c->add_option("--sigma", sigma, "reward standard deviation (>= 0)")->required();
    return c;
  };
  CLI::App* value_cmd = add_valuation_cmd("value", "closed-form valuation breakdown as JSON");
  CLI::App* ce_cmd = add_valuation_cmd("ce", "certainty equivalent as JSON");
  CLI::App* grad_cmd = add_valuation_cmd("grad", "gradient in all twelve parameters as JSON");

  double p0 = 0.5, gamma = 1.0;
  int points = 101;
  CLI::App* wt = app.add_subcommand("weight-table", "CSV of p, w(p), w'(p) on a uniform grid");
  wt->add_option("--p0", p0, "crossover point")->required();
  wt->add_option("--gamma", gamma, "slope at the crossover")->required();
  wt->add_option("--points", points, "grid size (>= 2)")->capture_default_str();

  OracleCheckOptions oc;
  CLI::App* check = app.add_subcommand("oracle-check", "closed form vs quadrature sweep");
  check->add_option("--draws", oc.draws, "number of random draws")->capture_default_str();
  check->add_option("--seed", oc.seed, "RNG seed")->capture_default_str();
  check->add_option("--tol", oc.tol, "max allowed |closed form - quadrature|")->capture_default_str();
  check->add_option("--quad-tol", oc.quad_tol, "quadrature absolute tolerance")->capture_default_str();
  check->add_option("--agent", oc.agent_file, "fix the agent instead of drawing it");

  std::string scenario_file, method = "grid", out_path;
  std::uint64_t budget = 100, seed = kDefaultSeed;
  CLI::App* opt = app.add_subcommand("optimize", "maximize the designer's gain over programs");
  opt->add_option("scenario-file", scenario_file, "scenario JSON file")->required();
  opt->add_option("--method", method, "grid or ascent")
      ->check(CLI::IsMember({"grid", "ascent"}))
      ->capture_default_str();
  opt->add_option("--budget", budget, "number of gain evaluations")->capture_default_str();
  opt->add_option("--seed", seed, "RNG seed for ascent restarts")->capture_default_str();
  opt->add_option("--out", out_path, "trace CSV path");

  double eq_tol = 1e-9;
  CLI::App* eq = app.add_subcommand("equilibrium", "social-game fixed point");
  eq->add_option("scenario-file", scenario_file, "scenario JSON file")->required();
  eq->add_option("--tol", eq_tol, "bisection tolerance")->capture_default_str();
  eq->add_option("--out", out_path, "trace CSV path");

  std::uint64_t bench_n = 100000;
  CLI::App* bench = app.add_subcommand("bench", "closed form vs quadrature throughput");
  bench->add_option("--n", bench_n, "number of valuations")->capture_default_str();
  bench->add_option("--seed", seed, "RNG seed")->capture_default_str();

  std::vector<std::string> argv_store{"gcpt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "gcpt: " << ex.what() << '\n';
    return kUsage;
  }

  try {
    if (*value_cmd) return cmd_value(agent_file, mu, sigma, out);
    if (*ce_cmd) return cmd_ce(agent_file, mu, sigma, out);
    if (*grad_cmd) return cmd_grad(agent_file, mu, sigma, out);
    if (*wt) return cmd_weight_table(p0, gamma, points, out);
    if (*check) return cmd_oracle_check(oc, out, err);
    if (*opt) return cmd_optimize(scenario_file, method, budget, seed, out_path, out);
    if (*eq) return cmd_equilibrium(scenario_file, eq_tol, out_path, out);
    if (*bench) return cmd_bench(bench_n, seed, out);
  } catch (const InvalidParameter& ex) {
    err << "gcpt: invalid input (" << ex.constraint() << "): " << ex.what() << '\n';
    return kUsage;
  } catch (const ScenarioError& ex) {
    err << "gcpt: scenario error at " << ex.what() << '\n';
    return kUsage;
  } catch (const OutOfRange& ex) {
    err << "gcpt: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& ex) {
    err << "gcpt: " << ex.what() << '\n';
    return kUsage;
  } catch (const OracleFailure& ex) {
    err << "gcpt: " << ex.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& ex) {
    err << "gcpt: " << ex.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gcpt::cli
