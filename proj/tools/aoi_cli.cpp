// aoi: optimal storage thresholds for age of information over an erasure channel.
//
// Exit codes: 0 ok, 1 check failure / non-convergence / I/O error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "aoi/closed_form.hpp"
#include "aoi/mdp_solver.hpp"
#include "aoi/report.hpp"
#include "aoi/simulator.hpp"
#include "aoi/threshold_optimizer.hpp"
#include "aoi/validation/acceptance.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParamFlags {
  double p = -1.0;
  double q = -1.0;
  double c = -1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--p", p, "per-slot arrival probability, in (0,1)")->required();
    cmd->add_option("--q", q, "per-slot delivery probability, in (0,1)")->required();
    cmd->add_option("--c", c, "storage cost per stored packet, >= 0")->required();
  }

  aoi::SystemParams make() const { return aoi::SystemParams::make(p, q, c); }
};

// Writes to --out when given, standard output otherwise.
int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// "1-5" or "1,2,7" (ranges may be mixed with single values).
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw UsageError("seed range '" + part + "' is inverted");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw UsageError("seeds must look like '1-5' or '1,2,3', got '" + text + "'");
    }
  }
  if (seeds.empty()) throw UsageError("seed list is empty");
  return seeds;
}

int run_optimize(const ParamFlags& flags, bool brute_force, int v_search, bool as_json, bool stamp,
                 const std::string& out_path) {
  const auto params = flags.make();
  if (v_search < 2) throw UsageError("v-search must be >= 2");
  const auto result = brute_force ? aoi::brute_force_threshold(params, v_search)
                                  : aoi::find_optimal_threshold(params);
  auto record = aoi::RunRecord::from(params, result);
  if (stamp) record.timestamp = utc_now();
  const std::string text = as_json ? aoi::to_json(record) + "\n"
                                   : aoi::run_record_csv_header() + "\n" + aoi::to_csv_row(record) + "\n";
  return emit(text, out_path);
}

int run_sweep(const std::string& axis, const std::vector<double>& values, const ParamFlags& flags,
              const std::string& out_path) {
  if (axis != "p" && axis != "q" && axis != "c") throw UsageError("axis must be one of p, q, c");
  if (values.empty()) throw UsageError("values must be a non-empty list");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw UsageError("values must be strictly increasing");
  }
  std::vector<aoi::SystemParams> points;
  for (const double x : values) {
    const double p = axis == "p" ? x : flags.p;
    const double q = axis == "q" ? x : flags.q;
    const double c = axis == "c" ? x : flags.c;
    points.push_back(aoi::SystemParams::make(p, q, c));
  }
  std::vector<std::future<aoi::OptimizeResult>> futures;
  for (const auto& params : points) {
    futures.push_back(std::async(std::launch::async, [params] { return aoi::find_optimal_threshold(params); }));
  }
  std::vector<aoi::SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto result = futures[i].get();
    rows.push_back({values[i], result.threshold, result.cost});
  }
  return emit(aoi::sweep_csv(rows), out_path);
}

int run_solve_mdp(const ParamFlags& flags, int v_max, double tol, int max_iter, double alpha,
                  int min_store_age, bool as_json, const std::string& out_path) {
  const auto params = flags.make();
  if (v_max < 2) throw UsageError("v-max must be >= 2");
  if (!(tol > 0.0)) throw UsageError("tol must be > 0");
  if (max_iter < 1) throw UsageError("max-iter must be >= 1");
  if (min_store_age < 1) throw UsageError("min-store-age must be >= 1");
  aoi::SolverOptions options;
  options.v_max = v_max;
  options.tol = tol;
  options.max_iter = max_iter;
  options.min_store_age = min_store_age;

  nlohmann::json j;
  j["p"] = params.p;
  j["q"] = params.q;
  j["c"] = params.c;
  j["v_max"] = v_max;
  const auto describe = [](const aoi::ThresholdExtraction& e) {
    if (const auto* t = std::get_if<aoi::ThresholdPolicy>(&e)) return t->to_string();
    return "not-threshold(first violating age " + std::to_string(std::get<aoi::NotThreshold>(e).age) + ")";
  };

  aoi::SolveReport report;
  if (alpha >= 0.0) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must be in (0,1)");
    const auto solution = aoi::discounted_value_iteration(params, alpha, options);
    report = solution.report;
    const auto policy = aoi::greedy_policy(params, solution.values, min_store_age);
    j["mode"] = "discounted";
    j["alpha"] = alpha;
    j["threshold"] = describe(aoi::extract_threshold(policy));
    j["monotone_in_age"] = aoi::check_monotone_in_age(solution.values).empty();
    j["switch_inequality"] = aoi::check_switch_inequality(solution.values).empty();
    j["monotone_iterates"] = report.monotone_iterates;
  } else {
    const auto solution = aoi::relative_value_iteration(params, options);
    report = solution.report;
    j["mode"] = "average";
    j["gain"] = report.gain;
    j["threshold"] = describe(aoi::extract_threshold(solution.policy));
    j["monotone_in_age"] = aoi::check_monotone_in_age(solution.bias).empty();
  }
  j["iterations"] = report.iterations;
  j["residual"] = report.residual;
  j["converged"] = report.converged;

  std::string text;
  if (as_json) {
    text = j.dump() + "\n";
  } else {
    std::ostringstream out;
    const auto yes_no = [](bool b) { return b ? "yes" : "no"; };
    out << "mode: " << j["mode"].get<std::string>() << '\n';
    if (alpha < 0.0) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.15g", report.gain);
      out << "gain: " << buf << '\n';
    }
    out << "threshold: " << j["threshold"].get<std::string>() << '\n';
    out << "iterations: " << report.iterations << '\n';
    out << "residual: " << aoi::format_csv_number(report.residual) << '\n';
    out << "converged: " << yes_no(report.converged) << '\n';
    out << "monotone in age: " << yes_no(j["monotone_in_age"].get<bool>()) << '\n';
    if (alpha >= 0.0) {
      out << "switch inequality: " << yes_no(j["switch_inequality"].get<bool>()) << '\n';
    }
    text = out.str();
  }
  const int status = emit(text, out_path);
  if (!report.converged) {
    std::cerr << "error: no convergence after " << report.iterations << " iterations, residual "
              << report.residual << '\n';
    return kExitFailure;
  }
  return status;
}

int run_simulate(const ParamFlags& flags, const std::string& threshold, std::uint64_t horizon,
                 std::uint64_t burn_in, const std::string& seed_text, const std::string& out_path) {
  const auto params = flags.make();
  aoi::ThresholdPolicy policy = aoi::ThresholdPolicy::never();
  try {
    policy = aoi::ThresholdPolicy::parse(threshold);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (horizon < 1) throw UsageError("horizon must be >= 1");
  const auto seeds = parse_seed_list(seed_text);
  std::vector<std::future<aoi::SimStats>> futures;
  for (const auto seed : seeds) {
    aoi::SimConfig config;
    config.horizon = horizon + burn_in;
    config.burn_in = burn_in;
    config.seed = seed;
    futures.push_back(std::async(std::launch::async, [params, policy, config] {
      return aoi::simulate(params, policy, config);
    }));
  }
  std::vector<aoi::SimStats> runs;
  for (auto& f : futures) runs.push_back(f.get());
  return emit(aoi::simulation_csv(runs, params.c), out_path);
}

int run_validate(bool quick, bool verbose, const std::vector<std::string>& only) {
  namespace v = aoi::validation;
  v::AcceptanceOptions options;
  options.quick = quick;
  options.only = only;
  if (verbose) options.log = &std::cerr;
  const auto results = v::run_acceptance(options);
  for (const auto& r : results) std::cout << v::format_check(r) << '\n';

  // The storage charge can be read per stored packet (c*p per above-threshold
  // slot) or per above-threshold slot (c); the first is what the optimizer uses.
  const auto params = aoi::SystemParams::make(0.5, 0.5, 2.0);
  const auto best = aoi::find_optimal_threshold(params);
  std::printf("[INFO] storage charge at (p=0.5,q=0.5,c=2,t=%s): c*p per slot %.12g, c per slot %.12g\n",
              best.threshold.to_string().c_str(), aoi::average_cost(params, best.threshold),
              aoi::average_cost_slot_charge(params, best.threshold));

  std::vector<std::string> failed;
  for (const auto& r : results) {
    if (!r.informational && !r.passed) failed.push_back(r.id);
  }
  if (failed.empty()) {
    std::cout << "all checks passed\n";
    return kExitOk;
  }
  std::cout << "failed checks:";
  for (const auto& id : failed) std::cout << ' ' << id;
  std::cout << '\n';
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Storage thresholds for age of information over an erasure channel"};
  app.require_subcommand(1);

  ParamFlags opt_flags;
  bool opt_brute = false;
  int opt_search = aoi::kDefaultSearchLimit;
  bool opt_json = false;
  bool opt_stamp = false;
  std::string opt_out;
  auto* optimize = app.add_subcommand("optimize", "optimal storage threshold for one parameter set");
  opt_flags.add_to(optimize);
  optimize->add_flag("--brute-force", opt_brute, "exhaustive scan instead of the bracket search");
  optimize->add_option("--v-search", opt_search, "largest threshold scanned by --brute-force");
  optimize->add_flag("--json", opt_json, "JSON instead of CSV");
  optimize->add_flag("--stamp", opt_stamp, "record the current UTC time");
  optimize->add_option("--out", opt_out, "output file (default: stdout)");

  ParamFlags sweep_flags;
  std::string sweep_axis;
  std::vector<double> sweep_values;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "optimal threshold along one parameter axis");
  sweep->add_option("--axis", sweep_axis, "p, q or c")->required();
  sweep->add_option("--values", sweep_values, "strictly increasing comma-separated values")
      ->delimiter(',');
  sweep->add_option("--p", sweep_flags.p, "fixed p (ignored when axis is p)");
  sweep->add_option("--q", sweep_flags.q, "fixed q (ignored when axis is q)");
  sweep->add_option("--c", sweep_flags.c, "fixed c (ignored when axis is c)");
  sweep->add_option("--out", sweep_out, "output CSV (default: stdout)");

  ParamFlags mdp_flags;
  int mdp_vmax = 2000;
  double mdp_tol = 1e-10;
  int mdp_iter = 1'000'000;
  double mdp_alpha = -1.0;
  int mdp_min_age = 2;
  bool mdp_json = false;
  std::string mdp_out;
  auto* solve = app.add_subcommand("solve-mdp", "solve the truncated MDP by value iteration");
  mdp_flags.add_to(solve);
  solve->add_option("--v-max", mdp_vmax, "age truncation");
  solve->add_option("--tol", mdp_tol, "stopping tolerance");
  solve->add_option("--max-iter", mdp_iter, "iteration limit");
  solve->add_option("--alpha", mdp_alpha, "discount factor; runs discounted iteration");
  solve->add_option("--min-store-age", mdp_min_age, "smallest age at which storing is allowed");
  solve->add_flag("--json", mdp_json, "JSON instead of text");
  solve->add_option("--out", mdp_out, "output file (default: stdout)");

  ParamFlags sim_flags;
  std::string sim_threshold;
  std::uint64_t sim_horizon = 1'000'000;
  std::uint64_t sim_burn = 10'000;
  std::string sim_seeds = "1-5";
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo run of a threshold policy");
  sim_flags.add_to(sim);
  sim->add_option("--threshold", sim_threshold, "threshold >= 2, or 'inf'/'never'")->required();
  sim->add_option("--horizon", sim_horizon, "counted slots per seed");
  sim->add_option("--burn-in", sim_burn, "discarded initial slots");
  sim->add_option("--seeds", sim_seeds, "seed list, e.g. 1-5 or 1,2,3");
  sim->add_option("--out", sim_out, "output CSV (default: stdout)");

  bool val_quick = false;
  bool val_verbose = false;
  auto* validate = app.add_subcommand("validate", "run the acceptance checks");
  validate->add_flag("--quick", val_quick, "reduced grids and shorter simulations");
  validate->add_flag("--verbose", val_verbose, "per-point progress on stderr");
  std::vector<std::string> val_only;
  validate->add_option("--only", val_only, "comma-separated check ids (default: all)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*optimize) return run_optimize(opt_flags, opt_brute, opt_search, opt_json, opt_stamp, opt_out);
    if (*sweep) return run_sweep(sweep_axis, sweep_values, sweep_flags, sweep_out);
    if (*solve) {
      return run_solve_mdp(mdp_flags, mdp_vmax, mdp_tol, mdp_iter, mdp_alpha, mdp_min_age, mdp_json,
                           mdp_out);
    }
    if (*sim) return run_simulate(sim_flags, sim_threshold, sim_horizon, sim_burn, sim_seeds, sim_out);
    if (*validate) return run_validate(val_quick, val_verbose, val_only);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
