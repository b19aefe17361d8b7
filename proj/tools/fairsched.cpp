// fairsched: static progressive-filling tables, randomized trials and online simulation.
//
// Exit codes: 0 success, 1 runtime error, 2 input error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "fairsched/fairsched.hpp"

namespace {

using namespace fairsched;

constexpr int exit_runtime = 1;
constexpr int exit_input = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::string scheduler = "drf";
  std::string policy = "rrr";
  bool policy_given = false;
  std::string tie_break = "lowest";
  std::string mode = "characterized";
  std::string release = "pool";
  std::string share_level = "role";
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  unsigned threads = 1;
  double sample_period = 1.0;
  std::string csv;
  std::string out = ".";
};

SchedulerConfig scheduler_config(const Options& o) {
  SchedulerConfig c;
  if (o.scheduler == "bfdrf") {
    // Shorthand for DRF with best-fit server selection.
    if (o.policy_given && o.policy != "bestfit")
      throw InputError("bfdrf implies --policy bestfit, got " + o.policy);
    c.criterion = CriterionKind::drf;
    c.policy = ServerPolicy::best_fit;
    c.tie_break = o.tie_break == "random" ? TieBreak::seeded_random : TieBreak::lowest_index;
    c.seed = o.seed;
    return c;
  }
  auto crit = parse_criterion(o.scheduler);
  if (!crit) throw InputError("unknown scheduler '" + o.scheduler + "'");
  auto pol = parse_policy(o.policy);
  if (!pol) throw InputError("unknown policy '" + o.policy + "'");
  c.criterion = *crit;
  c.policy = *pol;
  c.tie_break = o.tie_break == "random" ? TieBreak::seeded_random : TieBreak::lowest_index;
  c.seed = o.seed;
  if (!is_valid_combination(c.criterion, c.policy))
    throw InputError("scheduler " + o.scheduler + " cannot be used with policy " + o.policy +
                     " (bestfit pairs with drf/tsf, jointmin with psdsf/rpsdsf)");
  return c;
}

ScenarioFile load_or_fail(const std::string& path) {
  try {
    return load_scenario(path);
  } catch (const scenario_error& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

std::string label_for(const SchedulerConfig& c) {
  return std::string(to_string(c.criterion)) + "/" + std::string(to_string(c.policy));
}

int cmd_static(const Options& o) {
  auto file = load_or_fail(o.scenario);
  if (file.scenario.frameworks.empty()) throw InputError(o.scenario + ": no frameworks defined");
  auto cfg = scheduler_config(o);
  auto result = progressive_fill(file.scenario, cfg);
  render_fill(std::cout, label_for(cfg), result);
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    if (!f) throw std::runtime_error("cannot write " + o.csv);
    write_steps_csv(f, result);
  }
  return 0;
}

int cmd_trials(const Options& o) {
  auto file = load_or_fail(o.scenario);
  if (file.scenario.frameworks.empty()) throw InputError(o.scenario + ": no frameworks defined");
  if (o.trials < 1) throw InputError("--trials must be at least 1");
  auto cfg = scheduler_config(o);
  auto summary = run_trials(file.scenario, cfg, o.trials, o.seed, o.threads);
  render_summary(std::cout, label_for(cfg), summary);
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    if (!f) throw std::runtime_error("cannot write " + o.csv);
    write_summary_csv(f, summary);
  }
  return 0;
}

int cmd_online(const Options& o) {
  auto presets = builtin_scenarios();
  OnlineScenario sc;
  if (auto it = presets.find(o.scenario); it != presets.end()) {
    sc = it->second;
  } else if (std::filesystem::exists(o.scenario)) {
    auto file = load_or_fail(o.scenario);
    if (!file.online) throw InputError(o.scenario + ": no 'online' section");
    sc = *file.online;
  } else {
    std::string names;
    for (const auto& [name, _] : presets) names += " " + name;
    throw InputError("unknown preset '" + o.scenario + "'; available:" + names);
  }

  SimConfig cfg;
  cfg.scheduler = scheduler_config(o);
  if (o.mode == "oblivious") cfg.mode = AllocationMode::oblivious;
  else if (o.mode == "characterized") cfg.mode = AllocationMode::characterized;
  else throw InputError("unknown mode '" + o.mode + "'");
  if (o.release == "pool") cfg.release = ReleaseMode::pool;
  else if (o.release == "sequential") cfg.release = ReleaseMode::sequential;
  else throw InputError("unknown release '" + o.release + "'");
  cfg.share_level = o.share_level == "job" ? ShareLevel::job : ShareLevel::role;
  cfg.seed = o.seed;
  cfg.sample_period = o.sample_period;
  try {
    cfg.validate();
  } catch (const config_error& e) {
    throw InputError(e.what());
  }

  auto trace = simulate(sc, cfg);
  std::filesystem::create_directories(o.out);
  const auto util_path = std::filesystem::path(o.out) / "utilization.csv";
  const auto done_path = std::filesystem::path(o.out) / "completions.csv";
  {
    std::ofstream f(util_path);
    if (!f) throw std::runtime_error("cannot write " + util_path.string());
    write_utilization_csv(f, trace);
  }
  {
    std::ofstream f(done_path);
    if (!f) throw std::runtime_error("cannot write " + done_path.string());
    write_completions_csv(f, trace);
  }
  std::cout << o.scenario << ' ' << to_string(cfg.mode) << ' ' << label_for(cfg.scheduler) << ' '
            << to_string(cfg.release) << " share-level " << to_string(cfg.share_level) << " seed "
            << o.seed << '\n';
  render_trace_summary(std::cout, trace);
  std::cout << "wrote " << util_path.string() << " and " << done_path.string() << '\n';
  return 0;
}

int cmd_presets() {
  for (const auto& [name, sc] : builtin_scenarios()) {
    auto cap = sc.total_capacity();
    std::cout << name << ": " << sc.servers.size() << " servers, capacity " << cap.to_string()
              << ", " << sc.total_jobs() << " jobs";
    for (const auto& r : sc.roles)
      std::cout << "; " << r.name << " demand " << r.executor_demand.to_string() << " x"
                << r.queues << " queues x" << r.jobs_per_queue << " jobs";
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-resource fair scheduling: progressive filling and online simulation"};
  app.require_subcommand(1);
  Options o;

  auto add_scheduler = [&](CLI::App* c) {
    c->add_option("--scheduler", o.scheduler, "Fairness criterion")
        ->check(CLI::IsMember({"drf", "tsf", "psdsf", "rpsdsf", "bfdrf"}));
    c->add_option("--policy", o.policy, "Server selection")
        ->check(CLI::IsMember({"rrr", "bestfit", "jointmin"}));
    c->add_option("--tie-break", o.tie_break, "Tie rule among equal scores")
        ->check(CLI::IsMember({"lowest", "random"}));
    c->add_option("--seed", o.seed, "RNG seed");
  };

  auto* st = app.add_subcommand("static", "Progressive fill of a scenario file");
  st->add_option("scenario", o.scenario, "Scenario file")->required();
  add_scheduler(st);
  st->add_option("--csv", o.csv, "Write the placement log as CSV");

  auto* tr = app.add_subcommand("trials", "Repeated randomized fills with statistics");
  tr->add_option("scenario", o.scenario, "Scenario file")->required();
  add_scheduler(tr);
  tr->add_option("--trials", o.trials, "Number of trials");
  tr->add_option("--threads", o.threads, "Worker threads (results do not depend on it)");
  tr->add_option("--csv", o.csv, "Write the summary as CSV");

  auto* on = app.add_subcommand("online", "Online offer-cycle simulation");
  on->add_option("scenario", o.scenario, "Preset name or scenario file with an online section")
      ->required();
  add_scheduler(on);
  on->add_option("--mode", o.mode, "Allocation mode")
      ->check(CLI::IsMember({"oblivious", "characterized"}));
  on->add_option("--release", o.release, "Agent release")
      ->check(CLI::IsMember({"pool", "sequential"}));
  on->add_option("--share-level", o.share_level,
                 "Score roles (then the role's neediest job) or every job separately")
      ->check(CLI::IsMember({"role", "job"}));
  on->add_option("--sample-period", o.sample_period, "Utilization sampling period");
  on->add_option("--out", o.out, "Output directory for CSV traces");

  auto* pr = app.add_subcommand("presets", "List built-in online scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  for (auto* c : {st, tr, on})
    if (c->parsed()) o.policy_given = c->count("--policy") > 0;

  try {
    if (st->parsed()) return cmd_static(o);
    if (tr->parsed()) return cmd_trials(o);
    if (on->parsed()) return cmd_online(o);
    if (pr->parsed()) return cmd_presets();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_input;
}
