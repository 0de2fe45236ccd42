// Command-line front end: info, solve, simulate, sweep.

#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "agesampler/cli.hpp"

namespace cli = agesampler::cli;

namespace {

struct ProblemFlags {
  std::optional<double> nu;
  bool clairvoyant = false;
  std::optional<double> age_limit;
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& flags) {
  auto* nu = cmd->add_option("--nu", flags.nu, "P1: upper bound on the average sampling frequency");
  auto* cv = cmd->add_flag("--clairvoyant", flags.clairvoyant,
                           "P1 with nu set to the clairvoyant sampler's frequency");
  auto* d = cmd->add_option("--age-limit", flags.age_limit, "P2: upper bound on the average age penalty");
  nu->excludes(cv)->excludes(d);
  cv->excludes(d);
}

void apply_problem(const ProblemFlags& flags, cli::RunConfig& config) {
  if (flags.nu) {
    config.problem = cli::ProblemKind::P1;
    config.nu = *flags.nu;
  } else if (flags.clairvoyant) {
    config.problem = cli::ProblemKind::P1Clairvoyant;
  } else if (flags.age_limit) {
    config.problem = cli::ProblemKind::P2;
    config.d = *flags.age_limit;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal sampling policies for detecting state transitions of a Markov chain"};
  app.require_subcommand(1);

  cli::RunConfig config;
  ProblemFlags problem;
  std::string tie_break = "centroid";
  std::string spec_path;
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());

  auto* info = app.add_subcommand("info", "Stationary distribution and clairvoyant frequency");
  info->add_option("--chain", config.chain_path, "Chain JSON {\"p\": [[...]]}")->required();
  info->add_option("--out", config.output_path, "Output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Solve P1 or P2 and report the optimal policy");
  solve->add_option("--chain", config.chain_path, "Chain JSON {\"p\": [[...]]}")->required();
  solve->add_option("--m-max", config.m_max, "Maximum inter-sampling time in slots");
  add_problem_flags(solve, problem);
  solve->add_option("--tie-break", tie_break, "Choice among multiple optima")
      ->check(CLI::IsMember({"centroid", "vertex"}));
  solve->add_option("--out", config.output_path, "Output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of a policy");
  simulate->add_option("--chain", config.chain_path, "Chain JSON (optional with a solve report)");
  simulate->add_option("--policy", config.policy_path,
                       "Policy JSON {\"dist\": [[...]]} or a solve report");
  simulate->add_option("--m-max", config.m_max, "Maximum inter-sampling time when solving");
  add_problem_flags(simulate, problem);
  simulate->add_option("--tie-break", tie_break, "Choice among multiple optima")
      ->check(CLI::IsMember({"centroid", "vertex"}));
  simulate->add_option("--seed", config.seed, "Random seed");
  simulate->add_option("--samples", config.k_samples, "Sampling decisions to average over");
  simulate->add_option("--warmup", config.warmup, "Sampling decisions discarded first");
  simulate->add_option("--out", config.output_path, "Output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over two-state chains to CSV");
  sweep->add_option("--spec", spec_path, "Sweep specification JSON")->required();
  sweep->add_option("--out", config.output_path, "Output CSV (default stdout)");
  sweep->add_option("--workers", workers, "Parallel worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  apply_problem(problem, config);
  config.tie_break =
      tie_break == "vertex" ? agesampler::TieBreak::FirstVertex : agesampler::TieBreak::FaceCentroid;

  if (info->parsed()) return cli::cmd_info(config, std::cout, std::cerr);
  if (solve->parsed()) return cli::cmd_solve(config, std::cout, std::cerr);
  if (simulate->parsed()) return cli::cmd_simulate(config, std::cout, std::cerr);
  return cli::cmd_sweep(spec_path, config.output_path, workers, std::cout, std::cerr);
}
