// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "agesampler/cli.hpp"
#include "agesampler/cmdp.hpp"
#include "agesampler/errors.hpp"
#include "agesampler/penalty.hpp"
#include "agesampler/sim.hpp"
#include "test_util.hpp"

using namespace agesampler;
using agesampler::testing::random_chain;
using agesampler::testing::two_state;
namespace fs = std::filesystem;

namespace {

// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    std::ostringstream msg;
    msg.precision(10);
    msg << what << ": " << actual << " vs " << expected << " (tol " << tol << ")";
    expect(std::abs(actual - expected) <= tol, msg.str());
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }

  [[nodiscard]] bool failed() const { return failed_; }
  [[nodiscard]] const std::vector<std::string>& failures() const { return failures_; }
  [[nodiscard]] const std::string& notes() const { return notes_; }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

void example_one(Check& c) {
  const auto chain = two_state(0.1, 0.6);
  const double nu = clairvoyant_frequency(chain);
  const auto sol = solve_p1(chain, 7, nu);
  c.near(sol.lp.objective_value, 1.416, 0.002, "LP objective");
  const bool paper_policy = std::abs(sol.policy.prob(0, 6) - 0.465) <= 0.005 &&
                            std::abs(sol.policy.prob(0, 7) - 0.535) <= 0.005 &&
                            std::abs(sol.policy.prob(1, 2) - 1.0) <= 0.005;
  const bool alternate = sol.optimal_vertices > 1;
  c.expect(paper_policy || alternate, "policy P(6|1)=" + fmt(sol.policy.prob(0, 6)) +
                                          " P(7|1)=" + fmt(sol.policy.prob(0, 7)) +
                                          " P(2|2)=" + fmt(sol.policy.prob(1, 2)));
  c.note("objective=" + fmt(sol.lp.objective_value) + " P(6|1)=" + fmt(sol.policy.prob(0, 6), 4) +
         " P(7|1)=" + fmt(sol.policy.prob(0, 7), 4) + " P(2|2)=" + fmt(sol.policy.prob(1, 2), 4));
}

void example_two(Check& c) {
  const auto chain = two_state(0.9, 0.9);
  const auto sol = solve_p2(chain, 4, 1.0);
  c.near(sol.report.avg_sampling_frequency, 0.476, 0.002, "frequency");
  for (int j = 0; j < 2; ++j) {
    c.near(sol.policy.prob(j, 2), 0.899, 0.005, "P(2|" + std::to_string(j + 1) + ")");
    c.near(sol.policy.prob(j, 3), 0.101, 0.005, "P(3|" + std::to_string(j + 1) + ")");
  }
  const int tau = optimal_periodic_p2(1.0, 4);
  c.expect(tau == 2, "periodic interval " + std::to_string(tau));
  c.expect(1.0 / tau == 0.5, "periodic frequency");
  const auto periodic = evaluate_policy(chain, MarkovPolicy::periodic(2, 4, tau), 4);
  c.near(periodic.avg_sampling_frequency, 0.5, 1e-12, "evaluated periodic frequency");
  c.note("frequency=" + fmt(sol.report.avg_sampling_frequency) +
         " P(2|j)=" + fmt(sol.policy.prob(0, 2), 4) + "/" + fmt(sol.policy.prob(1, 2), 4) +
         " P(3|j)=" + fmt(sol.policy.prob(0, 3), 4) + "/" + fmt(sol.policy.prob(1, 3), 4));
}

void clairvoyant_frequency_check(Check& c) {
  std::mt19937_64 gen(20200101);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 4;
    const auto chain = random_chain(n, gen, 0.0);
    const double nu = clairvoyant_frequency(chain);
    const auto path = sample_path(chain, 0, 1'000'000, 1000 + static_cast<std::uint64_t>(k));
    const double empirical = static_cast<double>(path.transition_instants.size()) / 1e6;
    c.near(empirical, nu, 0.01, "chain " + std::to_string(k) + " empirical change rate");
    worst = std::max(worst, std::abs(empirical - nu));
    if (n == 2) {
      const double p12 = chain.prob(0, 1);
      const double p21 = chain.prob(1, 0);
      c.near(nu, 2 * p12 * p21 / (p12 + p21), 1e-12, "two-state closed form");
    }
  }
  c.note("max |empirical - nu| = " + fmt(worst, 3));
}

void cost_identity(Check& c) {
  double worst = 0.0;
  for (int k = 0; k <= 9; ++k) {
    const double p = 0.1 * k;
    for (int tau = 1; tau <= 12; ++tau) {
      const double diff = std::abs(age_cost(p, tau) - age_cost_closed_form(p, tau));
      worst = std::max(worst, diff);
      c.expect(diff <= 1e-12, "closed form mismatch at p=" + fmt(p) + " tau=" + std::to_string(tau));
    }
  }
  // Sojourn oracle: penalty of one interval is max(0, tau - first exit time).
  std::mt19937_64 gen(4242);
  std::string mc;
  for (auto [p, tau] : {std::pair{0.9, 6}, std::pair{0.5, 4}, std::pair{0.3, 9}}) {
    std::geometric_distribution<int> stays(1.0 - p);
    double sum = 0.0;
    const int trials = 1'000'000;
    for (int i = 0; i < trials; ++i) sum += std::max(0, tau - (1 + stays(gen)));
    const double expected = age_cost(p, tau);
    c.near(sum / trials, expected, 0.01 * expected, "Monte Carlo p=" + fmt(p) + " tau=" + std::to_string(tau));
    mc += " " + fmt(sum / trials, 5) + "/" + fmt(expected, 5);
  }
  c.note("max closed-form gap " + fmt(worst, 3) + "; MC/exact" + mc);
}

void triangle(Check& c) {
  std::mt19937_64 gen(555);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_eval = 0.0;
  double worst_sim = 0.0;
  for (int k = 0; k < 10; ++k) {
    const int n = 2 + k % 3;
    const int m_max = 4 + k % 5;
    const auto chain = random_chain(n, gen, 0.05);
    const bool p1 = k % 2 == 0;
    const double value = p1 ? 1.0 / (0.4 * m_max + 0.5 * m_max * u(gen)) : 0.5 + 1.5 * u(gen);
    const auto sol = p1 ? solve_p1(chain, m_max, value) : solve_p2(chain, m_max, value);
    const double analytic =
        p1 ? sol.report.avg_age_penalty : sol.report.avg_sampling_interval;
    const auto sim = run_policy(chain, sol.policy, 1'000'000, 9000 + static_cast<std::uint64_t>(k));
    const double empirical = p1 ? sim.empirical_age_penalty : sim.empirical_interval;
    const std::string tag = "instance " + std::to_string(k) + (p1 ? " (P1)" : " (P2)");
    c.near(analytic, sol.lp.objective_value, 1e-6, tag + " evaluate vs LP");
    c.near(empirical, analytic, 0.01 * std::abs(analytic), tag + " simulation vs analytic");
    worst_eval = std::max(worst_eval, std::abs(analytic - sol.lp.objective_value));
    worst_sim = std::max(worst_sim, std::abs(empirical - analytic) / std::abs(analytic));
  }
  c.note("max |eval-LP| = " + fmt(worst_eval, 3) + ", max rel |sim-eval| = " + fmt(worst_sim, 3));
}

void dominance(Check& c) {
  int compared = 0;
  int infeasible = 0;
  for (int m_max : {5, 8}) {
    for (int a = 1; a <= 9; ++a) {
      for (int b = 1; b <= 9; ++b) {
        const auto chain = two_state(0.1 * a, 0.1 * b);
        const std::string at = "M=" + std::to_string(m_max) + " p12=" + fmt(0.1 * a) +
                               " p21=" + fmt(0.1 * b);
        const double nu = clairvoyant_frequency(chain);
        const auto det1 = brute_force_deterministic(chain, m_max, ProblemSpec::p1(nu));
        try {
          const auto p1 = solve_p1(chain, m_max, nu);
          if (det1)
            c.expect(p1.report.avg_age_penalty <= det1->report.avg_age_penalty + 1e-9,
                     at + " P1 worse than deterministic");
          try {
            const int tau = optimal_periodic_p1(nu, m_max);
            const auto periodic =
                evaluate_policy(chain, MarkovPolicy::periodic(2, m_max, tau), m_max);
            c.expect(p1.report.avg_age_penalty <= periodic.avg_age_penalty + 1e-9,
                     at + " P1 worse than periodic");
          } catch (const PeriodExceedsM&) {
          }
          ++compared;
        } catch (const Infeasible&) {
          ++infeasible;
          c.expect(!det1.has_value(), at + " LP infeasible but a deterministic map is feasible");
        }

        const auto p2 = solve_p2(chain, m_max, 1.0);
        const auto det2 = brute_force_deterministic(chain, m_max, ProblemSpec::p2(1.0));
        c.expect(det2.has_value(), at + " no deterministic P2 policy");
        if (det2)
          c.expect(p2.report.avg_sampling_interval >= det2->report.avg_sampling_interval - 1e-9,
                   at + " P2 worse than deterministic");
        const int tau = optimal_periodic_p2(1.0, m_max);
        c.expect(p2.report.avg_sampling_frequency <= 1.0 / tau + 1e-12,
                 at + " P2 frequency above periodic");
        ++compared;
      }
    }
  }
  c.note(std::to_string(compared) + " comparisons, " + std::to_string(infeasible) +
         " P1 points infeasible (1/nu > M) and confirmed by enumeration");
}

void figure_six(Check& c) {
  const auto slow = two_state(0.1, 0.1);
  const auto fast = two_state(0.9, 0.9);
  const double r_slow = solve_p2(slow, 32, 1.0).report.avg_sampling_frequency / clairvoyant_frequency(slow);
  const double r_fast = solve_p2(fast, 32, 1.0).report.avg_sampling_frequency / clairvoyant_frequency(fast);
  c.expect(r_slow > 1.0, "ratio at 0.1/0.1 = " + fmt(r_slow));
  c.near(r_fast, 0.529, 0.005, "ratio at 0.9/0.9");
  c.note("ratio(0.1,0.1)=" + fmt(r_slow, 4) + " ratio(0.9,0.9)=" + fmt(r_fast, 4));
}

void feasibility_edges(Check& c, const fs::path& dir) {
  std::ofstream(dir / "chain.json") << R"({"p": [[0.9, 0.1], [0.6, 0.4]]})";
  cli::RunConfig cfg;
  cfg.chain_path = (dir / "chain.json").string();
  cfg.m_max = 7;
  cfg.problem = cli::ProblemKind::P1;
  cfg.nu = 1.0 / 7.5;
  cfg.output_path = (dir / "infeasible.json").string();
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cmd_solve(cfg, out, err);
  c.expect(code == cli::kInfeasible, "P1 with 1/nu > M exit code " + std::to_string(code));

  const auto sol = solve_p2(two_state(0.1, 0.6), 7, 0.0);
  c.near(sol.report.avg_age_penalty, 0.0, 1e-12, "P2 d=0 penalty");
  c.near(sol.report.avg_sampling_frequency, 1.0, 1e-9, "P2 d=0 frequency");
  for (int j = 0; j < 2; ++j) c.near(sol.policy.prob(j, 1), 1.0, 1e-9, "P2 d=0 P(1|j)");
  c.note("infeasible exit=" + std::to_string(code) +
         " d=0 frequency=" + fmt(sol.report.avg_sampling_frequency));
}

void determinism(Check& c, const fs::path& dir) {
  std::ofstream(dir / "chain.json") << R"({"p": [[0.1, 0.9], [0.9, 0.1]]})";
  std::ostringstream out;
  std::ostringstream err;
  for (const char* run : {"a", "b"}) {
    cli::RunConfig cfg;
    cfg.chain_path = (dir / "chain.json").string();
    cfg.m_max = 4;
    cfg.problem = cli::ProblemKind::P2;
    cfg.d = 1.0;
    cfg.output_path = (dir / (std::string("solve_") + run + ".json")).string();
    c.expect(cli::cmd_solve(cfg, out, err) == cli::kSuccess, "solve failed");
    cfg.seed = 2024;
    cfg.k_samples = 200'000;
    cfg.output_path = (dir / (std::string("sim_") + run + ".json")).string();
    c.expect(cli::cmd_simulate(cfg, out, err) == cli::kSuccess, "simulate failed");
  }
  const auto sa = slurp(dir / "solve_a.json");
  const auto ma = slurp(dir / "sim_a.json");
  c.expect(!sa.empty() && sa == slurp(dir / "solve_b.json"), "solve reports differ");
  c.expect(!ma.empty() && ma == slurp(dir / "sim_b.json"), "simulate reports differ");
  c.note("solve " + std::to_string(sa.size()) + " bytes, simulate " + std::to_string(ma.size()) +
         " bytes, identical");
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / "agesampler_acceptance";
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"AC1 Example 1 (P1, clairvoyant nu, M=7)", example_one},
      {"AC2 Example 2 (P2, d=1, M=4)", example_two},
      {"AC3 clairvoyant frequency vs simulation and closed form", clairvoyant_frequency_check},
      {"AC4 age-cost closed form and Monte Carlo", cost_identity},
      {"AC5 LP / analytic / simulation agreement", triangle},
      {"AC6 dominance over deterministic and periodic policies", dominance},
      {"AC7 frequency ratio to clairvoyant at d=1", figure_six},
      {"AC8 feasibility edges", [&](Check& c) { feasibility_edges(c, dir); }},
      {"AC9 report determinism", [&](Check& c) { determinism(c, dir); }},
  };

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check check;
    try {
      run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (check.failed() ? "[FAIL] " : "[PASS] ") << name;
    if (!check.notes().empty()) std::cout << " -- " << check.notes();
    std::cout << '\n';
    for (const auto& f : check.failures()) std::cout << "         " << f << '\n';
    failed += check.failed() ? 1 : 0;
  }
  fs::remove_all(dir);
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
