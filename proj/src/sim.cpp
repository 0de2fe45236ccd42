#include "agesampler/sim.hpp"

#include <cassert>
#include <cmath>

#include "agesampler/errors.hpp"
#include "agesampler/rng.hpp"

namespace agesampler {

namespace {

constexpr std::uint64_t kSourceStream = 1;
constexpr std::uint64_t kPolicyStream = 2;

// Slack on constraint checks so ties with the LP optimum stay feasible.
constexpr double kConstraintSlack = 1e-9;

}  // namespace

SimReport run_policy(const MarkovChain& chain, const MarkovPolicy& policy,
                     std::int64_t k_samples, std::uint64_t seed, const SimOptions& options) {
  if (k_samples < 1) throw InvalidArgument("run_policy: k_samples must be >= 1");
  if (options.warmup < 0) throw InvalidArgument("run_policy: warmup must be >= 0");
  if (options.x0 < 0 || options.x0 >= chain.size())
    throw InvalidArgument("run_policy: x0 out of range");
  if (policy.num_states() != chain.size())
    throw InvalidArgument("run_policy: policy and chain disagree on the number of states");
  policy.validate();

  const Rng base(seed);
  Rng source = base.split(kSourceStream);
  Rng decide = base.split(kPolicyStream);
  const Matrix& p = chain.transition();
  const Matrix& dist = policy.dist;
  const auto n = static_cast<std::size_t>(chain.size());
  const auto m = static_cast<std::size_t>(policy.m_max());

  int x = options.x0;
  double penalty_sum = 0.0;
  std::int64_t interval_sum = 0;
  const std::int64_t total = options.warmup + k_samples;
  for (std::int64_t k = 0; k < total; ++k) {
    const int observed = x;
    const int tau = 1 + static_cast<int>(decide.categorical({dist.row(observed).data(), m}));
    // Only the first change of state after the previous sample matters.
    int first_change = 0;
    for (int s = 1; s <= tau; ++s) {
      const int next = static_cast<int>(source.categorical({p.row(x).data(), n}));
      if (first_change == 0 && next != x) first_change = s;
      x = next;
    }
    const int age = first_change == 0 ? 0 : tau - first_change;
    assert(age >= 0 && age <= tau - 1);
    if (k >= options.warmup) {
      penalty_sum += age;
      interval_sum += tau;
    }
  }

  SimReport report;
  report.n_samples = k_samples;
  report.seed = seed;
  report.empirical_age_penalty = penalty_sum / static_cast<double>(k_samples);
  report.empirical_interval =
      static_cast<double>(interval_sum) / static_cast<double>(k_samples);
  report.empirical_frequency = 1.0 / report.empirical_interval;
  return report;
}

std::optional<DeterministicOptimum> brute_force_deterministic(const MarkovChain& chain,
                                                              int m_max,
                                                              const ProblemSpec& problem) {
  if (m_max < 1) throw InvalidArgument("m_max must be >= 1");
  const int n = chain.size();
  double count = std::pow(static_cast<double>(m_max), n);
  if (count > static_cast<double>(kMaxEnumeration))
    throw TooLarge("M^N = " + std::to_string(static_cast<long long>(count)) +
                   " deterministic policies exceeds the enumeration limit");

  const TransitionKernel q(chain, m_max);
  const CostTable costs(chain, m_max);
  std::optional<DeterministicOptimum> best;
  std::vector<int> taus(static_cast<std::size_t>(n), 1);
  while (true) {
    const MarkovPolicy policy = MarkovPolicy::deterministic(taus, m_max);
    const Matrix induced = induced_chain(q, policy);
    if (detail::closed_class_count(induced) == 1) {
      EvalReport r;
      r.induced_stationary = detail::solve_stationary(induced);
      r.avg_age_penalty = 0.0;
      r.avg_sampling_interval = 0.0;
      for (int j = 0; j < n; ++j) {
        const int tau = taus[static_cast<std::size_t>(j)];
        r.avg_age_penalty += r.induced_stationary(j) * costs.at(j, tau);
        r.avg_sampling_interval += r.induced_stationary(j) * tau;
      }
      r.avg_sampling_frequency = 1.0 / r.avg_sampling_interval;

      bool feasible = false;
      bool better = false;
      if (problem.kind == ProblemSpec::Kind::P1) {
        feasible = r.avg_sampling_interval >= 1.0 / problem.value - kConstraintSlack;
        better = !best || r.avg_age_penalty < best->report.avg_age_penalty;
      } else {
        feasible = r.avg_age_penalty <= problem.value + kConstraintSlack;
        better = !best || r.avg_sampling_interval > best->report.avg_sampling_interval;
      }
      if (feasible && better) best = DeterministicOptimum{taus, std::move(r)};
    }

    // Odometer increment over {1..M}^N.
    int pos = 0;
    while (pos < n && taus[static_cast<std::size_t>(pos)] == m_max) {
      taus[static_cast<std::size_t>(pos)] = 1;
      ++pos;
    }
    if (pos == n) break;
    ++taus[static_cast<std::size_t>(pos)];
  }
  return best;
}

}  // namespace agesampler
