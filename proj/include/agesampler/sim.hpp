#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agesampler/cmdp.hpp"
#include "agesampler/dtmc.hpp"

namespace agesampler {

struct SimReport {
  std::int64_t n_samples = 0;
  double empirical_age_penalty = 0.0;
  double empirical_interval = 0.0;
  double empirical_frequency = 0.0;
  std::uint64_t seed = 0;
};

struct SimOptions {
  /// Sampling decisions discarded before averaging starts.
  std::int64_t warmup = 1000;
  /// Source state at slot 0 (also the first observed state).
  int x0 = 0;
};

/// Runs `policy` against a simulated source for `k_samples` sampling decisions
/// after warm-up, measuring each sample's age penalty
///
///   A_k = max(0, G_k - first slot after G_{k-1} at which the state changed).
///
/// The source and the policy draw from separate streams split from `seed`, so
/// changing the policy leaves the source path unchanged.
SimReport run_policy(const MarkovChain& chain, const MarkovPolicy& policy,
                     std::int64_t k_samples, std::uint64_t seed, const SimOptions& options = {});

/// Problem selector for the exhaustive search.
struct ProblemSpec {
  enum class Kind { P1, P2 };
  Kind kind;
  /// nu for P1, d for P2.
  double value;

  static ProblemSpec p1(double nu) { return {Kind::P1, nu}; }
  static ProblemSpec p2(double d) { return {Kind::P2, d}; }
};

struct DeterministicOptimum {
  /// Interval chosen in each state (1-based).
  std::vector<int> taus;
  EvalReport report;
};

/// Upper limit on M^N for brute_force_deterministic.
inline constexpr std::int64_t kMaxEnumeration = 1'000'000;

/// Best deterministic stationary policy by enumerating every map j -> tau and
/// evaluating each analytically. Returns nullopt when no map satisfies the
/// constraint. Maps whose observed-state chain has several closed classes are
/// skipped. Throws TooLarge if M^N exceeds kMaxEnumeration.
std::optional<DeterministicOptimum> brute_force_deterministic(const MarkovChain& chain,
                                                              int m_max,
                                                              const ProblemSpec& problem);

}  // namespace agesampler
