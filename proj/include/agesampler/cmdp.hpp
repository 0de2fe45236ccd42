#pragma once

#include <vector>

#include "agesampler/dtmc.hpp"
#include "agesampler/lpsolver.hpp"
#include "agesampler/penalty.hpp"

namespace agesampler {

/// q(j, tau, i) = P(X_tau = i | X_0 = j): the observed-state kernel when the
/// next sample is taken tau slots after observing j.
class TransitionKernel {
 public:
  TransitionKernel(const MarkovChain& chain, int m_max);

  [[nodiscard]] int m_max() const { return static_cast<int>(powers_.size()); }
  [[nodiscard]] double at(int j, int tau, int i) const { return powers_[tau - 1](j, i); }
  /// P^tau.
  [[nodiscard]] const Matrix& power(int tau) const { return powers_[tau - 1]; }

 private:
  std::vector<Matrix> powers_;
};

inline TransitionKernel kernel(const MarkovChain& chain, int m_max) { return {chain, m_max}; }

/// LP decision variable for (state j, interval tau).
inline int variable_index(int j, int tau, int m_max) { return j * m_max + (tau - 1); }

/// Steady-state probabilities z[j][tau] of observing state j and choosing
/// interval tau.
struct OccupationMeasure {
  Matrix z;  // N x M, column tau-1

  static OccupationMeasure from_lp(const lp::Vector& x, int num_states, int m_max);
  [[nodiscard]] double at(int j, int tau) const { return z(j, tau - 1); }
  [[nodiscard]] lp::Vector flatten() const;
};

/// Randomized stationary policy: dist[j][tau] = P(next interval = tau | observed j).
struct MarkovPolicy {
  Matrix dist;  // N x M, column tau-1
  /// Rows that carried no occupation mass and were filled with the default
  /// action (always wait M slots).
  std::vector<bool> defaulted;

  [[nodiscard]] int num_states() const { return static_cast<int>(dist.rows()); }
  [[nodiscard]] int m_max() const { return static_cast<int>(dist.cols()); }
  [[nodiscard]] double prob(int j, int tau) const { return dist(j, tau - 1); }
  [[nodiscard]] bool any_defaulted() const;

  /// Throws InvalidArgument unless every row is a distribution (1e-10).
  void validate() const;

  /// Constant interval tau in every state.
  static MarkovPolicy periodic(int num_states, int m_max, int tau);
  /// Deterministic map state -> interval (1-based intervals).
  static MarkovPolicy deterministic(const std::vector<int>& taus, int m_max);
};

struct EvalReport {
  double avg_age_penalty = 0.0;
  double avg_sampling_interval = 1.0;
  double avg_sampling_frequency = 1.0;
  Vector induced_stationary;
};

/// Minimize average age penalty subject to average interval >= 1/nu.
/// Throws Infeasible when 1/nu exceeds m_max.
lp::LinearProgram build_p1(const MarkovChain& chain, int m_max, double nu);

/// Maximize average interval subject to average age penalty <= d.
lp::LinearProgram build_p2(const MarkovChain& chain, int m_max, double d);

/// Default zero-mass threshold for policy extraction.
inline constexpr double kZeroMass = 1e-9;

/// P(tau | j) = z[j][tau] / sum_tau z[j][tau]; rows below `zero_mass` get the
/// default action and are flagged.
MarkovPolicy extract_policy(const OccupationMeasure& z, double zero_mass = kZeroMass);

/// Transition matrix of the observed-state chain X_{G_k} under `policy`.
Matrix induced_chain(const MarkovChain& chain, const MarkovPolicy& policy, int m_max);
Matrix induced_chain(const TransitionKernel& q, const MarkovPolicy& policy);

/// Long-run average age penalty and sampling interval of `policy`, from the
/// stationary distribution of the induced chain. Transient observed states
/// are allowed; throws InducedNotErgodic if the induced chain has more than
/// one closed class.
EvalReport evaluate_policy(const MarkovChain& chain, const MarkovPolicy& policy, int m_max);

/// Best constant interval for P1: ceil(1/nu). Throws PeriodExceedsM.
int optimal_periodic_p1(double nu, int m_max);
/// Best constant interval for P2: floor(d) + 1. Throws PeriodExceedsM.
int optimal_periodic_p2(double d, int m_max);

/// How a single occupation measure is chosen when the LP optimum is not unique.
enum class TieBreak {
  /// The basic solution reached by the simplex pivots.
  FirstVertex,
  /// Mean of all optimal basic solutions.
  FaceCentroid,
};

struct SolveOptions {
  lp::SimplexOptions simplex;
  TieBreak tie_break = TieBreak::FaceCentroid;
  double zero_mass = kZeroMass;
  /// Allowed gap between the LP objective and the analytic evaluation.
  double consistency_tolerance = 1e-5;
};

struct CmdpSolution {
  lp::LinearProgram program;
  lp::LpSolution lp;
  OccupationMeasure occupation;
  MarkovPolicy policy;
  EvalReport report;
  /// Number of optimal vertices found (1 when the optimum is unique).
  std::size_t optimal_vertices = 1;
};

/// build -> solve -> extract -> evaluate. Throws Infeasible, Unbounded or
/// ObjectiveMismatch.
CmdpSolution solve_p1(const MarkovChain& chain, int m_max, double nu, const SolveOptions& = {});
CmdpSolution solve_p2(const MarkovChain& chain, int m_max, double d, const SolveOptions& = {});

}  // namespace agesampler
