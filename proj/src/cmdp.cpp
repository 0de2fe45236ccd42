#include "agesampler/cmdp.hpp"

#include <cmath>
#include <sstream>

#include "agesampler/errors.hpp"

namespace agesampler {

namespace {

void require_m_max(int m_max) {
  if (m_max < 1) throw InvalidArgument("m_max must be >= 1, got " + std::to_string(m_max));
}

// Constraints shared by both problems: total mass 1 and per-state balance
// of the observed-state chain.
void add_steady_state_constraints(lp::LinearProgram& program, const TransitionKernel& q,
                                  int num_states) {
  const int m_max = q.m_max();
  const int v = num_states * m_max;
  program.equalities.push_back({lp::Vector::Ones(v), 1.0});
  for (int i = 0; i < num_states; ++i) {
    lp::Vector row = lp::Vector::Zero(v);
    for (int j = 0; j < num_states; ++j) {
      for (int tau = 1; tau <= m_max; ++tau) {
        const int k = variable_index(j, tau, m_max);
        if (j == i) row(k) += 1.0;
        row(k) -= q.at(j, tau, i);
      }
    }
    program.equalities.push_back({std::move(row), 0.0});
  }
}

lp::Vector flat_costs(const CostTable& costs) {
  const int m_max = costs.m_max();
  lp::Vector c(costs.num_states() * m_max);
  for (int j = 0; j < costs.num_states(); ++j)
    for (int tau = 1; tau <= m_max; ++tau) c(variable_index(j, tau, m_max)) = costs.at(j, tau);
  return c;
}

lp::Vector flat_intervals(int num_states, int m_max) {
  lp::Vector t(num_states * m_max);
  for (int j = 0; j < num_states; ++j)
    for (int tau = 1; tau <= m_max; ++tau) t(variable_index(j, tau, m_max)) = tau;
  return t;
}

enum class Problem { MinPenalty, MaxInterval };

CmdpSolution solve_program(const MarkovChain& chain, int m_max, lp::LinearProgram program,
                           Problem problem, const SolveOptions& options) {
  CmdpSolution out;
  lp::Vector x;
  if (options.tie_break == TieBreak::FaceCentroid) {
    auto face = lp::explore_optimal_face(program, options.simplex);
    out.lp = std::move(face.solution);
    out.optimal_vertices = face.vertices.size();
    x = face.centroid();
  } else {
    out.lp = lp::solve(program, options.simplex);
    x = out.lp.x;
  }
  out.program = std::move(program);

  if (out.lp.status == lp::LpStatus::Infeasible)
    throw Infeasible("LP is infeasible: no policy meets the constraint");
  if (out.lp.status == lp::LpStatus::Unbounded) throw Unbounded("LP is unbounded");

  out.occupation = OccupationMeasure::from_lp(x, chain.size(), m_max);
  out.policy = extract_policy(out.occupation, options.zero_mass);
  out.report = evaluate_policy(chain, out.policy, m_max);

  const double analytic = problem == Problem::MinPenalty ? out.report.avg_age_penalty
                                                         : out.report.avg_sampling_interval;
  if (std::abs(analytic - out.lp.objective_value) > options.consistency_tolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "policy evaluates to " << analytic << " but the LP objective is "
        << out.lp.objective_value;
    throw ObjectiveMismatch(msg.str());
  }
  return out;
}

}  // namespace

TransitionKernel::TransitionKernel(const MarkovChain& chain, int m_max) {
  require_m_max(m_max);
  powers_.reserve(static_cast<std::size_t>(m_max));
  Matrix current = chain.transition();
  for (int tau = 1; tau <= m_max; ++tau) {
    powers_.push_back(current);
    current = current * chain.transition();
  }
}

OccupationMeasure OccupationMeasure::from_lp(const lp::Vector& x, int num_states, int m_max) {
  if (x.size() != static_cast<Eigen::Index>(num_states) * m_max)
    throw InvalidArgument("occupation measure: expected " + std::to_string(num_states * m_max) +
                          " entries, got " + std::to_string(x.size()));
  OccupationMeasure out;
  out.z.resize(num_states, m_max);
  for (int j = 0; j < num_states; ++j)
    for (int tau = 1; tau <= m_max; ++tau) out.z(j, tau - 1) = x(variable_index(j, tau, m_max));
  return out;
}

lp::Vector OccupationMeasure::flatten() const {
  const auto m_max = static_cast<int>(z.cols());
  lp::Vector x(z.size());
  for (int j = 0; j < z.rows(); ++j)
    for (int tau = 1; tau <= m_max; ++tau) x(variable_index(j, tau, m_max)) = z(j, tau - 1);
  return x;
}

bool MarkovPolicy::any_defaulted() const {
  for (bool d : defaulted)
    if (d) return true;
  return false;
}

void MarkovPolicy::validate() const {
  if (dist.rows() < 1 || dist.cols() < 1) throw InvalidArgument("policy is empty");
  if (defaulted.size() != static_cast<std::size_t>(dist.rows()))
    throw InvalidArgument("policy: defaulted flags do not match the number of states");
  for (Eigen::Index j = 0; j < dist.rows(); ++j) {
    for (Eigen::Index t = 0; t < dist.cols(); ++t) {
      const double v = dist(j, t);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream msg;
        msg << "policy: dist[" << j << "][" << t << "] = " << v << " is not a probability";
        throw InvalidArgument(msg.str());
      }
    }
    if (std::abs(dist.row(j).sum() - 1.0) > 1e-10)
      throw InvalidArgument("policy: row " + std::to_string(j) + " does not sum to 1");
  }
}

MarkovPolicy MarkovPolicy::periodic(int num_states, int m_max, int tau) {
  return deterministic(std::vector<int>(static_cast<std::size_t>(num_states), tau), m_max);
}

MarkovPolicy MarkovPolicy::deterministic(const std::vector<int>& taus, int m_max) {
  require_m_max(m_max);
  MarkovPolicy policy;
  policy.dist = Matrix::Zero(static_cast<Eigen::Index>(taus.size()), m_max);
  policy.defaulted.assign(taus.size(), false);
  for (std::size_t j = 0; j < taus.size(); ++j) {
    if (taus[j] < 1 || taus[j] > m_max)
      throw InvalidArgument("interval " + std::to_string(taus[j]) + " outside 1.." +
                            std::to_string(m_max));
    policy.dist(static_cast<Eigen::Index>(j), taus[j] - 1) = 1.0;
  }
  return policy;
}

lp::LinearProgram build_p1(const MarkovChain& chain, int m_max, double nu) {
  require_m_max(m_max);
  if (!(nu > 0.0 && nu <= 1.0)) throw InvalidArgument("nu must lie in (0, 1]");
  const double min_interval = 1.0 / nu;
  if (min_interval > m_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "required average interval 1/nu = " << min_interval << " exceeds m_max = " << m_max;
    throw Infeasible(msg.str());
  }
  const TransitionKernel q(chain, m_max);
  lp::LinearProgram program;
  program.sense = lp::Sense::Minimize;
  program.objective = flat_costs(CostTable(chain, m_max));
  add_steady_state_constraints(program, q, chain.size());
  program.inequalities.push_back(
      {flat_intervals(chain.size(), m_max), lp::Relation::GreaterEqual, min_interval});
  return program;
}

lp::LinearProgram build_p2(const MarkovChain& chain, int m_max, double d) {
  require_m_max(m_max);
  if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("d must be a finite value >= 0");
  const TransitionKernel q(chain, m_max);
  lp::LinearProgram program;
  program.sense = lp::Sense::Maximize;
  program.objective = flat_intervals(chain.size(), m_max);
  add_steady_state_constraints(program, q, chain.size());
  program.inequalities.push_back(
      {flat_costs(CostTable(chain, m_max)), lp::Relation::LessEqual, d});
  return program;
}

MarkovPolicy extract_policy(const OccupationMeasure& z, double zero_mass) {
  const auto n = z.z.rows();
  const auto m_max = z.z.cols();
  MarkovPolicy policy;
  policy.dist = Matrix::Zero(n, m_max);
  policy.defaulted.assign(static_cast<std::size_t>(n), false);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mass = z.z.row(j).cwiseMax(0.0).sum();
    if (mass > zero_mass) {
      policy.dist.row(j) = z.z.row(j).cwiseMax(0.0) / mass;
    } else {
      policy.dist(j, m_max - 1) = 1.0;
      policy.defaulted[static_cast<std::size_t>(j)] = true;
    }
  }
  return policy;
}

Matrix induced_chain(const TransitionKernel& q, const MarkovPolicy& policy) {
  if (policy.m_max() != q.m_max())
    throw InvalidArgument("policy has " + std::to_string(policy.m_max()) +
                          " intervals, expected " + std::to_string(q.m_max()));
  const int n = policy.num_states();
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int tau = 1; tau <= q.m_max(); ++tau)
      if (const double w = policy.prob(j, tau); w > 0.0) out.row(j) += w * q.power(tau).row(j);
  return out;
}

Matrix induced_chain(const MarkovChain& chain, const MarkovPolicy& policy, int m_max) {
  if (policy.num_states() != chain.size())
    throw InvalidArgument("policy has " + std::to_string(policy.num_states()) +
                          " states, chain has " + std::to_string(chain.size()));
  return induced_chain(TransitionKernel(chain, m_max), policy);
}

EvalReport evaluate_policy(const MarkovChain& chain, const MarkovPolicy& policy, int m_max) {
  policy.validate();
  const Matrix induced = induced_chain(chain, policy, m_max);
  if (const int classes = detail::closed_class_count(induced); classes != 1)
    throw InducedNotErgodic("observed-state chain has " + std::to_string(classes) +
                            " closed classes");

  EvalReport report;
  report.induced_stationary = detail::solve_stationary(induced);
  const CostTable costs(chain, m_max);
  double penalty = 0.0;
  double interval = 0.0;
  for (int j = 0; j < chain.size(); ++j) {
    for (int tau = 1; tau <= m_max; ++tau) {
      const double z = report.induced_stationary(j) * policy.prob(j, tau);
      penalty += costs.at(j, tau) * z;
      interval += tau * z;
    }
  }
  report.avg_age_penalty = penalty;
  report.avg_sampling_interval = interval;
  report.avg_sampling_frequency = 1.0 / interval;
  return report;
}

int optimal_periodic_p1(double nu, int m_max) {
  if (!(nu > 0.0 && nu <= 1.0)) throw InvalidArgument("nu must lie in (0, 1]");
  // Guard against 1/nu landing a rounding error above an integer.
  const double inv = 1.0 / nu;
  const double nearest = std::round(inv);
  const double tau = std::abs(inv - nearest) <= 1e-12 * nearest ? nearest : std::ceil(inv);
  if (tau > m_max)
    throw PeriodExceedsM("periodic interval " + std::to_string(static_cast<long long>(tau)) +
                         " exceeds m_max = " + std::to_string(m_max));
  return static_cast<int>(tau);
}

int optimal_periodic_p2(double d, int m_max) {
  if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("d must be a finite value >= 0");
  const double tau = std::floor(d) + 1.0;
  if (tau > m_max)
    throw PeriodExceedsM("periodic interval " + std::to_string(static_cast<long long>(tau)) +
                         " exceeds m_max = " + std::to_string(m_max));
  return static_cast<int>(tau);
}

CmdpSolution solve_p1(const MarkovChain& chain, int m_max, double nu,
                      const SolveOptions& options) {
  return solve_program(chain, m_max, build_p1(chain, m_max, nu), Problem::MinPenalty, options);
}

CmdpSolution solve_p2(const MarkovChain& chain, int m_max, double d,
                      const SolveOptions& options) {
  return solve_program(chain, m_max, build_p2(chain, m_max, d), Problem::MaxInterval, options);
}

}  // namespace agesampler
