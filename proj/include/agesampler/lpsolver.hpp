#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace agesampler::lp {

using Vector = Eigen::VectorXd;

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual };

struct EqualityConstraint {
  Vector coeffs;
  double rhs = 0.0;
};

struct InequalityConstraint {
  Vector coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// Dense linear program over nonnegative variables:
///
///   min/max objective . x
///   s.t.    equalities[i].coeffs . x  =  rhs
///           inequalities[i].coeffs . x  (<= | >=)  rhs
///           x >= 0
struct LinearProgram {
  Sense sense = Sense::Minimize;
  Vector objective;
  std::vector<EqualityConstraint> equalities;
  std::vector<InequalityConstraint> inequalities;

  [[nodiscard]] int num_variables() const { return static_cast<int>(objective.size()); }
  [[nodiscard]] int num_constraints() const {
    return static_cast<int>(equalities.size() + inequalities.size());
  }

  /// Throws MalformedProgram on a length mismatch or a non-finite coefficient.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  /// Primal solution; empty unless Optimal.
  Vector x;
  double objective_value = 0.0;
  /// Shadow prices, one per constraint (equalities first, then
  /// inequalities): the rate of change of the optimal objective with the
  /// constraint's right-hand side. Together with the objective they form a
  /// dual certificate: objective_value == sum(rhs * duals).
  Vector duals;
  /// Standard-form column indices of the final basis (originals, then one
  /// slack per inequality).
  std::vector<int> basis;
  int iterations = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-8;
  int max_iterations = 100000;
};

/// Two-phase dense simplex with Bland's smallest-index rule. Deterministic.
/// Throws MalformedProgram for an invalid program; infeasibility and
/// unboundedness are reported through the status.
LpSolution solve(const LinearProgram& program, const SimplexOptions& options = {});

/// True iff x satisfies every constraint and nonnegativity within `tol`.
bool check_feasible(const LinearProgram& program, const Vector& x, double tol);

/// The optimal basic solutions of a program, found by exploring pivots on
/// zero-reduced-cost columns from the simplex optimum.
struct OptimalFace {
  LpSolution solution;
  /// Distinct optimal vertices in discovery order; vertices.front() is
  /// solution.x. Empty unless the program is Optimal.
  std::vector<Vector> vertices;
  /// False if the exploration stopped at the basis limit.
  bool complete = true;

  /// Mean of the vertices. Lies in the optimal face, so it is optimal too.
  [[nodiscard]] Vector centroid() const;
};

OptimalFace explore_optimal_face(const LinearProgram& program, const SimplexOptions& options = {},
                                 std::size_t max_bases = 20000);

}  // namespace agesampler::lp
