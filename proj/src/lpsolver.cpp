#include "agesampler/lpsolver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <set>
#include <string>

#include "agesampler/errors.hpp"

namespace agesampler::lp {

namespace {

using Dense = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Standard form A x = b, x >= 0, b >= 0, built from a LinearProgram. Columns
// are the original variables, then one slack per inequality, then
// artificials for rows with no usable slack.
struct StandardForm {
  Dense a;
  Vector b;
  Vector cost;               // internal minimization cost over all columns
  std::vector<double> flip;  // +1 or -1 per row
  std::vector<int> initial_basis;
  int num_original = 0;
  int num_structural = 0;  // originals + slacks
};

StandardForm to_standard_form(const LinearProgram& lp) {
  const int n = lp.num_variables();
  const int n_eq = static_cast<int>(lp.equalities.size());
  const int n_ineq = static_cast<int>(lp.inequalities.size());
  const int m = n_eq + n_ineq;

  StandardForm sf;
  sf.num_original = n;
  sf.num_structural = n + n_ineq;
  sf.flip.assign(m, 1.0);
  sf.initial_basis.assign(m, -1);

  Dense rows = Dense::Zero(m, sf.num_structural);
  sf.b.resize(m);
  for (int i = 0; i < n_eq; ++i) {
    rows.row(i).head(n) = lp.equalities[i].coeffs.transpose();
    sf.b(i) = lp.equalities[i].rhs;
  }
  for (int k = 0; k < n_ineq; ++k) {
    const int i = n_eq + k;
    const auto& c = lp.inequalities[k];
    rows.row(i).head(n) = c.coeffs.transpose();
    rows(i, n + k) = c.relation == Relation::LessEqual ? 1.0 : -1.0;
    sf.b(i) = c.rhs;
  }

  int num_artificial = 0;
  for (int i = 0; i < m; ++i) {
    if (sf.b(i) < 0.0) {
      rows.row(i) *= -1.0;
      sf.b(i) = -sf.b(i);
      sf.flip[i] = -1.0;
    }
    if (i >= n_eq && rows(i, n + (i - n_eq)) > 0.0) {
      sf.initial_basis[i] = n + (i - n_eq);
    } else {
      sf.initial_basis[i] = sf.num_structural + num_artificial++;
    }
  }

  sf.a = Dense::Zero(m, sf.num_structural + num_artificial);
  sf.a.leftCols(sf.num_structural) = rows;
  for (int i = 0; i < m; ++i)
    if (sf.initial_basis[i] >= sf.num_structural) sf.a(i, sf.initial_basis[i]) = 1.0;

  sf.cost = Vector::Zero(sf.a.cols());
  sf.cost.head(n) = lp.sense == Sense::Minimize ? lp.objective : Vector(-lp.objective);
  return sf;
}

// Dense simplex tableau. Rows 0..m-1 hold B^-1 [A | b]; the last row holds
// reduced costs and, in the rhs column, minus the current objective.
class Tableau {
 public:
  Tableau(const StandardForm& sf, const SimplexOptions& opt)
      : t_(Dense::Zero(sf.a.rows() + 1, sf.a.cols() + 1)),
        basis_(sf.initial_basis),
        allowed_(static_cast<std::size_t>(sf.a.cols()), true),
        opt_(opt) {
    const auto m = sf.a.rows();
    t_.topLeftCorner(m, sf.a.cols()) = sf.a;
    t_.col(rhs()).head(m) = sf.b;
  }

  [[nodiscard]] Eigen::Index rows() const { return t_.rows() - 1; }
  [[nodiscard]] Eigen::Index rhs() const { return t_.cols() - 1; }
  [[nodiscard]] const std::vector<int>& basis() const { return basis_; }
  [[nodiscard]] double objective() const { return -t_(rows(), rhs()); }
  [[nodiscard]] double reduced_cost(Eigen::Index j) const { return t_(rows(), j); }
  [[nodiscard]] bool allowed(Eigen::Index j) const { return allowed_[static_cast<std::size_t>(j)]; }
  void forbid(Eigen::Index j) { allowed_[static_cast<std::size_t>(j)] = false; }

  // Sets the cost row from a full cost vector and prices out the basis.
  void set_cost(const Vector& cost) {
    const auto m = rows();
    t_.row(m).setZero();
    t_.row(m).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost(basis_[i]);
      if (cb != 0.0) t_.row(m) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = static_cast<int>(col);
  }

  // Rows achieving the minimum ratio for entering column `col`.
  [[nodiscard]] std::vector<Eigen::Index> ratio_rows(Eigen::Index col) const {
    std::vector<Eigen::Index> best;
    double min_ratio = 0.0;
    for (Eigen::Index i = 0; i < rows(); ++i) {
      const double a = t_(i, col);
      if (a <= opt_.pivot_tolerance) continue;
      const double r = std::max(t_(i, rhs()), 0.0) / a;
      if (best.empty() || r < min_ratio - 1e-12 * (1.0 + min_ratio)) {
        best.assign(1, i);
        min_ratio = r;
      } else if (r <= min_ratio + 1e-12 * (1.0 + min_ratio)) {
        best.push_back(i);
      }
    }
    return best;
  }

  // Bland: among tied rows, the one whose basic variable has the lowest index.
  [[nodiscard]] Eigen::Index bland_row(const std::vector<Eigen::Index>& tied) const {
    return *std::min_element(tied.begin(), tied.end(), [&](Eigen::Index l, Eigen::Index r) {
      return basis_[l] < basis_[r];
    });
  }

  // Runs simplex iterations to optimality. Returns false if unbounded.
  bool optimize(int& iterations) {
    while (true) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < rhs(); ++j) {
        if (allowed(j) && reduced_cost(j) < -opt_.pivot_tolerance) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      const auto tied = ratio_rows(entering);
      if (tied.empty()) return false;
      if (++iterations > opt_.max_iterations) throw Error("simplex: iteration limit reached");
      pivot(bland_row(tied), entering);
    }
  }

  void remove_row(Eigen::Index row) {
    const Eigen::Index last = t_.rows() - 1;
    Dense next(t_.rows() - 1, t_.cols());
    next << t_.topRows(row), t_.middleRows(row + 1, last - row);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + row);
  }

  [[nodiscard]] Vector primal(int num_original) const {
    Vector x = Vector::Zero(num_original);
    for (Eigen::Index i = 0; i < rows(); ++i)
      if (basis_[i] < num_original) x(basis_[i]) = std::max(t_(i, rhs()), 0.0);
    return x;
  }

  [[nodiscard]] double entry(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }

 private:
  Dense t_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
  SimplexOptions opt_;
};

struct Solved {
  LpSolution solution;
  std::optional<Tableau> tableau;  // the phase-2 optimal tableau
  std::vector<int> kept_rows;      // original row index of each tableau row
};

Solved run_simplex(const LinearProgram& lp, const SimplexOptions& opt) {
  lp.validate();
  const StandardForm sf = to_standard_form(lp);
  Tableau tab(sf, opt);
  Solved out;
  auto& sol = out.solution;

  const auto m = static_cast<int>(sf.a.rows());
  std::vector<int> kept(m);
  for (int i = 0; i < m; ++i) kept[i] = i;

  // Phase 1: minimize the sum of artificials.
  Vector phase1 = Vector::Zero(sf.a.cols());
  phase1.tail(sf.a.cols() - sf.num_structural).setOnes();
  tab.set_cost(phase1);
  if (!tab.optimize(sol.iterations)) throw Error("simplex: phase 1 unbounded");
  if (tab.objective() > opt.feasibility_tolerance) {
    sol.status = LpStatus::Infeasible;
    return out;
  }

  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are linearly dependent and are dropped.
  for (Eigen::Index i = tab.rows() - 1; i >= 0; --i) {
    if (tab.basis()[i] < sf.num_structural) continue;
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < sf.num_structural; ++j) {
      if (std::abs(tab.entry(i, j)) > opt.pivot_tolerance) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      tab.remove_row(i);
      kept.erase(kept.begin() + i);
    }
  }
  for (Eigen::Index j = sf.num_structural; j < sf.a.cols(); ++j) tab.forbid(j);

  // Phase 2.
  tab.set_cost(sf.cost);
  if (!tab.optimize(sol.iterations)) {
    sol.status = LpStatus::Unbounded;
    return out;
  }

  sol.status = LpStatus::Optimal;
  sol.x = tab.primal(sf.num_original);
  sol.objective_value = lp.objective.dot(sol.x);
  sol.basis = tab.basis();

  // Duals from B^T w = c_B over the kept rows.
  const auto k = static_cast<Eigen::Index>(kept.size());
  Dense basis_matrix(k, k);
  Vector cb(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) basis_matrix(r, c) = sf.a(kept[r], sol.basis[c]);
    cb(r) = sf.cost(sol.basis[r]);
  }
  const Vector w = basis_matrix.transpose().fullPivLu().solve(cb);
  sol.duals = Vector::Zero(m);
  const double sense = lp.sense == Sense::Minimize ? 1.0 : -1.0;
  for (Eigen::Index r = 0; r < k; ++r) sol.duals(kept[r]) = sense * sf.flip[kept[r]] * w(r);

  out.tableau.emplace(std::move(tab));
  out.kept_rows = std::move(kept);
  return out;
}

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (n == 0) throw MalformedProgram("program has no variables");
  if (!objective.allFinite()) throw MalformedProgram("objective has non-finite coefficients");
  for (std::size_t i = 0; i < equalities.size(); ++i) {
    const auto& c = equalities[i];
    if (c.coeffs.size() != n)
      throw MalformedProgram("equality " + std::to_string(i) + " has " +
                             std::to_string(c.coeffs.size()) + " coefficients, expected " +
                             std::to_string(n));
    if (!c.coeffs.allFinite() || !std::isfinite(c.rhs))
      throw MalformedProgram("equality " + std::to_string(i) + " is not finite");
  }
  for (std::size_t i = 0; i < inequalities.size(); ++i) {
    const auto& c = inequalities[i];
    if (c.coeffs.size() != n)
      throw MalformedProgram("inequality " + std::to_string(i) + " has " +
                             std::to_string(c.coeffs.size()) + " coefficients, expected " +
                             std::to_string(n));
    if (!c.coeffs.allFinite() || !std::isfinite(c.rhs))
      throw MalformedProgram("inequality " + std::to_string(i) + " is not finite");
  }
}

LpSolution solve(const LinearProgram& program, const SimplexOptions& options) {
  return run_simplex(program, options).solution;
}

bool check_feasible(const LinearProgram& program, const Vector& x, double tol) {
  program.validate();
  if (x.size() != program.objective.size())
    throw MalformedProgram("check_feasible: x has " + std::to_string(x.size()) +
                           " entries, expected " + std::to_string(program.objective.size()));
  if (!x.allFinite() || (x.array() < -tol).any()) return false;
  for (const auto& c : program.equalities)
    if (std::abs(c.coeffs.dot(x) - c.rhs) > tol) return false;
  for (const auto& c : program.inequalities) {
    const double lhs = c.coeffs.dot(x);
    if (c.relation == Relation::LessEqual ? lhs > c.rhs + tol : lhs < c.rhs - tol) return false;
  }
  return true;
}

Vector OptimalFace::centroid() const {
  if (vertices.empty()) return {};
  Vector sum = Vector::Zero(vertices.front().size());
  for (const auto& v : vertices) sum += v;
  return sum / static_cast<double>(vertices.size());
}

OptimalFace explore_optimal_face(const LinearProgram& program, const SimplexOptions& options,
                                 std::size_t max_bases) {
  Solved solved = run_simplex(program, options);
  OptimalFace face;
  face.solution = solved.solution;
  if (face.solution.status != LpStatus::Optimal) return face;

  const int n = program.num_variables();
  auto add_vertex = [&](Vector x) {
    for (const auto& v : face.vertices)
      if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-9) return;
    face.vertices.push_back(std::move(x));
  };

  std::set<std::vector<int>> seen;
  auto key = [](std::vector<int> b) {
    std::sort(b.begin(), b.end());
    return b;
  };

  std::deque<Tableau> queue;
  seen.insert(key(solved.tableau->basis()));
  queue.push_back(std::move(*solved.tableau));
  while (!queue.empty()) {
    Tableau tab = std::move(queue.front());
    queue.pop_front();
    add_vertex(tab.primal(n));
    std::vector<bool> in_basis(static_cast<std::size_t>(tab.rhs()), false);
    for (int b : tab.basis()) in_basis[static_cast<std::size_t>(b)] = true;
    for (Eigen::Index j = 0; j < tab.rhs(); ++j) {
      if (!tab.allowed(j) || in_basis[static_cast<std::size_t>(j)]) continue;
      if (std::abs(tab.reduced_cost(j)) > options.pivot_tolerance) continue;
      for (Eigen::Index row : tab.ratio_rows(j)) {
        Tableau next = tab;
        next.pivot(row, j);
        if (!seen.insert(key(next.basis())).second) continue;
        if (seen.size() > max_bases) {
          face.complete = false;
          return face;
        }
        queue.push_back(std::move(next));
      }
    }
  }
  return face;
}

}  // namespace agesampler::lp
