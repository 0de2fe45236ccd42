#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace agesampler {

/// Dense row-major matrix; rows of a transition matrix are contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Tolerances applied when a transition matrix is validated.
inline constexpr double kRowSumTolerance = 1e-9;

/// Finite-state, ergodic discrete-time Markov chain. States are 0-based.
///
/// Construction validates the matrix (square, N >= 2, entries in [0,1], rows
/// summing to one) and rejects reducible or periodic chains. The stationary
/// distribution is computed once from the linear system xi^T (P - I) = 0,
/// sum(xi) = 1. Instances are immutable.
class MarkovChain {
 public:
  /// Throws NotStochastic, NotErgodic, or InvalidArgument.
  explicit MarkovChain(Matrix p);

  [[nodiscard]] int size() const { return static_cast<int>(p_.rows()); }
  [[nodiscard]] const Matrix& transition() const { return p_; }
  [[nodiscard]] double prob(int from, int to) const { return p_(from, to); }
  [[nodiscard]] const Vector& stationary() const { return stationary_; }

 private:
  Matrix p_;
  Vector stationary_;
};

/// P^n, with P^0 the identity.
Matrix n_step(const MarkovChain& chain, int n);

/// States X_0..X_H and the slots t in 1..H where X_t != X_{t-1}.
struct SamplePath {
  std::vector<int> states;
  std::vector<std::int64_t> transition_instants;
};

/// Simulates `horizon` slots from `x0`. Deterministic in `seed`.
SamplePath sample_path(const MarkovChain& chain, int x0, std::int64_t horizon,
                       std::uint64_t seed);

/// Recomputes the transition instants of a state sequence.
std::vector<std::int64_t> transition_instants(const std::vector<int>& states);

namespace detail {

/// Reachability-based communicating-class analysis on the digraph of
/// positive entries. Shared with the induced-chain checks in cmdp.
bool is_irreducible(const Matrix& p);

/// Number of closed communicating classes. A chain has a unique stationary
/// distribution iff this is 1.
int closed_class_count(const Matrix& p);

/// Period of state `root` in an irreducible chain.
int period(const Matrix& p, int root = 0);

/// Solves xi^T P = xi^T, sum(xi) = 1 by replacing one balance equation with
/// the normalization row.
Vector solve_stationary(const Matrix& p);

}  // namespace detail

}  // namespace agesampler
