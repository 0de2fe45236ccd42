#include "agesampler/dtmc.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "agesampler/errors.hpp"
#include "agesampler/rng.hpp"

namespace agesampler {

namespace {

// reach[i][j]: j is reachable from i in zero or more steps.
std::vector<std::vector<bool>> reachability(const Matrix& p) {
  const auto n = static_cast<int>(p.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int s = 0; s < n; ++s) {
    std::queue<int> frontier;
    frontier.push(s);
    reach[s][s] = true;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v = 0; v < n; ++v) {
        if (p(u, v) > 0.0 && !reach[s][v]) {
          reach[s][v] = true;
          frontier.push(v);
        }
      }
    }
  }
  return reach;
}

}  // namespace

namespace detail {

bool is_irreducible(const Matrix& p) {
  const auto reach = reachability(p);
  for (const auto& row : reach)
    for (bool r : row)
      if (!r) return false;
  return true;
}

int closed_class_count(const Matrix& p) {
  const auto n = static_cast<int>(p.rows());
  const auto reach = reachability(p);
  // i is recurrent iff everything reachable from i can reach i back.
  std::vector<bool> counted(n, false);
  int classes = 0;
  for (int i = 0; i < n; ++i) {
    if (counted[i]) continue;
    bool closed = true;
    for (int j = 0; j < n && closed; ++j)
      if (reach[i][j] && !reach[j][i]) closed = false;
    if (!closed) continue;
    ++classes;
    for (int j = 0; j < n; ++j)
      if (reach[i][j]) counted[j] = true;
  }
  return classes;
}

int period(const Matrix& p, int root) {
  // BFS levels from root; every edge u->v closes a cycle of length
  // level[u] + 1 - level[v] modulo the period.
  const auto n = static_cast<int>(p.rows());
  std::vector<int> level(n, -1);
  std::queue<int> frontier;
  level[root] = 0;
  frontier.push(root);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      if (p(u, v) > 0.0 && level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  int g = 0;
  for (int u = 0; u < n; ++u) {
    if (level[u] < 0) continue;
    for (int v = 0; v < n; ++v) {
      if (p(u, v) > 0.0 && level[v] >= 0) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
    }
  }
  return g;
}

Vector solve_stationary(const Matrix& p) {
  const auto n = p.rows();
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b(n - 1) = 1.0;
  Vector xi = a.fullPivLu().solve(b);
  // Clean round-off so the result is a proper distribution.
  for (auto& v : xi) v = std::max(v, 0.0);
  return xi / xi.sum();
}

}  // namespace detail

MarkovChain::MarkovChain(Matrix p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols())
    throw InvalidArgument("transition matrix must be square, got " + std::to_string(p_.rows()) +
                          "x" + std::to_string(p_.cols()));
  if (p_.rows() < 2) throw InvalidArgument("transition matrix needs at least 2 states");
  for (Eigen::Index i = 0; i < p_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p_.cols(); ++j) {
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream msg;
        msg << "p[" << i << "][" << j << "] = " << v << " is not a probability";
        throw NotStochastic(msg.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row " << i << " sums to " << sum << ", expected 1";
      throw NotStochastic(msg.str());
    }
  }
  if (!detail::is_irreducible(p_)) throw NotErgodic("chain is reducible");
  if (const int d = detail::period(p_); d != 1)
    throw NotErgodic("chain is periodic with period " + std::to_string(d));
  stationary_ = detail::solve_stationary(p_);
}

Matrix n_step(const MarkovChain& chain, int n) {
  if (n < 0) throw InvalidArgument("n_step: n must be nonnegative");
  const Matrix& p = chain.transition();
  const auto size = p.rows();
  Matrix result = Matrix::Identity(size, size);
  if (n <= 8) {
    for (int k = 0; k < n; ++k) result = result * p;
    return result;
  }
  Matrix base = p;
  for (unsigned e = static_cast<unsigned>(n); e != 0; e >>= 1) {
    if (e & 1U) result = result * base;
    if (e > 1) base = base * base;
  }
  return result;
}

std::vector<std::int64_t> transition_instants(const std::vector<int>& states) {
  std::vector<std::int64_t> out;
  for (std::size_t t = 1; t < states.size(); ++t)
    if (states[t] != states[t - 1]) out.push_back(static_cast<std::int64_t>(t));
  return out;
}

SamplePath sample_path(const MarkovChain& chain, int x0, std::int64_t horizon,
                       std::uint64_t seed) {
  if (x0 < 0 || x0 >= chain.size()) throw InvalidArgument("sample_path: x0 out of range");
  if (horizon < 1) throw InvalidArgument("sample_path: horizon must be positive");
  const Matrix& p = chain.transition();
  const auto n = static_cast<std::size_t>(chain.size());
  Rng rng(seed);
  SamplePath path;
  path.states.reserve(static_cast<std::size_t>(horizon) + 1);
  path.states.push_back(x0);
  int x = x0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const int next = static_cast<int>(rng.categorical({p.row(x).data(), n}));
    if (next != x) path.transition_instants.push_back(t);
    x = next;
    path.states.push_back(x);
  }
  return path;
}

}  // namespace agesampler
