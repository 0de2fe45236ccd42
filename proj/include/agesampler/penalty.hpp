#pragma once

#include "agesampler/dtmc.hpp"

namespace agesampler {

/// Expected age penalty, in slots, for sampling `tau` slots after observing a
/// state whose self-transition probability is `p_stay`:
///
///   sum_{n=1}^{tau-1} (tau - n) (1 - p_stay) p_stay^(n-1)
///
/// Evaluated as the direct finite sum. Returns 0 for tau == 1 and for
/// p_stay == 1.
double age_cost(double p_stay, int tau);

/// Closed form (tau-1) - p (1 - p^(tau-1)) / (1 - p) of the same quantity,
/// defined for p_stay < 1. Kept for cross-checking.
double age_cost_closed_form(double p_stay, int tau);

/// Age-penalty costs c[j][tau] for every state and every interval 1..M.
class CostTable {
 public:
  CostTable(const MarkovChain& chain, int m_max);

  [[nodiscard]] int m_max() const { return static_cast<int>(c_.cols()); }
  [[nodiscard]] int num_states() const { return static_cast<int>(c_.rows()); }
  /// Cost for state j (0-based) and interval tau (1-based, in slots).
  [[nodiscard]] double at(int j, int tau) const { return c_(j, tau - 1); }
  [[nodiscard]] const Matrix& matrix() const { return c_; }

 private:
  Matrix c_;
};

inline CostTable cost_table(const MarkovChain& chain, int m_max) { return {chain, m_max}; }

/// Long-run fraction of slots in which the chain moves to a different state,
/// 1 - sum_j xi_j p_jj. This is the sampling frequency of a sampler that
/// knows the transition instants in advance.
double clairvoyant_frequency(const MarkovChain& chain);

}  // namespace agesampler
