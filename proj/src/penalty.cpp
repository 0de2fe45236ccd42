#include "agesampler/penalty.hpp"

#include <cmath>

#include "agesampler/errors.hpp"

namespace agesampler {

double age_cost(double p_stay, int tau) {
  if (tau < 1) throw InvalidArgument("age_cost: tau must be >= 1");
  if (!(p_stay >= 0.0 && p_stay <= 1.0)) throw InvalidArgument("age_cost: p_stay not in [0,1]");
  // First exit at slot n after the sample has probability (1-p) p^(n-1) and
  // leaves tau - n stale slots before the next sample.
  double sum = 0.0;
  double stay = 1.0;
  for (int n = 1; n < tau; ++n) {
    sum += (tau - n) * (1.0 - p_stay) * stay;
    stay *= p_stay;
  }
  return sum;
}

double age_cost_closed_form(double p_stay, int tau) {
  if (p_stay >= 1.0) throw InvalidArgument("age_cost_closed_form: requires p_stay < 1");
  return (tau - 1) - p_stay * (1.0 - std::pow(p_stay, tau - 1)) / (1.0 - p_stay);
}

CostTable::CostTable(const MarkovChain& chain, int m_max) {
  if (m_max < 1) throw InvalidArgument("cost table: m_max must be >= 1");
  c_.resize(chain.size(), m_max);
  for (int j = 0; j < chain.size(); ++j)
    for (int tau = 1; tau <= m_max; ++tau) c_(j, tau - 1) = age_cost(chain.prob(j, j), tau);
}

double clairvoyant_frequency(const MarkovChain& chain) {
  double self = 0.0;
  for (int j = 0; j < chain.size(); ++j) self += chain.stationary()(j) * chain.prob(j, j);
  return 1.0 - self;
}

}  // namespace agesampler
