#include <gtest/gtest.h>

#include <random>

#include "agesampler/dtmc.hpp"
#include "agesampler/errors.hpp"
#include "agesampler/penalty.hpp"
#include "test_util.hpp"

using namespace agesampler;
using agesampler::testing::random_chain;
using agesampler::testing::two_state;

// =============================================================================
// Construction
// =============================================================================

TEST(MarkovChain, TwoStateStationary) {
  const auto chain = two_state(0.1, 0.6);
  // xi_1 = p21 / (p12 + p21)
  EXPECT_NEAR(chain.stationary()(0), 6.0 / 7.0, 1e-12);
  EXPECT_NEAR(chain.stationary()(1), 1.0 / 7.0, 1e-12);
}

TEST(MarkovChain, SymmetricStationary) {
  const auto chain = two_state(0.5, 0.5);
  EXPECT_NEAR(chain.stationary()(0), 0.5, 1e-12);
  EXPECT_NEAR(chain.stationary()(1), 0.5, 1e-12);
}

TEST(MarkovChain, RejectsReducible) {
  EXPECT_THROW(MarkovChain(Matrix::Identity(2, 2)), NotErgodic);
  Matrix p(3, 3);
  p << 0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 0.2, 0.3, 0.5;
  EXPECT_THROW(MarkovChain{p}, NotErgodic);
}

TEST(MarkovChain, RejectsPeriodic) {
  Matrix flip(2, 2);
  flip << 0.0, 1.0, 1.0, 0.0;
  EXPECT_THROW(MarkovChain{flip}, NotErgodic);

  // Bipartite 4-cycle with random directions still has period 2.
  Matrix bip(4, 4);
  bip << 0, 0.5, 0, 0.5, 0.5, 0, 0.5, 0, 0, 0.5, 0, 0.5, 0.5, 0, 0.5, 0;
  EXPECT_THROW(MarkovChain{bip}, NotErgodic);
}

TEST(MarkovChain, AcceptsAperiodicWithoutSelfLoops) {
  // Cycles of length 2 and 3 through state 0.
  Matrix p(3, 3);
  p << 0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0;
  EXPECT_NO_THROW(MarkovChain{p});
}

TEST(MarkovChain, RejectsNonStochastic) {
  Matrix p(2, 2);
  p << 0.9, 0.05, 0.5, 0.5;
  EXPECT_THROW(MarkovChain{p}, NotStochastic);
  p << 1.1, -0.1, 0.5, 0.5;
  EXPECT_THROW(MarkovChain{p}, NotStochastic);
  p << 0.9, 0.1 + 1e-8, 0.5, 0.5;
  EXPECT_THROW(MarkovChain{p}, NotStochastic);
  p << 0.9, 0.1 + 1e-11, 0.5, 0.5;
  EXPECT_NO_THROW(MarkovChain{p});
}

TEST(MarkovChain, RejectsBadShape) {
  EXPECT_THROW(MarkovChain(Matrix::Ones(2, 3) / 3.0), InvalidArgument);
  EXPECT_THROW(MarkovChain(Matrix::Ones(1, 1)), InvalidArgument);
}

TEST(MarkovChain, StationaryIsFixedPointOnRandomChains) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto chain = random_chain(2 + trial % 6, gen, 0.0);
    const Vector& xi = chain.stationary();
    EXPECT_NEAR(xi.sum(), 1.0, 1e-10);
    const Vector moved = chain.transition().transpose() * xi;
    EXPECT_LE((moved - xi).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

// =============================================================================
// n-step probabilities
// =============================================================================

TEST(NStep, ZeroIsIdentity) {
  const auto chain = two_state(0.3, 0.4);
  EXPECT_TRUE(n_step(chain, 0).isApprox(Matrix::Identity(2, 2)));
}

TEST(NStep, IdempotentSymmetric) {
  const auto p7 = n_step(two_state(0.5, 0.5), 7);
  EXPECT_LE((p7.array() - 0.5).abs().maxCoeff(), 1e-15);
}

TEST(NStep, HandSquare) {
  // 0.9*0.9 + 0.1*0.6
  EXPECT_NEAR(n_step(two_state(0.1, 0.6), 2)(0, 0), 0.87, 1e-15);
}

TEST(NStep, RejectsNegative) { EXPECT_THROW(n_step(two_state(0.3, 0.4), -1), InvalidArgument); }

TEST(NStep, ChapmanKolmogorov) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> steps(0, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const auto chain = random_chain(2 + trial % 4, gen);
    const int m = steps(gen);
    const int n = steps(gen);
    const Matrix lhs = n_step(chain, m + n);
    const Matrix rhs = n_step(chain, m) * n_step(chain, n);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10) << "m=" << m << " n=" << n;
    EXPECT_LE((lhs.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
  }
}

TEST(NStep, RowsConvergeToStationary) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto chain = random_chain(2 + trial % 4, gen);
    const Matrix pn = n_step(chain, 10000);
    for (int i = 0; i < chain.size(); ++i)
      EXPECT_LE((pn.row(i).transpose() - chain.stationary()).lpNorm<Eigen::Infinity>(), 1e-6);
  }
}

// =============================================================================
// Sample paths
// =============================================================================

TEST(SamplePath, Deterministic) {
  const auto chain = two_state(0.3, 0.4);
  const auto a = sample_path(chain, 0, 10000, 42);
  const auto b = sample_path(chain, 0, 10000, 42);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.transition_instants, b.transition_instants);
  const auto c = sample_path(chain, 0, 10000, 43);
  EXPECT_NE(a.states, c.states);
}

TEST(SamplePath, StartsAtX0AndRecordsTransitions) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto chain = random_chain(2 + trial % 4, gen);
    const int x0 = trial % chain.size();
    const auto path = sample_path(chain, x0, 5000, 100 + trial);
    ASSERT_EQ(path.states.size(), 5001U);
    EXPECT_EQ(path.states.front(), x0);
    EXPECT_EQ(path.transition_instants, transition_instants(path.states));
    for (std::size_t k = 1; k < path.transition_instants.size(); ++k)
      EXPECT_LT(path.transition_instants[k - 1], path.transition_instants[k]);
  }
}

TEST(SamplePath, SymmetricOccupancy) {
  const auto path = sample_path(two_state(0.5, 0.5), 0, 1'000'000, 5);
  double ones = 0;
  for (int s : path.states) ones += s;
  EXPECT_NEAR(ones / static_cast<double>(path.states.size()), 0.5, 0.01);
}

TEST(SamplePath, TransitionFrequencyMatchesClairvoyant) {
  const auto chain = two_state(0.1, 0.6);
  const auto path = sample_path(chain, 0, 1'000'000, 9);
  const double freq = static_cast<double>(path.transition_instants.size()) / 1e6;
  EXPECT_NEAR(freq, 2 * 0.1 * 0.6 / 0.7, 0.01);
}

TEST(SamplePath, OccupancyConvergesToStationary) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto chain = random_chain(2 + trial, gen);
    const auto path = sample_path(chain, 0, 1'000'000, 1000 + trial);
    Vector counts = Vector::Zero(chain.size());
    for (int s : path.states) counts(s) += 1.0;
    counts /= static_cast<double>(path.states.size());
    EXPECT_LE((counts - chain.stationary()).lpNorm<Eigen::Infinity>(), 0.01);
  }
}

TEST(SamplePath, RejectsBadArguments) {
  const auto chain = two_state(0.3, 0.4);
  EXPECT_THROW(sample_path(chain, 2, 10, 1), InvalidArgument);
  EXPECT_THROW(sample_path(chain, 0, 0, 1), InvalidArgument);
}

TEST(ClosedClasses, CountsRecurrentClasses) {
  Matrix p(3, 3);
  p << 1, 0, 0, 0, 1, 0, 0.5, 0.5, 0;
  EXPECT_EQ(detail::closed_class_count(p), 2);
  p << 0.5, 0.5, 0, 0.5, 0.5, 0, 0.5, 0.5, 0;
  EXPECT_EQ(detail::closed_class_count(p), 1);
}
