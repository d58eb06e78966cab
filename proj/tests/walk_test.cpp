#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sfn/walk.hpp"

namespace {

/// Stationary vector by repeated multiplication, independent of the QR solve.
Eigen::VectorXd power_iteration(const Eigen::MatrixXd& p, int steps = 200'000) {
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Constant(p.rows(), 1.0 / double(p.rows()));
  // Lazy chain (P + I) / 2 has the same stationary vector and no periodicity.
  const Eigen::MatrixXd lazy = 0.5 * (p + Eigen::MatrixXd::Identity(p.rows(), p.cols()));
  for (int i = 0; i < steps; ++i) {
    const Eigen::RowVectorXd next = v * lazy;
    if ((next - v).lpNorm<1>() < 1e-15) return next.transpose();
    v = next;
  }
  return v.transpose();
}

TEST(Acceptance, MetropolisAndBaker) {
  EXPECT_DOUBLE_EQ(sfn::metropolis_accept(0.2, 0.1), 0.5);
  EXPECT_DOUBLE_EQ(sfn::metropolis_accept(0.1, 0.2), 1.0);
  EXPECT_DOUBLE_EQ(sfn::baker_accept(0.2, 0.1), 0.1 / 0.3);
  EXPECT_THROW(sfn::metropolis_accept(0.0, 0.1), std::domain_error);
  EXPECT_THROW(sfn::baker_accept(0.1, -1.0), std::domain_error);
}

class ChainRule : public ::testing::TestWithParam<sfn::AcceptanceRule> {};

TEST_P(ChainRule, DetailedBalanceAndStationarity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const int n = 7;
  Eigen::VectorXd pi(n);
  for (int i = 0; i < n; ++i) pi(i) = u(rng);
  pi /= pi.sum();
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q(i, j) = 1.0 / n;
  }
  const auto chain = sfn::build_chain(q, pi, GetParam());
  const auto& p = chain.transition();
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
    for (int j = 0; j < n; ++j) EXPECT_NEAR(pi(i) * p(i, j), pi(j) * p(j, i), 1e-14);
  }
  EXPECT_LT((sfn::stationary_distribution(p) - pi).lpNorm<1>(), 1e-10);
  EXPECT_LT((power_iteration(p) - pi).lpNorm<1>(), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Rules, ChainRule,
                         ::testing::Values(sfn::AcceptanceRule::metropolis, sfn::AcceptanceRule::baker));

TEST(PoissonChain, BakerAcceptancesMatchClosedForm) {
  const double lambda = 2.0;
  const auto pi = sfn::truncated_poisson(lambda, 40);
  for (int i = 1; i <= 5; ++i) {
    EXPECT_NEAR(sfn::baker_accept(pi(i), pi(i + 1)), lambda / (lambda + i + 1), 1e-12);
    EXPECT_NEAR(sfn::baker_accept(pi(i), pi(i - 1)), i / (i + lambda), 1e-12);
  }
}

TEST(PoissonChain, TransitionEntriesIncludeProposal) {
  const double lambda = 2.0;
  const auto chain = sfn::build_chain(sfn::birth_death_proposal(40), sfn::truncated_poisson(lambda, 40),
                                      sfn::AcceptanceRule::baker);
  for (int i = 1; i <= 5; ++i) EXPECT_NEAR(chain.p(i, i + 1), 0.5 * lambda / (lambda + i + 1), 1e-12);
  EXPECT_NEAR(chain.p(0, 1), 0.5 * lambda / (1 + lambda), 1e-12);
  EXPECT_NEAR(chain.p(0, 0), 1.0 - 0.5 * lambda / (1 + lambda), 1e-12);
}

TEST(PoissonChain, WalkOccupancyMatchesTarget) {
  const auto chain = sfn::build_chain(sfn::birth_death_proposal(30), sfn::truncated_poisson(2.0, 30),
                                      sfn::AcceptanceRule::baker);
  std::mt19937_64 rng(1);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(31);
  std::size_t state = 0;
  constexpr int kSteps = 400'000;
  for (int t = 0; t < kSteps; ++t) {
    state = sfn::walk_step(chain, state, rng);
    counts(static_cast<Eigen::Index>(state)) += 1.0;
  }
  EXPECT_LT((counts / kSteps - chain.target()).lpNorm<1>(), 0.03);
}

TEST(TruncatedPoisson, Normalized) {
  const auto pi = sfn::truncated_poisson(3.0, 60);
  EXPECT_NEAR(pi.sum(), 1.0, 1e-12);
  EXPECT_NEAR(pi(1) / pi(0), 3.0, 1e-12);
  EXPECT_THROW(sfn::truncated_poisson(0.0, 5), std::domain_error);
}

TEST(BuildChain, RejectsBadInput) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Constant(2, 2, 0.5);
  Eigen::VectorXd pi(2);
  pi << 0.5, 0.0;
  EXPECT_THROW(sfn::build_chain(q, pi, sfn::AcceptanceRule::metropolis), std::domain_error);
  pi << 0.5, 0.5;
  q(0, 0) = 0.9;
  EXPECT_THROW(sfn::build_chain(q, pi, sfn::AcceptanceRule::metropolis), std::invalid_argument);
}

TEST(DegreeBias, EntryFormula) {
  sfn::Graph g(3);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  // k_2 = 2, k_3 = 1, (1/3)^(1/1.5) * 2 / 1 > 1 is false: 0.4807 * 2 = 0.961.
  const double expected = std::min(std::pow(1.0 / 3.0, 1.0 / 1.5) * 2.0, 1.0) / 2.0;
  EXPECT_NEAR(sfn::degree_bias_entry(g, 2, 3, 2.5), expected, 1e-15);
}

TEST(DegreeBias, MatrixIsStochasticWithConsistentTarget) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::random_connected(25, 20, seed);
    const auto bias = sfn::degree_bias_matrix(g, 2.5);
    const auto& p = bias.chain.transition();
    for (Eigen::Index i = 0; i < p.rows(); ++i) EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
    EXPECT_LT((power_iteration(p) - bias.chain.target()).lpNorm<1>(), 1e-8);
  }
}

TEST(DegreeBias, DisconnectedGraphNamesComponents) {
  sfn::Graph g(4);
  g.add_edge(1, 2);
  g.add_edge(3, 4);
  EXPECT_THROW(sfn::degree_bias_matrix(g, 2.5), sfn::DisconnectedGraph);
}

TEST(DegreeBias, SparseStepFollowsRow) {
  const auto g = oracle::random_connected(12, 8, 3);
  const auto row = sfn::degree_bias_row(g, 1, 2.5);
  std::mt19937_64 rng(4);
  std::map<sfn::NodeId, int> hits;
  constexpr int kDraws = 100'000;
  for (int i = 0; i < kDraws; ++i) ++hits[sfn::walk_step(g, sfn::NodeId{1}, 2.5, rng)];
  for (std::size_t k = 0; k < row.targets.size(); ++k) {
    const double p = row.probs[k];
    EXPECT_NEAR(hits[row.targets[k]] / double(kDraws), p, 5 * std::sqrt(p * (1 - p) / kDraws) + 1e-9);
  }
}

}  // namespace
