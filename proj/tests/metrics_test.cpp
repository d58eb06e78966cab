#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sfn/graph.hpp"
#include "sfn/metrics.hpp"

namespace {

using sfn::DegreeDistribution;

DegreeDistribution random_distribution(std::mt19937_64& rng) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
  std::exponential_distribution<double> w(1.0);
  DegreeDistribution d;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d.probs.push_back(w(rng));
    total += d.probs.back();
  }
  for (double& p : d.probs) p /= total;
  return d;
}

TEST(TraceDistance, HandValues) {
  const DegreeDistribution p{{0.5, 0.5}};
  const DegreeDistribution q{{1.0}};
  EXPECT_DOUBLE_EQ(sfn::trace_distance(p, q), 0.5);
  EXPECT_DOUBLE_EQ(sfn::trace_distance(DegreeDistribution{{1.0}}, DegreeDistribution{{0.0, 1.0}}), 1.0);
}

TEST(Fidelity, HandValues) {
  const DegreeDistribution p{{0.5, 0.5}};
  const DegreeDistribution q{{1.0}};
  EXPECT_NEAR(sfn::fidelity(p, q), std::sqrt(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(sfn::fidelity(DegreeDistribution{{1.0}}, DegreeDistribution{{0.0, 1.0}}), 0.0);
}

TEST(Metrics, AxiomsOnRandomPairs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10'000; ++trial) {
    const auto p = random_distribution(rng);
    const auto q = random_distribution(rng);
    const auto r = random_distribution(rng);
    const double pq = sfn::trace_distance(p, q);
    ASSERT_GE(pq, 0.0);
    ASSERT_LE(pq, 1.0);
    ASSERT_EQ(pq, sfn::trace_distance(q, p));
    ASSERT_LE(pq, sfn::trace_distance(p, r) + sfn::trace_distance(r, q) + 1e-12);
    ASSERT_EQ(sfn::trace_distance(p, p), 0.0);
    const double f = sfn::fidelity(p, q);
    ASSERT_GE(f, 0.0);
    ASSERT_LE(f, 1.0);
    // Fuchs-van de Graaf bounds tie the two measures together.
    ASSERT_LE(1.0 - f, pq + 1e-12);
    ASSERT_LE(pq, std::sqrt(std::max(0.0, 1.0 - f * f)) + 1e-12);
  }
}

TEST(Metrics, SelfComparisonIsExact) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_distribution(rng);
    EXPECT_EQ(sfn::trace_distance(p, p), 0.0);
    EXPECT_EQ(sfn::fidelity(p, p), 1.0);
  }
}

TEST(CompareToPowerLaw, PadsTheoryWithExactPmf) {
  const sfn::PowerLaw law(sfn::PowerLawParams{});
  const DegreeDistribution emp{{0.8, 0.1, 0.1}};
  const auto theory = sfn::theory_on_support(law, emp);
  ASSERT_EQ(theory.support_max(), 3u);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_DOUBLE_EQ(theory.at(k), law.pmf(k));
  const auto fit = sfn::compare_to_power_law(emp, law);
  double manual = 0.0;
  for (std::size_t k = 1; k <= 3; ++k) manual += std::abs(emp.at(k) - law.pmf(k));
  EXPECT_NEAR(fit.trace_distance, manual / 2, 1e-15);
}

TEST(CompareToPowerLaw, DegreeZeroNodesDiluteTheFit) {
  sfn::Graph g(4);
  g.add_edge(1, 2);
  const sfn::PowerLaw law(sfn::PowerLawParams{});
  const auto fit = sfn::compare_to_power_law(sfn::empirical_degree_distribution(g), law);
  EXPECT_NEAR(fit.trace_distance, std::abs(0.5 - law.pmf(1)) / 2, 1e-15);
}

}  // namespace
