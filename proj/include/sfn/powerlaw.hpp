#pragma once

// Discrete power-law degree distribution p(k) = k^-gamma / zeta(gamma, k_min).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfn/log.hpp"

namespace sfn {

struct PowerLawParams {
  double gamma = 2.5;
  std::uint64_t k_min = 1;
  std::uint64_t zeta_terms = 10'000'000;
  /// Adds the Euler-Maclaurin remainder of the truncated series.
  bool tail_correction = false;
};

inline void validate(const PowerLawParams& params) {
  if (!(params.gamma > 1.0)) {
    throw std::domain_error("power law: gamma must exceed 1 for the zeta series to converge (got " +
                            std::to_string(params.gamma) + ")");
  }
  if (params.k_min < 1) throw std::domain_error("power law: k_min must be >= 1");
  if (params.zeta_terms < 1) throw std::domain_error("power law: zeta_terms must be >= 1");
  if (params.gamma < 2.0 || params.gamma > 3.0) {
    logger()->warn("power law exponent {} outside the usual [2, 3] range", params.gamma);
  }
}

/// Truncated Hurwitz zeta: sum_{n=0}^{terms-1} (k_min + n)^-gamma.
///
/// The forward sum is accumulated in long double, so the result is
/// nondecreasing in `terms`. With `tail_correction` the remainder
/// sum_{n>=terms} is approximated by the first Euler-Maclaurin terms.
inline double hurwitz_zeta(double gamma, std::uint64_t k_min, std::uint64_t terms,
                           bool tail_correction = false) {
  if (!(gamma > 1.0)) {
    throw std::domain_error("hurwitz_zeta: divergent series, gamma must exceed 1 (got " +
                            std::to_string(gamma) + ")");
  }
  if (terms < 1) throw std::domain_error("hurwitz_zeta: terms must be >= 1");
  if (k_min < 1) throw std::domain_error("hurwitz_zeta: k_min must be >= 1");

  const long double s = gamma;
  long double sum = 0.0L;
  for (std::uint64_t n = 0; n < terms; ++n) {
    sum += std::pow(static_cast<double>(k_min + n), -gamma);
  }
  if (tail_correction) {
    const long double a = static_cast<long double>(k_min + terms);
    sum += std::pow(a, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(a, -s) +
           s * std::pow(a, -s - 1.0L) / 12.0L;
  }
  return static_cast<double>(sum);
}

/// A discrete pmf over degrees 1..support_max. probs[k-1] holds p(k).
struct DegreeDistribution {
  std::vector<double> probs;

  [[nodiscard]] std::size_t support_max() const { return probs.size(); }
  [[nodiscard]] double at(std::size_t k) const {
    return (k >= 1 && k <= probs.size()) ? probs[k - 1] : 0.0;
  }
  [[nodiscard]] double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

/// Power law with its normalizing constant computed once.
class PowerLaw {
 public:
  explicit PowerLaw(PowerLawParams params)
      : params_(params),
        zeta_((validate(params),
               hurwitz_zeta(params.gamma, params.k_min, params.zeta_terms, params.tail_correction))) {}

  [[nodiscard]] const PowerLawParams& params() const { return params_; }
  [[nodiscard]] double normalizer() const { return zeta_; }

  [[nodiscard]] double pmf(std::uint64_t k) const {
    if (k < params_.k_min) {
      throw std::domain_error("power law pmf: k=" + std::to_string(k) + " below k_min=" +
                              std::to_string(params_.k_min));
    }
    return std::pow(static_cast<double>(k), -params_.gamma) / zeta_;
  }

  [[nodiscard]] double cdf(std::uint64_t k) const {
    if (k < params_.k_min) return 0.0;
    long double acc = 0.0L;
    for (std::uint64_t j = params_.k_min; j <= k; ++j) acc += pmf(j);
    return static_cast<double>(acc);
  }

  /// P(K > k_threshold).
  [[nodiscard]] double tail_prob(std::uint64_t k_threshold) const {
    if (k_threshold < params_.k_min) {
      throw std::domain_error("power law tail_prob: threshold below k_min");
    }
    return 1.0 - cdf(k_threshold);
  }

  /// Entry k-1 holds n_nodes * p(k) for k = 1..k_max (zero below k_min).
  [[nodiscard]] std::vector<double> expected_counts(std::uint64_t n_nodes, std::uint64_t k_max) const {
    if (n_nodes < 1) throw std::domain_error("expected_counts: n_nodes must be >= 1");
    std::vector<double> counts(k_max, 0.0);
    for (std::uint64_t k = params_.k_min; k <= k_max; ++k) {
      counts[k - 1] = static_cast<double>(n_nodes) * pmf(k);
    }
    return counts;
  }

  /// Exact pmf values on 1..support_max; the mass beyond is not included.
  [[nodiscard]] DegreeDistribution truncated(std::size_t support_max) const {
    DegreeDistribution d;
    d.probs.assign(support_max, 0.0);
    for (std::size_t k = params_.k_min; k <= support_max; ++k) d.probs[k - 1] = pmf(k);
    return d;
  }

 private:
  PowerLawParams params_;
  double zeta_;
};

inline double pmf(const PowerLawParams& params, std::uint64_t k) { return PowerLaw(params).pmf(k); }

inline double tail_prob(const PowerLawParams& params, std::uint64_t k_threshold) {
  return PowerLaw(params).tail_prob(k_threshold);
}

inline std::vector<double> expected_counts(const PowerLawParams& params, std::uint64_t n_nodes,
                                           std::uint64_t k_max) {
  return PowerLaw(params).expected_counts(n_nodes, k_max);
}

/// Inverse-CDF sampler on k_min..k_max, renormalized to that window.
class PowerLawSampler {
 public:
  PowerLawSampler(const PowerLaw& law, std::uint64_t k_max) : k_min_(law.params().k_min) {
    if (k_max < k_min_) throw std::domain_error("PowerLawSampler: k_max below k_min");
    cumulative_.reserve(k_max - k_min_ + 1);
    double acc = 0.0;
    for (std::uint64_t k = k_min_; k <= k_max; ++k) {
      acc += law.pmf(k);
      cumulative_.push_back(acc);
    }
    for (double& c : cumulative_) c /= acc;
    cumulative_.back() = 1.0;
  }

  template <class Rng>
  std::uint64_t operator()(Rng& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto offset = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
        it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
    return k_min_ + offset;
  }

 private:
  std::uint64_t k_min_;
  std::vector<double> cumulative_;
};

}  // namespace sfn
