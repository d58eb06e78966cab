#pragma once

// Distances between discrete degree distributions.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "sfn/powerlaw.hpp"

namespace sfn {

/// 1/2 * sum_k |p(k) - q(k)| over the union of both supports; a shorter
/// distribution reads as zero past its end.
inline double trace_distance(const DegreeDistribution& p, const DegreeDistribution& q) {
  const std::size_t n = std::max(p.support_max(), q.support_max());
  long double sum = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) sum += std::abs(p.at(k) - q.at(k));
  return std::clamp(static_cast<double>(0.5L * sum), 0.0, 1.0);
}

namespace detail {

/// Mass of a distribution when it is normalized up to rounding, else 1.
inline long double rounding_mass(const DegreeDistribution& d) {
  long double m = 0.0L;
  for (double p : d.probs) m += p;
  return std::abs(m - 1.0L) <= 1e-9L ? m : 1.0L;
}

}  // namespace detail

/// sum_k sqrt(p(k) q(k)). Inputs whose mass is 1 up to rounding are
/// renormalized first, so fidelity(p, p) is exactly 1; truncated inputs
/// are used as given.
inline double fidelity(const DegreeDistribution& p, const DegreeDistribution& q) {
  const std::size_t n = std::min(p.support_max(), q.support_max());
  long double sum = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    sum += std::sqrt(static_cast<long double>(p.at(k)) * static_cast<long double>(q.at(k)));
  }
  sum /= std::sqrt(detail::rounding_mass(p) * detail::rounding_mass(q));
  return std::clamp(static_cast<double>(sum), 0.0, 1.0);
}

/// Theoretical pmf on the empirical support (at least 1..k_min), so the
/// comparison pads the theoretical side with exact pmf values.
inline DegreeDistribution theory_on_support(const PowerLaw& law, const DegreeDistribution& empirical) {
  const std::size_t support =
      std::max<std::size_t>(empirical.support_max(), static_cast<std::size_t>(law.params().k_min));
  return law.truncated(support);
}

struct FitSummary {
  double trace_distance = 0.0;
  double fidelity = 0.0;
};

inline FitSummary compare_to_power_law(const DegreeDistribution& empirical, const PowerLaw& law) {
  const DegreeDistribution theory = theory_on_support(law, empirical);
  return {trace_distance(empirical, theory), fidelity(empirical, theory)};
}

}  // namespace sfn
