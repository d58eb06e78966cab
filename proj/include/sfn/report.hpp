#pragma once

// Run summary written by every CLI command.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sfn {

struct SizeStats {
  double mean = 0.0;
  /// Population standard deviation.
  double std = 0.0;
  double variance = 0.0;
};

inline SizeStats size_stats(const std::vector<std::size_t>& sizes) {
  SizeStats s;
  if (sizes.empty()) return s;
  const auto n = static_cast<double>(sizes.size());
  s.mean = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0})) / n;
  double ss = 0.0;
  for (std::size_t v : sizes) ss += (static_cast<double>(v) - s.mean) * (static_cast<double>(v) - s.mean);
  s.variance = ss / n;
  s.std = std::sqrt(s.variance);
  return s;
}

struct RunReport {
  std::string command;
  std::string mode;
  std::size_t n = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> edges;
  std::optional<std::uint64_t> iterations;
  std::optional<double> trace_distance;
  std::optional<double> fidelity;
  std::optional<std::size_t> threshold;
  std::optional<std::size_t> n_cores;
  std::vector<std::size_t> cluster_sizes;
  std::optional<std::size_t> isolated;
  std::optional<double> wall_time;
};

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["mode"] = r.mode;
  j["n"] = r.n;
  j["gamma"] = r.gamma;
  j["seed"] = r.seed;
  if (r.edges) j["edges"] = *r.edges;
  if (r.iterations) j["iterations"] = *r.iterations;
  if (r.trace_distance) j["trace_distance"] = *r.trace_distance;
  if (r.fidelity) j["fidelity"] = *r.fidelity;
  if (r.threshold) {
    j["threshold"] = *r.threshold;
    j["n_cores"] = r.n_cores.value_or(0);
    j["cluster_sizes"] = r.cluster_sizes;
    const SizeStats s = size_stats(r.cluster_sizes);
    j["cluster_size_stats"] = {{"mean", s.mean}, {"std", s.std}, {"variance", s.variance}};
    j["isolated"] = r.isolated.value_or(0);
  }
  if (r.wall_time) j["wall_time"] = *r.wall_time;
  return j;
}

}  // namespace sfn
