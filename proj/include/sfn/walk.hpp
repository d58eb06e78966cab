#pragma once

// Metropolis-Hastings machinery: acceptance rules, explicit transition
// matrices and the degree-biased walk over a graph.

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sfn/graph.hpp"
#include "sfn/log.hpp"

namespace sfn {

inline constexpr double kStochasticTolerance = 1e-9;
/// Largest state count for which explicit matrices are built.
inline constexpr std::size_t kMaxExplicitStates = 10'000;

namespace detail {

inline void check_positive(double pi_i, double pi_j) {
  if (!(pi_i > 0.0) || !(pi_j > 0.0)) {
    throw std::domain_error("acceptance: target probabilities must be positive");
  }
}

}  // namespace detail

/// min(1, pi_j / pi_i).
inline double metropolis_accept(double pi_i, double pi_j) {
  detail::check_positive(pi_i, pi_j);
  const double ratio = pi_j / pi_i;
  return ratio >= 1.0 ? 1.0 : ratio;
}

/// pi_j / (pi_i + pi_j).
inline double baker_accept(double pi_i, double pi_j) {
  detail::check_positive(pi_i, pi_j);
  return pi_j / (pi_i + pi_j);
}

enum class AcceptanceRule { metropolis, baker };

inline double accept(AcceptanceRule rule, double pi_i, double pi_j) {
  return rule == AcceptanceRule::metropolis ? metropolis_accept(pi_i, pi_j) : baker_accept(pi_i, pi_j);
}

/// Row-stochastic transition matrix over states 0..S with its target
/// (stationary) distribution.
class MarkovChain {
 public:
  MarkovChain(Eigen::MatrixXd transition, Eigen::VectorXd target)
      : transition_(std::move(transition)), target_(std::move(target)) {
    if (transition_.rows() != transition_.cols() || transition_.rows() != target_.size()) {
      throw std::invalid_argument("MarkovChain: dimension mismatch");
    }
    if (transition_.minCoeff() < -kStochasticTolerance) {
      throw std::invalid_argument("MarkovChain: negative transition probability");
    }
    for (Eigen::Index i = 0; i < transition_.rows(); ++i) {
      if (std::abs(transition_.row(i).sum() - 1.0) > kStochasticTolerance) {
        throw std::invalid_argument("MarkovChain: row " + std::to_string(i) + " does not sum to 1");
      }
    }
  }

  [[nodiscard]] std::size_t n_states() const { return static_cast<std::size_t>(transition_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& transition() const { return transition_; }
  [[nodiscard]] const Eigen::VectorXd& target() const { return target_; }
  [[nodiscard]] double p(std::size_t i, std::size_t j) const {
    return transition_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Eigen::MatrixXd transition_;
  Eigen::VectorXd target_;
};

/// Stationary distribution of a row-stochastic matrix, solving
/// pi (P - I) = 0 with sum(pi) = 1. Unique for irreducible chains.
inline Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);
  for (Eigen::Index i = 0; i < n; ++i) pi(i) = std::max(pi(i), 0.0);
  return pi / pi.sum();
}

/// p_ij = q_ij * alpha_ij for i != j, p_ii = 1 - sum_{j != i} p_ij.
inline MarkovChain build_chain(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi, AcceptanceRule rule) {
  const Eigen::Index n = q.rows();
  if (q.cols() != n || pi.size() != n) throw std::invalid_argument("build_chain: dimension mismatch");
  if (static_cast<std::size_t>(n) > kMaxExplicitStates) throw std::length_error("build_chain: too many states");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(pi(i) > 0.0)) throw std::domain_error("build_chain: target must be strictly positive");
    if (std::abs(q.row(i).sum() - 1.0) > kStochasticTolerance || q.row(i).minCoeff() < 0.0) {
      throw std::invalid_argument("build_chain: proposal row " + std::to_string(i) + " is not stochastic");
    }
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || q(i, j) == 0.0) continue;
      p(i, j) = q(i, j) * accept(rule, pi(i), pi(j));
      off += p(i, j);
    }
    p(i, i) = 1.0 - off;
    if (p(i, i) < -kStochasticTolerance) throw std::logic_error("build_chain: negative diagonal");
    p(i, i) = std::max(p(i, i), 0.0);
  }
  return MarkovChain(std::move(p), pi / pi.sum());
}

/// Poisson(lambda) probabilities on 0..max_state, renormalized.
inline Eigen::VectorXd truncated_poisson(double lambda, std::size_t max_state) {
  if (!(lambda > 0.0)) throw std::domain_error("truncated_poisson: lambda must be positive");
  Eigen::VectorXd pi(static_cast<Eigen::Index>(max_state + 1));
  double term = std::exp(-lambda);
  for (std::size_t i = 0; i <= max_state; ++i) {
    pi(static_cast<Eigen::Index>(i)) = term;
    term *= lambda / static_cast<double>(i + 1);
  }
  return pi / pi.sum();
}

/// Birth-death proposal on 0..max_state: q_{i,i+1} = q_{i,i-1} = 1/2 for
/// i > 0 and q_00 = q_01 = 1/2. The top state proposes itself instead of
/// leaving the truncated range.
inline Eigen::MatrixXd birth_death_proposal(std::size_t max_state) {
  const auto n = static_cast<Eigen::Index>(max_state + 1);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  q(0, 0) = 0.5;
  q(0, std::min<Eigen::Index>(1, n - 1)) += 0.5;
  for (Eigen::Index i = 1; i < n; ++i) {
    q(i, i - 1) = 0.5;
    q(i, i + 1 < n ? i + 1 : i) += 0.5;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Degree-biased walk on a graph

/// One row of the degree-biased transition matrix, computed on the fly.
struct SparseRow {
  std::vector<NodeId> targets;  // neighbors followed by the node itself
  std::vector<double> probs;
  /// 1 - (row sum before renormalization).
  double residual = 0.0;
};

/// Off-diagonal entry for an edge (i, j):
/// (1/k_i) * min{ (1/j)^(1/(gamma-1)) * k_i / k_j, 1 }.
inline double degree_bias_entry(const Graph& g, NodeId i, NodeId j, double gamma) {
  const double ki = static_cast<double>(g.degree(i));
  const double kj = static_cast<double>(g.degree(j));
  const double bias = std::pow(1.0 / static_cast<double>(j), 1.0 / (gamma - 1.0));
  return std::min(bias * ki / kj, 1.0) / ki;
}

/// Row i: off-diagonals per edge, diagonal 1 - (1/k_i) sum_{(l,i) in E} p_li,
/// then clamped at zero and renormalized to sum to 1.
inline SparseRow degree_bias_row(const Graph& g, NodeId i, double gamma) {
  if (!(gamma > 1.0)) throw std::domain_error("degree_bias_row: gamma must exceed 1");
  const auto nbrs = g.neighbors(i);
  if (nbrs.empty()) throw std::invalid_argument("degree_bias_row: node " + std::to_string(i) + " is isolated");
  SparseRow row;
  row.targets.assign(nbrs.begin(), nbrs.end());
  row.targets.push_back(i);
  double off = 0.0;
  double incoming = 0.0;
  for (NodeId j : nbrs) {
    const double pij = degree_bias_entry(g, i, j, gamma);
    row.probs.push_back(pij);
    off += pij;
    incoming += degree_bias_entry(g, j, i, gamma);
  }
  const double diag = std::max(0.0, 1.0 - incoming / static_cast<double>(nbrs.size()));
  row.probs.push_back(diag);
  const double total = off + diag;
  row.residual = 1.0 - total;
  for (double& p : row.probs) p /= total;
  return row;
}

class DisconnectedGraph : public std::invalid_argument {
 public:
  explicit DisconnectedGraph(std::vector<std::vector<NodeId>> components)
      : std::invalid_argument(describe(components)), components_(std::move(components)) {}

  [[nodiscard]] const std::vector<std::vector<NodeId>>& components() const { return components_; }

 private:
  static std::string describe(const std::vector<std::vector<NodeId>>& comps) {
    std::string msg = "graph is disconnected into " + std::to_string(comps.size()) + " components:";
    for (const auto& c : comps) {
      msg += " {";
      for (std::size_t k = 0; k < c.size() && k < 8; ++k) msg += (k ? "," : "") + std::to_string(c[k]);
      if (c.size() > 8) msg += ",...";
      msg += "}";
    }
    return msg;
  }

  std::vector<std::vector<NodeId>> components_;
};

struct DegreeBiasChain {
  /// State s corresponds to node id s + 1.
  MarkovChain chain;
  /// Largest |1 - row sum| before renormalization.
  double max_residual = 0.0;
};

/// Explicit degree-biased transition matrix of a connected graph. The target
/// is the chain's stationary distribution.
inline DegreeBiasChain degree_bias_matrix(const Graph& g, double gamma) {
  const std::size_t n = g.node_count();
  if (n > kMaxExplicitStates) throw std::length_error("degree_bias_matrix: graph too large for an explicit matrix");
  auto comps = connected_components(g);
  if (comps.size() != 1) throw DisconnectedGraph(std::move(comps));

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double worst = 0.0;
  if (n == 1) {
    p(0, 0) = 1.0;
  } else {
    for (NodeId i = 1; i <= n; ++i) {
      const SparseRow row = degree_bias_row(g, i, gamma);
      for (std::size_t k = 0; k < row.targets.size(); ++k) p(i - 1, row.targets[k] - 1) += row.probs[k];
      worst = std::max(worst, std::abs(row.residual));
    }
  }
  if (worst > kStochasticTolerance) {
    logger()->info("degree_bias_matrix: rows renormalized, max residual {:.3e}", worst);
  }
  Eigen::VectorXd pi = stationary_distribution(p);
  return {MarkovChain(std::move(p), std::move(pi)), worst};
}

/// Draws the next state from row `state`.
template <class Rng>
std::size_t walk_step(const MarkovChain& chain, std::size_t state, Rng& rng) {
  if (state >= chain.n_states()) throw std::out_of_range("walk_step: invalid state");
  const auto row = chain.transition().row(static_cast<Eigen::Index>(state));
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last_positive = state;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row(j) <= 0.0) continue;
    acc += row(j);
    last_positive = static_cast<std::size_t>(j);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

/// walk_step without an explicit matrix, for graphs of any size.
template <class Rng>
NodeId walk_step(const Graph& g, NodeId node, double gamma, Rng& rng) {
  const SparseRow row = degree_bias_row(g, node, gamma);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < row.targets.size(); ++k) {
    acc += row.probs[k];
    if (u < acc) return row.targets[k];
  }
  return row.targets.back();
}

}  // namespace sfn
