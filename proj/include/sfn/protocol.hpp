#pragma once

// Asynchronous clustering protocol. Cores flood Type 1 (cluster initiation)
// messages; service nodes keep the shortest offer per core in a temporary
// table and, when their timer expires, send a Type 2 (join) request back
// along the recorded path to the nearest core.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfn/graph.hpp"
#include "sfn/log.hpp"
#include "sfn/simnet.hpp"

namespace sfn {

/// Synthetic network address for a node id (10.x.y.z).
inline std::string net_address(NodeId id) {
  return "10." + std::to_string((id >> 16) & 0xFF) + "." + std::to_string((id >> 8) & 0xFF) + "." +
         std::to_string(id & 0xFF);
}

struct NodeRef {
  NodeId id = 0;
  std::string address;

  static NodeRef of(NodeId id) { return {id, net_address(id)}; }
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

enum class MessageType { type1, type2 };

struct ProtocolMessage {
  MessageType type = MessageType::type1;
  /// Type 1: the initiating core. Type 2: the requesting service node.
  NodeRef origin;
  /// Type 2 only: the core being joined.
  NodeId core = 0;
  /// Nodes between the core and the receiver (Type 1) or the service
  /// (Type 2), listed from the core side, both ends excluded.
  std::vector<NodeId> path;
  std::uint32_t hop_cnt = 1;
  /// Type 2 only: hops already travelled on the way back.
  std::size_t route_pos = 0;

  [[nodiscard]] std::string_view type_name() const { return type == MessageType::type1 ? "type1" : "type2"; }
  [[nodiscard]] std::int64_t hop_count() const { return hop_cnt; }

  /// Type 2 route: the path reversed, then the core.
  [[nodiscard]] NodeId route_hop(std::size_t pos) const {
    return pos < path.size() ? path[path.size() - 1 - pos] : core;
  }
};

struct Outgoing {
  NodeId to = 0;
  ProtocolMessage msg;
};

struct TempEntry {
  NodeId via = 0;
  std::uint32_t hop_cnt = 0;
  std::vector<NodeId> path;
};

struct ServiceNodeState {
  NodeId id = 0;
  std::vector<NodeRef> neighbors;
  std::map<NodeId, TempEntry> temp_tab;
  std::optional<NodeId> committed;
  bool isolated = false;
  /// Set when the node has taken its decision and stopped processing Type 1.
  bool stopped = false;
  std::size_t threshold = 0;

  [[nodiscard]] std::size_t degree() const { return neighbors.size(); }
};

struct ClusterEntry {
  NodeRef service;
  std::uint32_t hop_cnt = 0;
  std::vector<NodeId> path;
};

struct CoreNodeState {
  NodeId id = 0;
  std::vector<NodeRef> neighbors;
  std::map<NodeId, ClusterEntry> cluster_tab;
  std::set<NodeId> core_tab;
  /// Shortest hop count seen per foreign core, for relaying its Type 1.
  std::map<NodeId, std::uint32_t> relay_best;
};

namespace detail {

inline std::vector<Outgoing> flood(const std::vector<NodeRef>& neighbors, NodeId self, NodeId except,
                                   const ProtocolMessage& incoming, std::size_t d_max) {
  std::vector<Outgoing> out;
  if (incoming.hop_cnt + 1 > d_max) return out;
  ProtocolMessage next = incoming;
  next.hop_cnt = incoming.hop_cnt + 1;
  next.path.push_back(self);
  for (const NodeRef& n : neighbors) {
    if (n.id != except) out.push_back({n.id, next});
  }
  return out;
}

}  // namespace detail

/// Keeps the shortest offer per core and re-floods improvements to every
/// neighbor except the sender. Offers that are not shorter are dropped.
inline std::vector<Outgoing> on_type1(ServiceNodeState& state, const ProtocolMessage& msg, NodeId from,
                                      std::size_t d_max = kDefaultDMax) {
  if (state.stopped || msg.hop_cnt > d_max) return {};
  const NodeId core = msg.origin.id;
  const auto it = state.temp_tab.find(core);
  if (it != state.temp_tab.end() && msg.hop_cnt >= it->second.hop_cnt) return {};
  state.temp_tab[core] = TempEntry{from, msg.hop_cnt, msg.path};
  return detail::flood(state.neighbors, state.id, from, msg, d_max);
}

/// Entry with the smallest hop count, ties to the lowest core id.
inline std::optional<std::pair<NodeId, TempEntry>> nearest_core(const ServiceNodeState& state) {
  std::optional<std::pair<NodeId, TempEntry>> best;
  for (const auto& [core, entry] : state.temp_tab) {
    if (!best || entry.hop_cnt < best->second.hop_cnt) best = std::make_pair(core, entry);
  }
  return best;
}

inline Outgoing make_join(const ServiceNodeState& state, NodeId core, const TempEntry& entry) {
  ProtocolMessage msg;
  msg.type = MessageType::type2;
  msg.origin = NodeRef::of(state.id);
  msg.core = core;
  msg.path = entry.path;
  msg.hop_cnt = entry.hop_cnt;
  msg.route_pos = 0;
  return {msg.route_hop(0), std::move(msg)};
}

/// Decision at timer expiry: commit to the nearest core and emit a Type 2,
/// or become isolated when nothing was heard. No-op once committed.
inline std::optional<Outgoing> on_timer(ServiceNodeState& state) {
  if (state.committed || state.isolated) return std::nullopt;
  state.stopped = true;
  const auto best = nearest_core(state);
  if (!best) {
    state.isolated = true;
    return std::nullopt;
  }
  state.committed = best->first;
  return make_join(state, best->first, best->second);
}

/// A degree-one node whose only neighbor is a core cannot be offered a
/// shorter path, so it commits as soon as that core's Type 1 arrives.
inline std::optional<Outgoing> try_early_commit(ServiceNodeState& state) {
  if (state.committed || state.degree() != 1) return std::nullopt;
  const auto best = nearest_core(state);
  if (!best || best->second.hop_cnt != 1) return std::nullopt;
  state.committed = best->first;
  state.stopped = true;
  return make_join(state, best->first, best->second);
}

/// Records a join request. A repeated request from the same service
/// overwrites the earlier entry.
inline void on_type2(CoreNodeState& state, const ProtocolMessage& msg) {
  if (msg.core != state.id) throw std::invalid_argument("on_type2: message addressed to another core");
  const auto [it, inserted] =
      state.cluster_tab.insert_or_assign(msg.origin.id, ClusterEntry{msg.origin, msg.hop_cnt, msg.path});
  if (!inserted) logger()->warn("core {}: duplicate join from service {}, overwritten", state.id, msg.origin.id);
}

/// Notes the originating core in core_tab and relays the offer onward so
/// service nodes behind this core still learn about it.
inline std::vector<Outgoing> on_core_type1(CoreNodeState& state, const ProtocolMessage& msg, NodeId from,
                                           std::size_t d_max = kDefaultDMax) {
  const NodeId origin = msg.origin.id;
  if (origin == state.id || msg.hop_cnt > d_max) return {};
  state.core_tab.insert(origin);
  const auto it = state.relay_best.find(origin);
  if (it != state.relay_best.end() && msg.hop_cnt >= it->second) return {};
  state.relay_best[origin] = msg.hop_cnt;
  return detail::flood(state.neighbors, state.id, from, msg, d_max);
}

// ---------------------------------------------------------------------------
// Running the protocol on the simulated network

struct ProtocolConfig {
  SimTime tau_end = 60.0;
  std::size_t d_max = kDefaultDMax;
  std::size_t max_events = 50'000'000;
};

/// Smallest tau_end for which every service hears every core within d_max
/// before deciding: max delay * 2 * d_max.
inline SimTime sufficient_tau_end(const DelayModel& delays, std::size_t d_max) {
  return delays.max_delay() * 2.0 * static_cast<double>(d_max);
}

struct ClusteringOutcome {
  std::map<NodeId, CoreNodeState> cores;
  std::map<NodeId, ServiceNodeState> services;
  std::vector<TraceRecord> trace;
  std::vector<NodeId> isolated;
  std::size_t type1_deliveries = 0;
  std::size_t type2_deliveries = 0;
  std::size_t threshold = 0;
  ProtocolConfig config;

  /// Cluster sizes in core-id order.
  [[nodiscard]] std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes;
    for (const auto& [id, core] : cores) sizes.push_back(core.cluster_tab.size());
    return sizes;
  }
};

namespace detail {

class ProtocolDriver {
 public:
  ProtocolDriver(ClusteringOutcome& out, std::size_t d_max) : out_(out), d_max_(d_max) {}

  void on_deliver(Network<ProtocolMessage>& net, NodeId from, NodeId to, const ProtocolMessage& msg) {
    if (msg.type == MessageType::type1) {
      ++out_.type1_deliveries;
      if (auto core = out_.cores.find(to); core != out_.cores.end()) {
        send_all(net, to, on_core_type1(core->second, msg, from, d_max_));
        return;
      }
      ServiceNodeState& s = out_.services.at(to);
      send_all(net, to, on_type1(s, msg, from, d_max_));
      if (auto join = try_early_commit(s)) send_one(net, to, std::move(*join));
      return;
    }
    ++out_.type2_deliveries;
    if (to == msg.core) {
      on_type2(out_.cores.at(to), msg);
      return;
    }
    ProtocolMessage relay = msg;
    ++relay.route_pos;
    const NodeId next = relay.route_hop(relay.route_pos);
    net.send(to, next, std::move(relay));
  }

  void on_timer(Network<ProtocolMessage>& net, NodeId node) {
    auto it = out_.services.find(node);
    if (it == out_.services.end()) return;
    if (auto join = on_timer_decision(it->second)) send_one(net, node, std::move(*join));
  }

 private:
  static std::optional<Outgoing> on_timer_decision(ServiceNodeState& s) { return sfn::on_timer(s); }

  static void send_all(Network<ProtocolMessage>& net, NodeId from, std::vector<Outgoing> msgs) {
    for (auto& m : msgs) net.send(from, m.to, std::move(m.msg));
  }
  static void send_one(Network<ProtocolMessage>& net, NodeId from, Outgoing m) {
    net.send(from, m.to, std::move(m.msg));
  }

  ClusteringOutcome& out_;
  std::size_t d_max_;
};

}  // namespace detail

/// Runs one clustering round to quiescence: every node arms its tau_end
/// timer at t=0 and every core floods a Type 1 with hop count 1.
inline ClusteringOutcome start_round(const Graph& g, const CorePartition& part, DelayModel delays,
                                     const ProtocolConfig& config) {
  if (part.core_ids.empty()) {
    throw std::invalid_argument("start_round: no core nodes at threshold T=" + std::to_string(part.threshold) +
                                " (max degree " + std::to_string(g.max_degree()) + ")");
  }
  if (!(config.tau_end > 0.0)) throw std::invalid_argument("start_round: tau_end must be positive");

  ClusteringOutcome out;
  out.threshold = part.threshold;
  out.config = config;
  auto neighbor_refs = [&](NodeId id) {
    std::vector<NodeRef> refs;
    for (NodeId n : g.neighbors(id)) refs.push_back(NodeRef::of(n));
    return refs;
  };
  for (NodeId c : part.core_ids) out.cores[c] = CoreNodeState{c, neighbor_refs(c), {}, {}, {}};
  for (NodeId s : part.server_ids) {
    ServiceNodeState st;
    st.id = s;
    st.neighbors = neighbor_refs(s);
    st.threshold = part.threshold;
    out.services.emplace(s, std::move(st));
  }

  Network<ProtocolMessage> net(g, std::move(delays));
  for (NodeId i = 1; i <= g.node_count(); ++i) net.set_timer(i, config.tau_end);
  for (NodeId c : part.core_ids) {
    ProtocolMessage m;
    m.type = MessageType::type1;
    m.origin = NodeRef::of(c);
    m.hop_cnt = 1;
    for (NodeId n : g.neighbors(c)) net.send(c, n, m);
  }

  detail::ProtocolDriver driver(out, config.d_max);
  out.trace = net.run(driver, RunLimits{.max_events = config.max_events});
  for (const auto& [id, s] : out.services) {
    if (s.isolated) out.isolated.push_back(id);
  }
  return out;
}

/// {cores: [{id, address, cluster: [...], core_tab: [...]}], isolated: [...], params}
inline nlohmann::ordered_json to_json(const ClusteringOutcome& out) {
  using nlohmann::ordered_json;
  ordered_json cores = ordered_json::array();
  for (const auto& [id, core] : out.cores) {
    ordered_json cluster = ordered_json::array();
    for (const auto& [sid, entry] : core.cluster_tab) {
      cluster.push_back({{"id", sid}, {"address", entry.service.address}, {"hop_cnt", entry.hop_cnt},
                         {"path", entry.path}});
    }
    cores.push_back({{"id", id}, {"address", net_address(id)}, {"cluster", std::move(cluster)},
                     {"core_tab", std::vector<NodeId>(core.core_tab.begin(), core.core_tab.end())}});
  }
  ordered_json params = {{"threshold", out.threshold},
                         {"tau_end", out.config.tau_end},
                         {"d_max", out.config.d_max}};
  return {{"cores", std::move(cores)}, {"isolated", out.isolated}, {"params", std::move(params)}};
}

}  // namespace sfn
