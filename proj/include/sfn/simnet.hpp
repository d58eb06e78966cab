#pragma once

// Deterministic discrete-event network: messages travel over graph edges with
// configurable delays, nodes own one resettable timer each.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfn/graph.hpp"

namespace sfn {

using SimTime = double;

class DelayModel {
 public:
  enum class Kind { fixed, uniform };

  static DelayModel fixed(double delay) {
    if (!(delay > 0.0)) throw std::invalid_argument("DelayModel: delays must be positive");
    return DelayModel(Kind::fixed, delay, delay, 0);
  }

  static DelayModel uniform(double lo, double hi, std::uint64_t seed) {
    if (!(lo > 0.0) || hi < lo) throw std::invalid_argument("DelayModel: need 0 < lo <= hi");
    return DelayModel(Kind::uniform, lo, hi, seed);
  }

  /// Per-link override applied in both directions.
  DelayModel& with_link(NodeId a, NodeId b, double delay) {
    if (!(delay > 0.0)) throw std::invalid_argument("DelayModel: delays must be positive");
    links_[edge_key(a, b)] = delay;
    return *this;
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }

  /// Upper bound on any delay this model can produce.
  [[nodiscard]] double max_delay() const {
    double worst = hi_;
    for (const auto& [key, d] : links_) worst = std::max(worst, d);
    return worst;
  }

  double draw(NodeId from, NodeId to) {
    if (const auto it = links_.find(edge_key(from, to)); it != links_.end()) return it->second;
    if (kind_ == Kind::fixed) return lo_;
    return std::uniform_real_distribution<double>(lo_, hi_)(rng_);
  }

 private:
  DelayModel(Kind kind, double lo, double hi, std::uint64_t seed) : kind_(kind), lo_(lo), hi_(hi), rng_(seed) {}

  Kind kind_;
  double lo_;
  double hi_;
  std::mt19937_64 rng_;
  std::map<std::uint64_t, double> links_;
};

enum class EventKind { deliver, timer };

inline std::string_view to_string(EventKind kind) { return kind == EventKind::deliver ? "deliver" : "timer"; }

template <class Payload>
struct SimEvent {
  SimTime fire_time = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::deliver;
  NodeId from = 0;
  NodeId to = 0;
  std::optional<Payload> payload;
  std::uint64_t timer_generation = 0;
};

/// One processed event, as exported to line-delimited JSON.
struct TraceRecord {
  SimTime t = 0.0;
  EventKind kind = EventKind::deliver;
  NodeId from = 0;
  NodeId to = 0;
  std::string msg_type;
  std::optional<std::int64_t> hop_cnt;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

template <class P>
concept TracePayload = requires(const P& p) {
  { p.type_name() } -> std::convertible_to<std::string_view>;
  { p.hop_count() } -> std::convertible_to<std::int64_t>;
};

class RunawaySimulation : public std::runtime_error {
 public:
  explicit RunawaySimulation(std::size_t cap)
      : std::runtime_error("simulation exceeded the event cap of " + std::to_string(cap)) {}
};

struct RunLimits {
  SimTime until = std::numeric_limits<SimTime>::infinity();
  std::size_t max_events = 50'000'000;
};

template <TracePayload Payload>
class Network {
 public:
  using Event = SimEvent<Payload>;

  Network(const Graph& graph, DelayModel delays) : graph_(&graph), delays_(std::move(delays)) {}

  [[nodiscard]] SimTime now() const { return clock_; }
  [[nodiscard]] const Graph& graph() const { return *graph_; }
  [[nodiscard]] const std::vector<TraceRecord>& trace() const { return trace_; }
  [[nodiscard]] bool idle() const { return queue_.empty(); }

  /// Schedules delivery at now + delay(from, to). Only neighbors can talk.
  Event send(NodeId from, NodeId to, Payload payload) {
    if (!graph_->has_edge(from, to)) {
      throw std::invalid_argument("send: nodes " + std::to_string(from) + " and " + std::to_string(to) +
                                  " are not adjacent");
    }
    Event ev;
    ev.fire_time = clock_ + delays_.draw(from, to);
    ev.sequence = next_sequence_++;
    ev.kind = EventKind::deliver;
    ev.from = from;
    ev.to = to;
    ev.payload = std::move(payload);
    queue_.push(ev);
    return ev;
  }

  /// (Re)arms the node's timer; any pending expiry for it is discarded.
  Event set_timer(NodeId node, SimTime duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("set_timer: duration must be positive");
    if (!graph_->valid(node)) throw std::out_of_range("set_timer: invalid node");
    Event ev;
    ev.fire_time = clock_ + duration;
    ev.sequence = next_sequence_++;
    ev.kind = EventKind::timer;
    ev.from = node;
    ev.to = node;
    ev.timer_generation = ++timer_generation_[node];
    queue_.push(ev);
    return ev;
  }

  void cancel_timer(NodeId node) { ++timer_generation_[node]; }

  /// Processes events in (fire_time, sequence) order until the queue drains
  /// or the next event lies beyond `limits.until`. Handler needs
  /// on_deliver(Network&, NodeId from, NodeId to, const Payload&) and
  /// on_timer(Network&, NodeId).
  template <class Handler>
  const std::vector<TraceRecord>& run(Handler& handler, RunLimits limits = {}) {
    while (!queue_.empty()) {
      if (queue_.top().fire_time > limits.until) break;
      Event ev = queue_.top();
      queue_.pop();
      if (ev.kind == EventKind::timer && ev.timer_generation != timer_generation_[ev.to]) continue;
      if (ev.fire_time < clock_) throw std::logic_error("simulation clock moved backwards");
      if (++processed_ > limits.max_events) throw RunawaySimulation(limits.max_events);
      clock_ = ev.fire_time;

      TraceRecord rec{clock_, ev.kind, ev.from, ev.to, {}, std::nullopt};
      if (ev.kind == EventKind::deliver) {
        rec.msg_type = std::string(ev.payload->type_name());
        rec.hop_cnt = static_cast<std::int64_t>(ev.payload->hop_count());
      }
      trace_.push_back(std::move(rec));

      if (ev.kind == EventKind::deliver) {
        handler.on_deliver(*this, ev.from, ev.to, *ev.payload);
      } else {
        handler.on_timer(*this, ev.to);
      }
    }
    return trace_;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.sequence > b.sequence;
    }
  };

  const Graph* graph_;
  DelayModel delays_;
  SimTime clock_ = 0.0;
  std::uint64_t next_sequence_ = 0;
  std::size_t processed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_map<NodeId, std::uint64_t> timer_generation_;
  std::vector<TraceRecord> trace_;
};

inline nlohmann::ordered_json to_json(const TraceRecord& rec) {
  nlohmann::ordered_json j;
  j["t"] = rec.t;
  j["kind"] = to_string(rec.kind);
  j["from"] = rec.from;
  j["to"] = rec.to;
  j["msg_type"] = rec.msg_type.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(rec.msg_type);
  j["hop_cnt"] = rec.hop_cnt ? nlohmann::ordered_json(*rec.hop_cnt) : nlohmann::ordered_json(nullptr);
  return j;
}

/// One JSON object per line: {t, kind, from, to, msg_type, hop_cnt}.
inline void write_trace_jsonl(std::ostream& out, const std::vector<TraceRecord>& trace) {
  for (const auto& rec : trace) out << to_json(rec).dump() << '\n';
}

}  // namespace sfn
