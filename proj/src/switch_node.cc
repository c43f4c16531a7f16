#include "tsnsim/switch_node.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace tsnsim {

std::string to_string(GroupingMode mode) {
  return mode == GroupingMode::kStandard ? "standard" : "per-stream";
}

GroupingMode parse_grouping_mode(const std::string& text) {
  if (text == "standard") return GroupingMode::kStandard;
  if (text == "per-stream") return GroupingMode::kPerStream;
  throw std::invalid_argument("unknown grouping mode '" + text + "'");
}

std::string to_string(DropCause cause) {
  switch (cause) {
    case DropCause::kShaperMrt: return "shaper-mrt";
    case DropCause::kLossFilter: return "loss-filter";
    case DropCause::kDuplicateEliminated: return "duplicate-eliminated";
    case DropCause::kRecoveryWindow: return "recovery-window";
    case DropCause::kMisconfig: return "misconfig";
  }
  return "unknown";
}

void EgressQueue::push(Frame frame, const SimTime& eligibility,
                       std::uint64_t order) {
  auto& heap = classes_[frame.priority];
  heap.push_back(Entry{eligibility, order, std::move(frame)});
  std::push_heap(heap.begin(), heap.end(), Later{});
  ++size_;
}

EgressQueue::Selection EgressQueue::select_next_transmission(
    const SimTime& now) {
  Selection out;
  for (auto& [priority, heap] : classes_) {
    if (heap.empty()) continue;
    const Entry& head = heap.front();
    if (head.eligibility <= now) {
      std::pop_heap(heap.begin(), heap.end(), Later{});
      out.frame = std::move(heap.back().frame);
      heap.pop_back();
      --size_;
      out.wake_at.reset();
      return out;
    }
    if (!out.wake_at || head.eligibility < *out.wake_at)
      out.wake_at = head.eligibility;
  }
  return out;
}

Network::Network(NetworkSpec spec, Simulator& sim, NetworkObserver& observer,
                 bool trace)
    : spec_(std::move(spec)), sim_(sim), observer_(observer), trace_(trace) {
  const auto node_count = static_cast<int>(spec_.nodes.size());
  if (spec_.ports.size() != spec_.nodes.size())
    throw std::invalid_argument("port table does not match node count");
  nodes_.resize(spec_.nodes.size());

  for (NodeId n = 0; n < node_count; ++n) {
    const NodeConfig& cfg = spec_.nodes[n];
    Node& node = nodes_[n];
    const auto port_count = static_cast<int>(spec_.ports[n].size());
    auto where = [&](const std::string& what) {
      return "node '" + cfg.name + "': " + what;
    };
    auto check_ingress = [&](PortId p) {
      if (p != kLocalPort && (p < 0 || p >= port_count))
        throw std::invalid_argument(where("unknown ingress port " +
                                          std::to_string(p)));
    };

    for (const PortLink& link : spec_.ports[n]) {
      if (link.peer < 0 || link.peer >= node_count ||
          link.peer_port < 0 ||
          link.peer_port >= static_cast<int>(spec_.ports[link.peer].size()))
        throw std::invalid_argument(where("port wired to unknown peer"));
      if (!(link.rate.bits_per_second() > Rational(0)))
        throw std::invalid_argument(where("link rate must be positive"));
      if (link.propagation.is_negative())
        throw std::invalid_argument(where("negative propagation delay"));
      Port port;
      port.link = link;
      node.ports.push_back(std::move(port));
    }
    if (cfg.processing_delay.is_negative())
      throw std::invalid_argument(where("negative processing delay"));

    for (const auto& [stream, ports] : cfg.forwarding) {
      if (ports.empty())
        throw std::invalid_argument(where("empty forwarding entry"));
      for (PortId p : ports)
        if (p < 0 || p >= port_count)
          throw std::invalid_argument(where("forwarding to unknown port"));
      if (ports.size() > 1 && !cfg.split.contains(stream))
        throw std::invalid_argument(
            where("multi-port forwarding without a split"));
    }

    std::map<std::tuple<PortId, int, StreamIndex>, std::size_t> group_of;
    for (const AtsAssignment& a : cfg.ats) {
      check_ingress(a.ingress);
      const auto key = std::make_pair(a.stream, a.ingress);
      if (node.scheduler_index.contains(key))
        throw std::invalid_argument(where("duplicate ATS scheduler"));
      node.scheduler_index[key] = node.schedulers.size();
      node.schedulers.emplace_back(a.params);
      const auto group_key = std::make_tuple(
          a.ingress, a.priority,
          cfg.grouping == GroupingMode::kPerStream ? a.stream : -1);
      auto [it, fresh] = group_of.emplace(group_key, node.groups.size());
      if (fresh) {
        node.groups.emplace_back(a.mrt);
      } else if (node.groups[it->second].mrt() != a.mrt) {
        throw std::invalid_argument(
            where("schedulers of one group disagree on mrt"));
      }
      node.scheduler_group.push_back(it->second);
    }
    for (const LossFilterAssignment& f : cfg.loss_filters) {
      check_ingress(f.ingress);
      node.loss_filters.emplace(std::make_pair(f.stream, f.ingress),
                                LossFilter(f.phase));
    }
    for (const auto& [stream, window] : cfg.recovery)
      node.recovery.emplace(stream, RecoveryState(window));
  }
}

void Network::inject(NodeId node, Frame frame) {
  process(node, kLocalPort, std::move(frame), sim_.now());
}

void Network::handle(Event& event) {
  std::visit(
      [&](auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, FrameArrival>) {
          process(payload.node, payload.port, std::move(payload.frame),
                  event.fire_time);
        } else if constexpr (std::is_same_v<T, TransmissionComplete>) {
          nodes_[payload.node].ports[payload.port].busy = false;
          try_transmit(payload.node, payload.port);
        } else if constexpr (std::is_same_v<T, EligibilityTimer>) {
          Port& port = nodes_[payload.node].ports[payload.port];
          if (port.timer_at && *port.timer_at == event.fire_time) {
            port.timer.reset();
            port.timer_at.reset();
          }
          try_transmit(payload.node, payload.port);
        } else {
          throw std::logic_error("network cannot handle this event");
        }
      },
      event.payload);
}

std::size_t Network::queued_frames() const {
  std::size_t total = 0;
  for (const Node& node : nodes_)
    for (const Port& port : node.ports) total += port.queue.size();
  return total;
}

void Network::drop(NodeId node, const Frame& frame, DropCause cause,
                   const SimTime& now) {
  observer_.on_dropped(node, frame, cause, now);
}

void Network::process(NodeId n, PortId ingress, Frame frame,
                      const SimTime& now) {
  const NodeConfig& cfg = spec_.nodes[n];
  Node& node = nodes_[n];
  observer_.on_arrival(n, ingress, frame, now);
  if (trace_) frame.trace.push_back(HopRecord{n, ingress, now, now, now});

  const auto key = std::make_pair(frame.stream, ingress);
  if (auto it = node.loss_filters.find(key); it != node.loss_filters.end()) {
    if (!it->second.pass()) {
      drop(n, frame, DropCause::kLossFilter, now);
      return;
    }
  }

  SimTime eligibility = now;
  if (auto it = node.scheduler_index.find(key);
      it != node.scheduler_index.end()) {
    const std::size_t s = it->second;
    const EligibilityDecision decision =
        assign_eligibility(node.schedulers[s],
                           node.groups[node.scheduler_group[s]], now,
                           frame.size_bits);
    observer_.on_ats_decision(n, ingress, frame, now, decision);
    if (!decision.eligible) {
      drop(n, frame, DropCause::kShaperMrt, now);
      return;
    }
    eligibility = decision.eligibility_time;
    if (trace_) frame.trace.back().eligibility = eligibility;
  }

  if (auto it = node.recovery.find(frame.stream); it != node.recovery.end()) {
    switch (it->second.recover(frame.seq)) {
      case RecoveryVerdict::kForward:
        break;
      case RecoveryVerdict::kDiscardDuplicate:
        drop(n, frame, DropCause::kDuplicateEliminated, now);
        return;
      case RecoveryVerdict::kDiscardOutOfWindow:
        drop(n, frame, DropCause::kRecoveryWindow, now);
        return;
    }
  }

  if (cfg.deliver.contains(frame.stream)) {
    observer_.on_delivered(n, frame, now);
    return;
  }

  auto route = cfg.forwarding.find(frame.stream);
  if (route == cfg.forwarding.end()) {
    drop(n, frame, DropCause::kMisconfig, now);
    return;
  }
  const std::vector<PortId>& ports = route->second;
  if (ports.size() == 1) {
    enqueue(n, ports.front(), std::move(frame), eligibility);
    return;
  }
  auto copies = split(frame, ports);
  observer_.on_replicated(n, frame, copies.size() - 1);
  for (auto& [port, copy] : copies)
    enqueue(n, port, std::move(copy), eligibility);
}

void Network::enqueue(NodeId n, PortId p, Frame frame,
                      const SimTime& eligibility) {
  nodes_[n].ports[p].queue.push(std::move(frame), eligibility,
                                enqueue_order_++);
  try_transmit(n, p);
}

void Network::try_transmit(NodeId n, PortId p) {
  Port& port = nodes_[n].ports[p];
  if (port.busy) return;
  const SimTime now = sim_.now();
  EgressQueue::Selection next = port.queue.select_next_transmission(now);
  if (!next.frame) {
    if (next.wake_at && (!port.timer_at || *next.wake_at < *port.timer_at)) {
      if (port.timer) sim_.cancel(*port.timer);
      port.timer = sim_.schedule(*next.wake_at, EligibilityTimer{n, p});
      port.timer_at = next.wake_at;
    }
    return;
  }
  Frame frame = std::move(*next.frame);
  const SimTime duration = transmit_duration(frame.size_bits, port.link.rate);
  frame.wire_time += duration;
  if (trace_ && !frame.trace.empty()) frame.trace.back().departure = now;
  observer_.on_departure(n, p, frame, now);
  port.busy = true;
  const SimTime done = now + duration;
  sim_.schedule(done, TransmissionComplete{n, p});
  const SimTime arrival = done + port.link.propagation +
                          spec_.nodes[port.link.peer].processing_delay;
  sim_.schedule(arrival,
                FrameArrival{port.link.peer, port.link.peer_port,
                             std::move(frame)});
}

}  // namespace tsnsim
