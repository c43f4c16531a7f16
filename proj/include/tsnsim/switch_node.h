// Store-and-forward nodes and links.
//
// Ingress pipeline, in order: loss filter, ATS eligibility, FRER recovery,
// local delivery, forwarding lookup, FRER split, enqueue.  Egress is strict
// priority across classes; inside a class frames are ordered by
// (eligibility time, arrival order) and never released before their
// eligibility time.  Unshaped frames are eligible on arrival, which makes a
// class without shaped traffic plain FIFO.

#ifndef TSNSIM_SWITCH_NODE_H_
#define TSNSIM_SWITCH_NODE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tsnsim/ats.h"
#include "tsnsim/frame.h"
#include "tsnsim/frer.h"
#include "tsnsim/kernel.h"
#include "tsnsim/units.h"

namespace tsnsim {

enum class GroupingMode { kStandard, kPerStream };

std::string to_string(GroupingMode mode);
GroupingMode parse_grouping_mode(const std::string& text);

enum class DropCause {
  kShaperMrt,
  kLossFilter,
  kDuplicateEliminated,
  kRecoveryWindow,
  kMisconfig,
};

std::string to_string(DropCause cause);

struct AtsAssignment {
  StreamIndex stream = -1;
  PortId ingress = kLocalPort;
  int priority = 0;  // of the stream; part of the standard group key
  AtsSchedulerConfig params;
  OptionalTime mrt;
};

struct LossFilterAssignment {
  StreamIndex stream = -1;
  PortId ingress = kLocalPort;
  LossPhase phase = LossPhase::kDropFirst;
};

struct NodeConfig {
  std::string name;
  bool is_switch = true;
  SimTime processing_delay;
  GroupingMode grouping = GroupingMode::kStandard;
  std::vector<AtsAssignment> ats;
  std::vector<LossFilterAssignment> loss_filters;
  std::map<StreamIndex, std::vector<PortId>> forwarding;
  std::set<StreamIndex> split;
  std::map<StreamIndex, std::size_t> recovery;  // stream -> history window
  std::set<StreamIndex> deliver;
};

// Transmit side of a full-duplex cable.
struct PortLink {
  NodeId peer = -1;
  PortId peer_port = -1;
  BitRate rate;
  SimTime propagation;
};

struct NetworkSpec {
  std::vector<NodeConfig> nodes;
  std::vector<std::vector<PortLink>> ports;  // ports[node][port]
};

class NetworkObserver {
 public:
  virtual ~NetworkObserver() = default;
  virtual void on_arrival(NodeId, PortId, const Frame&, const SimTime&) {}
  virtual void on_ats_decision(NodeId, PortId, const Frame&,
                               const SimTime& /*arrival*/,
                               const EligibilityDecision&) {}
  virtual void on_delivered(NodeId, const Frame&, const SimTime&) {}
  virtual void on_dropped(NodeId, const Frame&, DropCause, const SimTime&) {}
  virtual void on_replicated(NodeId, const Frame&, std::size_t /*extra*/) {}
  virtual void on_departure(NodeId, PortId, const Frame&, const SimTime&) {}
};

class EgressQueue {
 public:
  void push(Frame frame, const SimTime& eligibility, std::uint64_t order);

  struct Selection {
    std::optional<Frame> frame;
    // Earliest future eligibility among class heads when nothing is
    // releasable now.
    OptionalTime wake_at;
  };

  // Highest class with a releasable head wins; within a class the smallest
  // (eligibility, order) key.
  Selection select_next_transmission(const SimTime& now);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  template <class F>
  void for_each_frame(F&& f) const {
    for (const auto& [priority, heap] : classes_)
      for (const Entry& e : heap) f(e.frame);
  }

 private:
  struct Entry {
    SimTime eligibility;
    std::uint64_t order;
    Frame frame;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.eligibility != b.eligibility) return a.eligibility > b.eligibility;
      return a.order > b.order;
    }
  };

  std::map<int, std::vector<Entry>, std::greater<int>> classes_;
  std::size_t size_ = 0;
};

class Network {
 public:
  // Throws std::invalid_argument on an inconsistent spec (unknown ports,
  // multi-port forwarding without a split, ...).
  Network(NetworkSpec spec, Simulator& sim, NetworkObserver& observer,
          bool trace = false);

  // A frame produced by `node` itself at sim.now().
  void inject(NodeId node, Frame frame);

  // Handles FrameArrival, TransmissionComplete and EligibilityTimer.
  void handle(Event& event);

  // Frames sitting in egress queues (frames on the wire live in pending
  // FrameArrival events).
  std::size_t queued_frames() const;

  template <class F>
  void for_each_queued(F&& f) const {
    for (const Node& node : nodes_)
      for (const Port& port : node.ports) port.queue.for_each_frame(f);
  }

  const NetworkSpec& spec() const { return spec_; }
  std::size_t node_count() const { return spec_.nodes.size(); }
  const std::string& node_name(NodeId id) const { return spec_.nodes[id].name; }

 private:
  struct Port {
    PortLink link;
    EgressQueue queue;
    bool busy = false;
    std::optional<EventId> timer;
    OptionalTime timer_at;
  };

  struct Node {
    std::vector<Port> ports;
    // (stream, ingress) -> scheduler index
    std::map<std::pair<StreamIndex, PortId>, std::size_t> scheduler_index;
    std::vector<AtsScheduler> schedulers;
    std::vector<std::size_t> scheduler_group;  // scheduler -> group index
    std::vector<SchedulerGroup> groups;
    std::map<std::pair<StreamIndex, PortId>, LossFilter> loss_filters;
    std::map<StreamIndex, RecoveryState> recovery;
  };

  void process(NodeId node, PortId ingress, Frame frame, const SimTime& now);
  void enqueue(NodeId node, PortId port, Frame frame,
               const SimTime& eligibility);
  void try_transmit(NodeId node, PortId port);
  void drop(NodeId node, const Frame& frame, DropCause cause,
            const SimTime& now);

  NetworkSpec spec_;
  Simulator& sim_;
  NetworkObserver& observer_;
  bool trace_;
  std::vector<Node> nodes_;
  std::uint64_t enqueue_order_ = 0;
};

}  // namespace tsnsim

#endif  // TSNSIM_SWITCH_NODE_H_
