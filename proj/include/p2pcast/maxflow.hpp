#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "p2pcast/model.hpp"

namespace p2pcast {

// Directed capacity graph with at most one edge per ordered vertex pair
// (add_edge accumulates). Capacities may be kUnbounded; max_flow replaces
// unbounded edges by (sum of finite capacities + 1), which no flow can fill.
class CapGraph {
 public:
  struct Edge {
    int from;
    int to;
    double capacity;
  };

  explicit CapGraph(int vertex_count) : nv_(vertex_count) {}

  int vertex_count() const { return nv_; }
  void add_edge(int from, int to, double capacity);
  double capacity(int from, int to) const;
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  static long long key(int from, int to) {
    return (static_cast<long long>(from) << 32) | static_cast<unsigned>(to);
  }

  int nv_ = 0;
  std::vector<Edge> edges_;
  std::unordered_map<long long, size_t> index_;
};

// Shortest-augmenting-path (BFS) max flow. Deterministic; exact to ~1e-12
// relative for rational capacities stored in doubles.
double max_flow(const CapGraph& graph, int source, int sink);

// Lemma-3 style epoch-replicated graph: per-epoch copies of {source, peers},
// transmission edges with capacity rate * dt_n, and unbounded memory edges
// v^(n) -> v^(n+1) for every vertex.
struct TimeExpandedGraph {
  CapGraph graph;
  int peer_count = 0;
  int epoch_count = 0;

  int source_vertex(int epoch) const { return epoch * (peer_count + 1); }
  int peer_vertex(int peer, int epoch) const { return epoch * (peer_count + 1) + 1 + peer; }

  static TimeExpandedGraph build(const Network& net, const RateAllocation& alloc,
                                 std::span<const double> durations);
};

// Per-peer min-cut value from the source in the rate graph induced by alloc.
FlowRates flow_rates_of_allocation(const Network& net, const RateAllocation& alloc);

struct PeerScheduleVerdict {
  int peer = 0;
  int finish_epoch = 0;  // 1-based epoch at whose end the peer must be done
  double flow = 0.0;
  double required = 0.0;
  bool feasible = false;
};

// Builds the time-expanded graph for the given epoch durations and checks,
// for every peer, that max-flow from s^(1) to the peer's finish-epoch copy
// covers the file size (within 1e-9). finish_order[k] = peer finishing at
// the end of epoch k+1.
std::vector<PeerScheduleVerdict> verify_static_schedule(const Network& net,
                                                        const RateAllocation& alloc,
                                                        std::span<const int> finish_order,
                                                        std::span<const double> durations);

}  // namespace p2pcast
