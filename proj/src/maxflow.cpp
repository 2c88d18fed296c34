#include "p2pcast/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace p2pcast {

void CapGraph::add_edge(int from, int to, double capacity) {
  if (from < 0 || from >= nv_ || to < 0 || to >= nv_)
    throw std::invalid_argument("edge endpoint out of range");
  if (from == to) throw std::invalid_argument("self-loop edge");
  if (capacity < 0.0) throw std::invalid_argument("negative capacity");
  auto [it, inserted] = index_.try_emplace(key(from, to), edges_.size());
  if (inserted) {
    edges_.push_back({from, to, capacity});
  } else {
    Edge& e = edges_[it->second];
    e.capacity = (e.capacity == kUnbounded || capacity == kUnbounded) ? kUnbounded
                                                                      : e.capacity + capacity;
  }
}

double CapGraph::capacity(int from, int to) const {
  auto it = index_.find(key(from, to));
  return it == index_.end() ? 0.0 : edges_[it->second].capacity;
}

namespace {

struct ResidualNet {
  // Paired edges: reverse of edge k is k ^ 1.
  struct Arc {
    int to;
    double residual;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;

  explicit ResidualNet(int n) : out(n) {}

  void add(int from, int to, double cap) {
    out[from].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({to, cap});
    out[to].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({from, 0.0});
  }
};

}  // namespace

double max_flow(const CapGraph& graph, int source, int sink) {
  const int n = graph.vertex_count();
  if (source < 0 || source >= n || sink < 0 || sink >= n)
    throw std::invalid_argument("source or sink not in graph");
  if (source == sink) throw std::invalid_argument("source equals sink");

  double finite_sum = 0.0;
  for (const auto& e : graph.edges())
    if (e.capacity != kUnbounded) finite_sum += e.capacity;
  const double surrogate = finite_sum + 1.0;
  const double eps = 1e-13 * std::max(1.0, surrogate);

  ResidualNet net(n);
  for (const auto& e : graph.edges()) {
    const double cap = e.capacity == kUnbounded ? surrogate : e.capacity;
    if (cap > 0.0) net.add(e.from, e.to, cap);
  }

  double flow = 0.0;
  std::vector<int> parent_arc(n);
  while (true) {
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    parent_arc[source] = -2;
    std::queue<int> q;
    q.push(source);
    while (!q.empty() && parent_arc[sink] == -1) {
      const int u = q.front();
      q.pop();
      for (int k : net.out[u]) {
        const auto& a = net.arcs[k];
        if (parent_arc[a.to] == -1 && a.residual > eps) {
          parent_arc[a.to] = k;
          q.push(a.to);
        }
      }
    }
    if (parent_arc[sink] == -1) return flow;
    double bottleneck = kUnbounded;
    for (int v = sink; v != source;) {
      const int k = parent_arc[v];
      bottleneck = std::min(bottleneck, net.arcs[k].residual);
      v = net.arcs[k ^ 1].to;
    }
    for (int v = sink; v != source;) {
      const int k = parent_arc[v];
      net.arcs[k].residual -= bottleneck;
      net.arcs[k ^ 1].residual += bottleneck;
      v = net.arcs[k ^ 1].to;
    }
    flow += bottleneck;
  }
}

TimeExpandedGraph TimeExpandedGraph::build(const Network& net, const RateAllocation& alloc,
                                           std::span<const double> durations) {
  const int n = net.size();
  const int epochs = static_cast<int>(durations.size());
  TimeExpandedGraph teg{CapGraph(epochs * (n + 1)), n, epochs};
  for (int k = 0; k < epochs; ++k) {
    const double dt = durations[k];
    if (dt > 0.0) {
      for (int j = 0; j < n; ++j) {
        const double cs = alloc.source_rate(j) * dt;
        if (cs > 0.0) teg.graph.add_edge(teg.source_vertex(k), teg.peer_vertex(j, k), cs);
        for (int i = 0; i < n; ++i) {
          if (i == j) continue;
          const double c = alloc.rate(i, j) * dt;
          if (c > 0.0) teg.graph.add_edge(teg.peer_vertex(i, k), teg.peer_vertex(j, k), c);
        }
      }
    }
    if (k + 1 < epochs) {
      teg.graph.add_edge(teg.source_vertex(k), teg.source_vertex(k + 1), kUnbounded);
      for (int v = 0; v < n; ++v)
        teg.graph.add_edge(teg.peer_vertex(v, k), teg.peer_vertex(v, k + 1), kUnbounded);
    }
  }
  return teg;
}

FlowRates flow_rates_of_allocation(const Network& net, const RateAllocation& alloc) {
  alloc.check_capacities(net);
  const int n = net.size();
  CapGraph g(n + 1);  // vertex 0 = source, 1..n = peers
  for (int i = 0; i < n; ++i) {
    if (alloc.source_rate(i) > 0.0) g.add_edge(0, 1 + i, alloc.source_rate(i));
    for (int j = 0; j < n; ++j)
      if (i != j && alloc.rate(i, j) > 0.0) g.add_edge(1 + i, 1 + j, alloc.rate(i, j));
  }
  FlowRates out;
  out.rates.resize(n);
  for (int j = 0; j < n; ++j) out.rates[j] = max_flow(g, 0, 1 + j);
  return out;
}

std::vector<PeerScheduleVerdict> verify_static_schedule(const Network& net,
                                                        const RateAllocation& alloc,
                                                        std::span<const int> finish_order,
                                                        std::span<const double> durations) {
  const int n = net.size();
  if (static_cast<int>(durations.size()) != n)
    throw std::invalid_argument("duration list must have one entry per peer");
  for (double dt : durations)
    if (!(dt >= 0.0)) throw std::invalid_argument("negative epoch duration");
  if (static_cast<int>(finish_order.size()) != n)
    throw std::invalid_argument("finish order must be a permutation of all peers");
  std::vector<char> seen(n, 0);
  for (int p : finish_order) {
    if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("invalid finish order");
    seen[p] = 1;
  }

  const TimeExpandedGraph teg = TimeExpandedGraph::build(net, alloc, durations);
  std::vector<PeerScheduleVerdict> verdicts(n);
  for (int k = 0; k < n; ++k) {
    const int peer = finish_order[k];
    PeerScheduleVerdict& v = verdicts[peer];
    v.peer = peer;
    v.finish_epoch = k + 1;
    v.required = net.file_size;
    v.flow = max_flow(teg.graph, teg.source_vertex(0), teg.peer_vertex(peer, k));
    v.feasible = v.flow >= net.file_size - 1e-9;
  }
  return verdicts;
}

}  // namespace p2pcast
