#include "p2pcast/static_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "p2pcast/bound.hpp"

namespace p2pcast {

namespace {

double tol_for(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

// Residual capacities threaded through successive Mutualcast applications.
struct Residual {
  double source_uplink;
  std::vector<double> uplink;
  std::vector<double> downlink;  // may be kUnbounded

  explicit Residual(const Network& net)
      : source_uplink(net.source_uplink), uplink(net.uplinks()) {
    downlink.resize(net.size());
    for (int i = 0; i < net.size(); ++i) downlink[i] = net.peers[i].downlink;
  }
};

// One Mutualcast application (depth-2 assignment plus per-receiver depth-1
// leftover) delivering `rate` to every member of `receivers`. Members of
// `helpers` relay without being receivers; a helper forwards its feed to all
// m receivers, so its uplink cap divides by m instead of m - 1.
void mutualcast_round(Residual& res, const std::vector<int>& receivers,
                      const std::vector<int>& helpers, double rate, RateAllocation& alloc) {
  const int m = static_cast<int>(receivers.size());
  if (m == 0 || rate <= 0.0) return;
  double remaining = rate;

  if (m == 1) {
    const int i = receivers[0];
    const double a =
        std::max(0.0, std::min({remaining, res.downlink[i], res.source_uplink}));
    alloc.add_source_rate_depth1(i, a);
    res.source_uplink -= a;
    res.downlink[i] -= a;
    return;
  }

  for (int i : receivers) {
    const double relay_cap = res.uplink[i] / (m - 1);
    const double a =
        std::max(0.0, std::min({remaining, res.downlink[i], relay_cap, res.source_uplink}));
    if (a > 0.0) {
      alloc.add_source_rate_depth2(i, a);
      for (int j : receivers)
        if (j != i) alloc.add_rate(i, j, a);
      remaining -= a;
      res.source_uplink -= a;
      res.uplink[i] -= a * (m - 1);
      for (int j : receivers) res.downlink[j] -= a;
    }
  }
  if (remaining > 0.0) {
    for (int h : helpers) {
      const double a = std::max(
          0.0, std::min({remaining, res.downlink[h], res.uplink[h] / m, res.source_uplink}));
      if (a > 0.0) {
        alloc.add_source_rate_depth2(h, a);
        for (int j : receivers) alloc.add_rate(h, j, a);
        remaining -= a;
        res.source_uplink -= a;
        res.uplink[h] -= a * m;
        res.downlink[h] -= a;
        for (int j : receivers) res.downlink[j] -= a;
      }
      if (remaining <= 0.0) break;
    }
  }
  if (remaining > 0.0) {
    const double leftover = std::min(remaining, res.source_uplink / m);
    if (leftover > 0.0) {
      for (int i : receivers) {
        alloc.add_source_rate_depth1(i, leftover);
        res.downlink[i] -= leftover;
      }
      res.source_uplink -= leftover * m;
    }
  }
}

std::vector<int> identity_order(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

void check_permutation(std::span<const int> order, int n) {
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("order must list every peer exactly once");
  std::vector<char> seen(n, 0);
  for (int p : order) {
    if (p < 0 || p >= n || seen[p]) throw std::invalid_argument("order is not a permutation");
    seen[p] = 1;
  }
}

// Fixed point of the max-subtracted budget equation:
// sum r~ = budget0 - max_k r~_k with r~ = waterfill(W, caps, budget0 - m).
// g(m) = max(r~(m)) - m is strictly decreasing, so bisection converges.
WaterfillSolution max_subtracted_waterfill(std::span<const double> weights,
                                           std::span<const double> caps, double budget0) {
  double lo = 0.0;
  double hi = budget0;
  const double eps = 1e-12 * std::max(1.0, budget0);
  for (int iter = 0; iter < 200 && hi - lo > eps; ++iter) {
    const double m = 0.5 * (lo + hi);
    const WaterfillSolution sol = waterfill(weights, caps, budget0 - m);
    const double mx = sol.rates.empty() ? 0.0 : *std::max_element(sol.rates.begin(), sol.rates.end());
    (mx > m ? lo : hi) = m;
  }
  double m = 0.5 * (lo + hi);
  WaterfillSolution sol = waterfill(weights, caps, budget0 - m);
  // One polish pass pins sum r~ = budget0 - max r~ to machine precision.
  m = sol.rates.empty() ? 0.0 : *std::max_element(sol.rates.begin(), sol.rates.end());
  return waterfill(weights, caps, budget0 - m);
}

std::vector<int> descending_target_order(const std::vector<double>& targets) {
  std::vector<int> order = identity_order(static_cast<int>(targets.size()));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return targets[a] > targets[b]; });
  return order;
}

// Delivers targets[i] to every peer exactly, by ascending level sets with all
// other peers acting as relay helpers. Used when the c-scaled construction
// falls short of the water-fill targets (possible with binding downlinks,
// where the single global c throttles everyone for one tight peer).
void deliver_targets(const Network& net, const std::vector<double>& targets, Residual& res,
                     RateAllocation& alloc) {
  const int n = net.size();
  std::vector<int> order = identity_order(n);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return targets[a] < targets[b]; });
  double prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const double level = targets[order[k]];
    const double rate = level - prev;
    prev = level;
    if (rate <= 1e-15 * std::max(1.0, level)) continue;
    std::vector<int> receivers(order.begin() + k, order.end());
    std::vector<int> helpers(order.begin(), order.begin() + k);
    mutualcast_round(res, receivers, helpers, rate, alloc);
  }
  for (int i = 0; i < n; ++i) {
    if (alloc.download_of(i) < targets[i] - tol_for(targets[i]))
      throw std::logic_error("level-set delivery fell short of its targets");
  }
}

}  // namespace

RateAllocation mutualcast(const Network& net, double rate, std::span<const int> order) {
  const int n = net.size();
  double min_downlink = kUnbounded;
  for (const auto& p : net.peers) min_downlink = std::min(min_downlink, p.downlink);
  const double ceiling =
      std::min({net.source_uplink, (net.source_uplink + net.total_peer_uplink()) / n,
                min_downlink});
  if (rate > ceiling + tol_for(ceiling))
    throw std::invalid_argument("rate above the feasible Mutualcast ceiling");
  if (rate < 0.0) throw std::invalid_argument("negative rate");

  std::vector<int> seq;
  if (order.empty()) {
    seq = identity_order(n);
  } else {
    check_permutation(order, n);
    seq.assign(order.begin(), order.end());
  }
  RateAllocation alloc(n);
  Residual res(net);
  mutualcast_round(res, seq, {}, rate, alloc);
  return alloc;
}

ExtendedResult extended_mutualcast(const Network& net) {
  const int n = net.size();
  const std::vector<double> dtil = net.effective_downlinks();
  const double budget = net.source_uplink + net.total_peer_uplink();
  const std::vector<double> ones(n, 1.0);
  const WaterfillSolution sol = waterfill(ones, dtil, budget);
  const double level = sol.level;

  std::vector<int> order = identity_order(n);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dtil[a] < dtil[b]; });

  RateAllocation alloc(n);
  Residual res(net);
  const double tol = 1e-12 * std::max(1.0, budget);
  if (level <= dtil[order[0]] + tol) {
    mutualcast_round(res, order, {}, level, alloc);
  } else {
    int capped = 0;  // peers whose effective downlink sits below the water level
    while (capped < n && dtil[order[capped]] < level - tol) ++capped;
    double prev = 0.0;
    for (int k = 0; k < capped; ++k) {
      std::vector<int> suffix(order.begin() + k, order.end());
      mutualcast_round(res, suffix, {}, dtil[order[k]] - prev, alloc);
      prev = dtil[order[k]];
    }
    if (capped < n) {
      std::vector<int> suffix(order.begin() + capped, order.end());
      mutualcast_round(res, suffix, {}, level - prev, alloc);
    }
  }

  ExtendedResult out{std::move(alloc), {}};
  out.flows.rates.resize(n);
  for (int i = 0; i < n; ++i) out.flows.rates[i] = std::min(level, dtil[i]);
  return out;
}

Depth2Result depth2_rateless(const Network& net) {
  const int n = net.size();
  const std::vector<double> w = net.weights();
  const std::vector<double> uplinks = net.uplinks();
  const std::vector<double> dtil = net.effective_downlinks();
  const double budget0 = net.source_uplink + net.total_peer_uplink();
  const double scale_tol = 1e-12 * std::max(1.0, budget0);

  if (budget0 >= net.total_effective_downlink() - scale_tol) {
    ExtendedResult ext = extended_mutualcast(net);
    Depth2Result out{std::move(ext.alloc), std::move(ext.flows), {}, {}, 1.0, 0.0, true, false, {}};
    out.waterfill_targets = out.flows.rates;
    out.download_rates = out.flows.rates;
    out.finish_order = descending_target_order(out.waterfill_targets);
    return out;
  }

  const WaterfillSolution tsol = max_subtracted_waterfill(w, dtil, budget0);
  const std::vector<double>& targets = tsol.rates;
  const double target_sum = std::accumulate(targets.begin(), targets.end(), 0.0);
  const double target_max = n ? *std::max_element(targets.begin(), targets.end()) : 0.0;
  int positive = 0;
  for (double t : targets)
    if (t > scale_tol) ++positive;

  Depth2Result out{RateAllocation(n), {}, targets, {}, 0.0, 0.0, false, false,
                   descending_target_order(targets)};
  out.flows.rates.assign(n, 0.0);

  if (positive <= 1) {
    // The relay formulas need a second positive target; fall back to a pure
    // depth-1 fill of the source uplink.
    const WaterfillSolution d1 = waterfill(w, dtil, net.source_uplink);
    for (int i = 0; i < n; ++i)
      if (d1.rates[i] > 0.0) out.alloc.add_source_rate_depth1(i, d1.rates[i]);
    out.flows.rates = d1.rates;
    out.download_rates = d1.rates;
    return out;
  }

  std::vector<double> denom(n), unit_download(n);
  double alpha = 0.0;
  for (int i = 0; i < n; ++i) {
    denom[i] = target_sum - targets[i];
    alpha += uplinks[i] / denom[i];
  }
  for (int i = 0; i < n; ++i)
    unit_download[i] = alpha * targets[i] + (target_max - targets[i]) * uplinks[i] / denom[i];

  double c = 1.0;
  if (alpha * target_max > 0.0) c = std::min(c, net.source_uplink / (alpha * target_max));
  for (int i = 0; i < n; ++i)
    if (unit_download[i] > scale_tol) c = std::min(c, dtil[i] / unit_download[i]);
  out.relay_scale = c;

  std::vector<double> beta(n);
  for (int i = 0; i < n; ++i) {
    out.alloc.add_source_rate_depth2(i, c * uplinks[i] * target_max / denom[i]);
    for (int j = 0; j < n; ++j)
      if (j != i) out.alloc.add_rate(i, j, c * uplinks[i] * targets[j] / denom[i]);
    beta[i] = c * unit_download[i];
  }

  const double used_source = c * alpha * target_max;
  if (used_source < net.source_uplink - scale_tol) {
    const double total = net.source_uplink + c * net.total_peer_uplink();
    const WaterfillSolution d1 = waterfill_bounded(w, beta, dtil, total);
    for (int i = 0; i < n; ++i) {
      const double add = std::max(0.0, d1.rates[i] - beta[i]);
      if (add > 0.0) out.alloc.add_source_rate_depth1(i, add);
      out.flows.rates[i] = beta[i] + add;
    }
  } else {
    out.flows.rates = beta;
  }

  bool dominated = true;
  for (int i = 0; i < n; ++i)
    if (out.flows.rates[i] < targets[i] - scale_tol) dominated = false;

  if (!dominated) {
    out.repaired = true;
    out.alloc = RateAllocation(n);
    Residual res(net);
    deliver_targets(net, targets, res, out.alloc);
    std::vector<double> insum(n), hi(n);
    for (int i = 0; i < n; ++i) {
      insum[i] = out.alloc.download_of(i);
      hi[i] = std::min(dtil[i], insum[i] + std::max(0.0, res.downlink[i]));
    }
    if (res.source_uplink > scale_tol) {
      const double total = std::accumulate(insum.begin(), insum.end(), res.source_uplink);
      const WaterfillSolution d1 = waterfill_bounded(w, insum, hi, total);
      for (int i = 0; i < n; ++i) {
        const double add = std::max(0.0, d1.rates[i] - insum[i]);
        if (add > 0.0) {
          out.alloc.add_source_rate_depth1(i, add);
          insum[i] += add;
        }
      }
    }
    out.flows.rates = insum;
  }

  out.download_rates = out.flows.rates;
  return out;
}

Depth2Result routing_based(const Network& net, std::optional<std::vector<int>> order_opt) {
  const int n = net.size();
  const std::vector<double> w = net.weights();
  const std::vector<double> uplinks = net.uplinks();
  const std::vector<double> dtil = net.effective_downlinks();
  const double budget0 = net.source_uplink + net.total_peer_uplink();
  const double scale_tol = 1e-12 * std::max(1.0, budget0);

  if (budget0 >= net.total_effective_downlink() - scale_tol) {
    ExtendedResult ext = extended_mutualcast(net);
    Depth2Result out{std::move(ext.alloc), std::move(ext.flows), {}, {}, 1.0, 0.0, true, false, {}};
    out.waterfill_targets = out.flows.rates;
    out.download_rates = out.flows.rates;
    out.finish_order = descending_target_order(out.waterfill_targets);
    return out;
  }

  const WaterfillSolution tsol = max_subtracted_waterfill(w, dtil, budget0);
  const std::vector<double>& targets = tsol.rates;
  const double target_sum = std::accumulate(targets.begin(), targets.end(), 0.0);
  const double target_max = n ? *std::max_element(targets.begin(), targets.end()) : 0.0;

  std::vector<int> order;
  if (order_opt) {
    check_permutation(*order_opt, n);
    for (int k = 1; k < n; ++k)
      if (targets[(*order_opt)[k]] > targets[(*order_opt)[k - 1]] + tol_for(target_max))
        throw std::invalid_argument("order must sort the water-fill targets descending");
    order = *order_opt;
  } else {
    order = descending_target_order(targets);
  }

  int positive = 0;
  for (double t : targets)
    if (t > scale_tol) ++positive;

  Depth2Result out{RateAllocation(n), {}, targets, {}, 0.0, 0.0, false, false, order};
  out.flows.rates.assign(n, 0.0);
  out.download_rates.assign(n, 0.0);

  std::vector<double> beta(n, 0.0);      // effective flow after the depth-2 stage
  std::vector<double> download(n, 0.0);  // used downlink after the depth-2 stage
  double depth1_budget = net.source_uplink;

  if (positive > 1) {
    std::vector<double> denom(n), unit_download(n);
    double alpha = 0.0;
    for (int i = 0; i < n; ++i) {
      denom[i] = target_sum - targets[i];
      alpha += uplinks[i] / denom[i];
    }
    for (int i = 0; i < n; ++i)
      unit_download[i] = alpha * targets[i] + (target_max - targets[i]) * uplinks[i] / denom[i];
    double c = 1.0;
    if (alpha * target_max > 0.0) c = std::min(c, net.source_uplink / (alpha * target_max));
    for (int i = 0; i < n; ++i)
      if (unit_download[i] > scale_tol) c = std::min(c, dtil[i] / unit_download[i]);
    out.relay_scale = c;

    for (int i = 0; i < n; ++i) {
      out.alloc.add_source_rate_depth2(i, c * uplinks[i] * target_max / denom[i]);
      for (int j = 0; j < n; ++j)
        if (j != i) out.alloc.add_rate(i, j, c * uplinks[i] * targets[j] / denom[i]);
    }
    // A relaying peer keeps only the chunks it forwards to its predecessor in
    // the finish order; the first peer keeps its whole source feed.
    double wasted = 0.0;
    for (int k = 0; k < n; ++k) {
      const int i = order[k];
      const double prev_target = k == 0 ? targets[order[0]] : targets[order[k - 1]];
      beta[i] = c * (alpha * targets[i] + (prev_target - targets[i]) * uplinks[i] / denom[i]);
      download[i] = c * unit_download[i];
      wasted += c * (targets[order[0]] - prev_target) * uplinks[i] / denom[i];
    }
    out.wasted_uplink = wasted;
    depth1_budget = net.source_uplink - c * alpha * targets[order[0]];
  }

  if (depth1_budget > scale_tol) {
    // Prefix-min weights and headrooms along the finish order keep the
    // depth-1 chunk sets nested.
    std::vector<double> what(n), dhat(n), lo(n), hi(n);
    double run_w = kUnbounded;
    double run_d = kUnbounded;
    for (int k = 0; k < n; ++k) {
      const int i = order[k];
      run_w = std::min(run_w, w[i]);
      run_d = std::min(run_d, dtil[i] - beta[i]);
      what[i] = run_w == kUnbounded ? 0.0 : run_w;
      dhat[i] = run_d;
      lo[i] = beta[i];
      hi[i] = std::max(beta[i], dhat[i]);
    }
    const double total = std::accumulate(beta.begin(), beta.end(), depth1_budget);
    const WaterfillSolution d1 = waterfill_bounded(what, lo, hi, total);
    for (int i = 0; i < n; ++i) {
      const double add = std::max(0.0, d1.rates[i] - beta[i]);
      if (add > 0.0) out.alloc.add_source_rate_depth1(i, add);
      out.flows.rates[i] = beta[i] + add;
      out.download_rates[i] = download[i] + add;
    }
  } else {
    out.flows.rates = beta;
    out.download_rates = download;
  }
  return out;
}

}  // namespace p2pcast
