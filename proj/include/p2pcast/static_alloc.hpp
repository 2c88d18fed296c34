#pragma once

#include <optional>
#include <span>
#include <vector>

#include "p2pcast/model.hpp"

namespace p2pcast {

// Mutualcast with downlink constraints: every peer ends up with in-flow
// exactly R. Sequential min(R, D_i, U_i/(N-1)) depth-2 assignment in the
// given order with running decrements, then the per-peer leftover rate as
// depth-1 trees. Throws std::invalid_argument when R exceeds
// min(U_s, (U_s + sum U_i)/N, min_j D_j) beyond tolerance.
RateAllocation mutualcast(const Network& net, double rate,
                          std::span<const int> order = {});

struct ExtendedResult {
  RateAllocation alloc;
  FlowRates flows;  // r*_i = min(R, D~_i)
};

// Successive Mutualcast applications on ascending-D~ suffixes; achieves the
// equal-weight water-fill rates exactly, hence the minimum sum download time.
ExtendedResult extended_mutualcast(const Network& net);

struct Depth2Result {
  RateAllocation alloc;
  FlowRates flows;                      // claimed per-peer information flow
  std::vector<double> waterfill_targets;  // r~ (max-subtracted fixed point)
  std::vector<double> download_rates;   // used downlink incl. depth-1
  double relay_scale = 1.0;             // c
  double wasted_uplink = 0.0;           // U_w, routing scheme only
  bool delegated = false;               // abundant-uplink regime handled by extended_mutualcast
  bool repaired = false;                // level-set fallback replaced the c-construction
  std::vector<int> finish_order;        // peers by descending r~, ties by index
};

// Rateless-coding depth-2 allocation. Abundant regime delegates to
// extended_mutualcast; otherwise builds the c-scaled depth-2 trees over the
// fixed-point water-fill targets and tops up with the weighted depth-1
// water-fill. Guarantees flows_i >= r~_i for every peer.
Depth2Result depth2_rateless(const Network& net);

// Routing-based variant: same depth-2 trees, but a relaying peer keeps only
// the chunk set it forwards to its predecessor in the finish order, so the
// effective flow trails the download rate; the difference accumulates into
// wasted_uplink. Depth-1 stage uses the prefix-min weights/headrooms.
// An explicit order must sort r~ descending.
Depth2Result routing_based(const Network& net,
                           std::optional<std::vector<int>> order = std::nullopt);

}  // namespace p2pcast
