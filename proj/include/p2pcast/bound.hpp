#pragma once

#include <span>
#include <vector>

#include "p2pcast/model.hpp"

namespace p2pcast {

struct WaterfillSolution {
  double level = 0.0;  // R
  std::vector<double> rates;
  std::vector<bool> cap_bound;
};

// Unique R >= 0 with sum_i min(sqrt(w_i) R, cap_i) = min(budget, sum of caps
// over positive-weight peers). Zero-weight peers get rate 0. Exact
// piecewise-linear solve over sorted breakpoints; when the budget saturates
// all caps, R is the smallest saturating level.
WaterfillSolution waterfill(std::span<const double> weights, std::span<const double> caps,
                            double budget);

// Generalized form: rate_i = clamp(sqrt(w_i) R, lo_i, hi_i), zero-weight peers
// pinned at lo_i; target is clamped into the attainable range.
WaterfillSolution waterfill_bounded(std::span<const double> weights, std::span<const double> lo,
                                    std::span<const double> hi, double target);

struct WsdtLowerBound {
  FlowRates rates;     // r*
  double bound = 0.0;  // +inf when some positive-weight peer has r* = 0
};

// Analytic lower bound on WSDT: caps D~_i, budget U_s + sum U_i, weighted
// water-fill, then sum_i W_i B / r*_i with the 0-weight terms dropped.
WsdtLowerBound wsdt_lower_bound(const Network& net);

// sum_i W_i * B / r_i with the 0 * inf = 0 convention; +inf when a
// positive-weight peer has zero rate.
double wsdt(const FlowRates& rates, std::span<const double> weights, double file_size);

}  // namespace p2pcast
