#include "p2pcast/bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace p2pcast {

namespace {

struct Breakpoint {
  double level;   // R at which the piecewise-linear sum changes slope
  double dslope;  // slope delta
  double dconst;  // constant-term delta
};

void check_nonnegative(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!(x >= 0.0)) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

}  // namespace

WaterfillSolution waterfill_bounded(std::span<const double> weights, std::span<const double> lo,
                                    std::span<const double> hi, double target) {
  const size_t n = weights.size();
  if (lo.size() != n || hi.size() != n)
    throw std::invalid_argument("waterfill_bounded: mismatched lengths");
  check_nonnegative(weights, "weights");
  check_nonnegative(lo, "lower bounds");
  for (size_t i = 0; i < n; ++i)
    if (hi[i] < lo[i]) throw std::invalid_argument("waterfill_bounded: hi < lo");

  double eff_min = 0.0;
  double eff_max = 0.0;
  std::vector<Breakpoint> events;
  events.reserve(2 * n);
  for (size_t i = 0; i < n; ++i) {
    eff_min += lo[i];
    if (weights[i] > 0.0) {
      eff_max += hi[i];
      const double sw = std::sqrt(weights[i]);
      events.push_back({lo[i] / sw, sw, -lo[i]});
      if (hi[i] != kUnbounded) events.push_back({hi[i] / sw, -sw, hi[i]});
    } else {
      eff_max += lo[i];
    }
  }
  const double t = std::clamp(target, eff_min, eff_max);
  std::sort(events.begin(), events.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.level < b.level; });

  double level = 0.0;
  if (t > eff_min) {
    double c = eff_min;  // value of sum at R -> 0+ before any event fires
    double s = 0.0;
    double last = 0.0;
    bool solved = false;
    size_t k = 0;
    while (k < events.size()) {
      const double r = events[k].level;
      if (s > 0.0 && c + s * r >= t) {
        level = (t - c) / s;
        solved = true;
        break;
      }
      while (k < events.size() && events[k].level == r) {
        s += events[k].dslope;
        c += events[k].dconst;
        ++k;
      }
      last = r;
    }
    if (!solved) level = s > 0.0 ? (t - c) / s : last;
  }

  WaterfillSolution sol;
  sol.level = level;
  sol.rates.resize(n);
  sol.cap_bound.resize(n);
  for (size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) {
      const double raw = std::sqrt(weights[i]) * level;
      sol.rates[i] = std::clamp(raw, lo[i], hi[i]);
      sol.cap_bound[i] = hi[i] != kUnbounded && raw >= hi[i];
    } else {
      sol.rates[i] = lo[i];
      sol.cap_bound[i] = false;
    }
  }
  return sol;
}

WaterfillSolution waterfill(std::span<const double> weights, std::span<const double> caps,
                            double budget) {
  if (caps.size() != weights.size())
    throw std::invalid_argument("waterfill: mismatched lengths");
  if (!(budget >= 0.0)) throw std::invalid_argument("waterfill: negative budget");
  double reachable = 0.0;
  for (size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) reachable += caps[i];
  const std::vector<double> zeros(weights.size(), 0.0);
  return waterfill_bounded(weights, zeros, caps, std::min(budget, reachable));
}

WsdtLowerBound wsdt_lower_bound(const Network& net) {
  const std::vector<double> w = net.weights();
  const std::vector<double> caps = net.effective_downlinks();
  const double budget = net.source_uplink + net.total_peer_uplink();
  WaterfillSolution sol = waterfill(w, caps, budget);
  WsdtLowerBound out;
  out.rates.rates = sol.rates;
  out.bound = wsdt(out.rates, w, net.file_size);
  return out;
}

double wsdt(const FlowRates& rates, std::span<const double> weights, double file_size) {
  if (rates.rates.size() != weights.size())
    throw std::invalid_argument("wsdt: mismatched lengths");
  double sum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;  // helpers do not enter the objective
    if (rates.rates[i] <= 0.0) return kUnbounded;
    sum += weights[i] * file_size / rates.rates[i];
  }
  return sum;
}

}  // namespace p2pcast
