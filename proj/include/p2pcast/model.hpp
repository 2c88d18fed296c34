#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace p2pcast {

// Downlinks may be unbounded; everything downstream resolves them through
// effective_downlink() = min(D_i, U_s), which is always finite.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class ScenarioErrorKind {
  NoPeers,
  NonpositiveSourceUplink,
  NonpositiveFileSize,
  NegativeUplink,
  NonpositiveDownlink,
  NegativeWeight,
  NonfiniteValue,
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(ScenarioErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ScenarioErrorKind kind() const { return kind_; }

 private:
  ScenarioErrorKind kind_;
};

struct PeerSpec {
  double uplink = 0.0;
  double downlink = kUnbounded;
  double weight = 1.0;

  bool downlink_unbounded() const { return downlink == kUnbounded; }
};

struct Network {
  double source_uplink = 0.0;
  std::vector<PeerSpec> peers;
  double file_size = 1.0;

  int size() const { return static_cast<int>(peers.size()); }
  double effective_downlink(int i) const {
    return peers[i].downlink < source_uplink ? peers[i].downlink : source_uplink;
  }
  double total_peer_uplink() const;
  double total_effective_downlink() const;
  std::vector<double> weights() const;
  std::vector<double> uplinks() const;
  std::vector<double> effective_downlinks() const;
};

// Checks ranges and applies the uplink-clamping convention U_i <- min(U_i, D_i).
// Idempotent; rejects malformed input with a distinct ScenarioErrorKind each.
Network validate_scenario(const Network& raw);

enum class CaseId { I = 1, II, III, IV, V, VI };

CaseId parse_case_id(const std::string& text);
std::string to_string(CaseId id);

struct WeightProfile {
  enum class Tag { Uniform, Linear, TwoClass, Custom };

  Tag tag = Tag::Uniform;
  // Figure-caption form W_i = 1 + 99*boosted(i); the prose variant is boost=1.
  double two_class_boost = 99.0;
  std::vector<double> custom;

  std::vector<double> materialize(int n) const;

  static WeightProfile uniform() { return {}; }
  static WeightProfile linear() { return {Tag::Linear, 99.0, {}}; }
  static WeightProfile two_class(double boost = 99.0) { return {Tag::TwoClass, boost, {}}; }
  static WeightProfile custom_weights(std::vector<double> w) {
    return {Tag::Custom, 99.0, std::move(w)};
  }
  static WeightProfile parse(const std::string& name);
  std::string name() const;
};

// Peers i = 1..n, 1-based in the case formulas. The "boosted" half of cases
// V/VI is the last floor(n/2) peers. Returns the raw formula values;
// validate_scenario applies the uplink clamp (reachable only in case VI).
Network generate_case(CaseId id, int n, double source_uplink, const WeightProfile& weights,
                      double file_size);

// Whether the 1-based peer index i falls in the boosted class of cases V/VI.
bool case_boosted(int i, int n);

struct FlowRates {
  std::vector<double> rates;

  int size() const { return static_cast<int>(rates.size()); }
};

// N x N transfer-rate matrix; entry (i,j), i != j, is the rate peer i -> peer j,
// and the diagonal holds the source -> i rate, split into a depth-1 part
// (content peer i does not relay) and a depth-2 part (content it relays).
class RateAllocation {
 public:
  explicit RateAllocation(int n)
      : n_(n), rates_(static_cast<size_t>(n) * n, 0.0), depth1_(n, 0.0), depth2_(n, 0.0) {}

  int size() const { return n_; }
  double rate(int i, int j) const { return rates_[idx(i, j)]; }
  double source_rate(int i) const { return rates_[idx(i, i)]; }
  double depth1_source_rate(int i) const { return depth1_[i]; }
  double depth2_source_rate(int i) const { return depth2_[i]; }

  void add_rate(int i, int j, double v);
  void add_source_rate_depth1(int i, double v);
  void add_source_rate_depth2(int i, double v);

  double source_total() const;
  double upload_of(int i) const;    // sum over j != i of rate(i,j)
  double download_of(int j) const;  // source_rate(j) + relays into j

  // Throws std::domain_error on any capacity violation beyond 1e-9 relative.
  void check_capacities(const Network& net) const;

  static RateAllocation from_matrix(const std::vector<double>& row_major, int n);

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }

  int n_;
  std::vector<double> rates_;
  std::vector<double> depth1_;
  std::vector<double> depth2_;
};

}  // namespace p2pcast
