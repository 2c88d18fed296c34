#include "p2pcast/model.hpp"

#include <algorithm>
#include <cmath>

namespace p2pcast {

namespace {

double relative_tol(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

}  // namespace

double Network::total_peer_uplink() const {
  double sum = 0.0;
  for (const auto& p : peers) sum += p.uplink;
  return sum;
}

double Network::total_effective_downlink() const {
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) sum += effective_downlink(i);
  return sum;
}

std::vector<double> Network::weights() const {
  std::vector<double> w(peers.size());
  for (size_t i = 0; i < peers.size(); ++i) w[i] = peers[i].weight;
  return w;
}

std::vector<double> Network::uplinks() const {
  std::vector<double> u(peers.size());
  for (size_t i = 0; i < peers.size(); ++i) u[i] = peers[i].uplink;
  return u;
}

std::vector<double> Network::effective_downlinks() const {
  std::vector<double> d(peers.size());
  for (int i = 0; i < size(); ++i) d[i] = effective_downlink(i);
  return d;
}

Network validate_scenario(const Network& raw) {
  if (raw.peers.empty())
    throw ScenarioError(ScenarioErrorKind::NoPeers, "scenario has no peers");
  if (!(raw.source_uplink > 0.0) || !std::isfinite(raw.source_uplink))
    throw ScenarioError(ScenarioErrorKind::NonpositiveSourceUplink,
                        "non-positive source uplink");
  if (!(raw.file_size > 0.0) || !std::isfinite(raw.file_size))
    throw ScenarioError(ScenarioErrorKind::NonpositiveFileSize, "non-positive file size");
  Network net = raw;
  for (size_t i = 0; i < net.peers.size(); ++i) {
    PeerSpec& p = net.peers[i];
    const std::string at = " (peer " + std::to_string(i + 1) + ")";
    if (std::isnan(p.uplink) || std::isnan(p.downlink) || std::isnan(p.weight) ||
        p.uplink == kUnbounded || p.weight == kUnbounded)
      throw ScenarioError(ScenarioErrorKind::NonfiniteValue, "non-finite peer field" + at);
    if (p.uplink < 0.0)
      throw ScenarioError(ScenarioErrorKind::NegativeUplink, "negative uplink" + at);
    if (!(p.downlink > 0.0))
      throw ScenarioError(ScenarioErrorKind::NonpositiveDownlink, "non-positive downlink" + at);
    if (p.weight < 0.0)
      throw ScenarioError(ScenarioErrorKind::NegativeWeight, "negative weight" + at);
    p.uplink = std::min(p.uplink, p.downlink);
  }
  return net;
}

CaseId parse_case_id(const std::string& text) {
  static const std::pair<const char*, CaseId> table[] = {
      {"I", CaseId::I},   {"II", CaseId::II}, {"III", CaseId::III},
      {"IV", CaseId::IV}, {"V", CaseId::V},   {"VI", CaseId::VI},
      {"1", CaseId::I},   {"2", CaseId::II},  {"3", CaseId::III},
      {"4", CaseId::IV},  {"5", CaseId::V},   {"6", CaseId::VI},
  };
  for (const auto& [name, id] : table)
    if (text == name) return id;
  throw std::invalid_argument("unknown case id: " + text);
}

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::I: return "I";
    case CaseId::II: return "II";
    case CaseId::III: return "III";
    case CaseId::IV: return "IV";
    case CaseId::V: return "V";
    case CaseId::VI: return "VI";
  }
  return "?";
}

bool case_boosted(int i, int n) {
  // Last floor(n/2) peers; coincides with i > n/2 for even n.
  return i > n - n / 2;
}

std::vector<double> WeightProfile::materialize(int n) const {
  std::vector<double> w(n);
  switch (tag) {
    case Tag::Uniform:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case Tag::Linear:
      for (int i = 1; i <= n; ++i) w[i - 1] = static_cast<double>(i) / n;
      break;
    case Tag::TwoClass:
      for (int i = 1; i <= n; ++i) w[i - 1] = 1.0 + (case_boosted(i, n) ? two_class_boost : 0.0);
      break;
    case Tag::Custom:
      if (static_cast<int>(custom.size()) != n)
        throw std::invalid_argument("custom weight profile has wrong length");
      w = custom;
      break;
  }
  return w;
}

WeightProfile WeightProfile::parse(const std::string& name) {
  if (name == "uniform") return uniform();
  if (name == "linear") return linear();
  if (name == "two-class") return two_class();
  throw std::invalid_argument("unknown weight profile: " + name);
}

std::string WeightProfile::name() const {
  switch (tag) {
    case Tag::Uniform: return "uniform";
    case Tag::Linear: return "linear";
    case Tag::TwoClass: return "two-class";
    case Tag::Custom: return "custom";
  }
  return "?";
}

Network generate_case(CaseId id, int n, double source_uplink, const WeightProfile& weights,
                      double file_size) {
  if (n < 1) throw std::invalid_argument("case generator needs n >= 1");
  Network net;
  net.source_uplink = source_uplink;
  net.file_size = file_size;
  net.peers.resize(n);
  const std::vector<double> w = weights.materialize(n);
  for (int i = 1; i <= n; ++i) {
    PeerSpec& p = net.peers[i - 1];
    const double frac = static_cast<double>(i) / n;
    const double boosted = case_boosted(i, n) ? 1.0 : 0.0;
    switch (id) {
      case CaseId::I:   p.uplink = 1.0;                p.downlink = kUnbounded;  break;
      case CaseId::II:  p.uplink = 1.0;                p.downlink = 8.0;         break;
      case CaseId::III: p.uplink = frac;               p.downlink = kUnbounded;  break;
      case CaseId::IV:  p.uplink = frac;               p.downlink = 8.0 * frac;  break;
      case CaseId::V:   p.uplink = 1.0 + 9.0 * boosted; p.downlink = kUnbounded; break;
      case CaseId::VI:  p.uplink = 1.0 + 9.0 * boosted; p.downlink = 8.0 * frac; break;
    }
    p.weight = w[i - 1];
  }
  return net;
}

void RateAllocation::add_rate(int i, int j, double v) {
  if (i == j) throw std::invalid_argument("diagonal entries are set via the depth-split adders");
  rates_[idx(i, j)] += v;
}

void RateAllocation::add_source_rate_depth1(int i, double v) {
  depth1_[i] += v;
  rates_[idx(i, i)] = depth1_[i] + depth2_[i];
}

void RateAllocation::add_source_rate_depth2(int i, double v) {
  depth2_[i] += v;
  rates_[idx(i, i)] = depth1_[i] + depth2_[i];
}

double RateAllocation::source_total() const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) sum += source_rate(i);
  return sum;
}

double RateAllocation::upload_of(int i) const {
  double sum = 0.0;
  for (int j = 0; j < n_; ++j)
    if (j != i) sum += rate(i, j);
  return sum;
}

double RateAllocation::download_of(int j) const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) sum += rate(i, j);
  return sum;
}

void RateAllocation::check_capacities(const Network& net) const {
  if (net.size() != n_) throw std::invalid_argument("allocation size does not match network");
  for (double v : rates_)
    if (v < 0.0) throw std::domain_error("negative rate entry");
  if (source_total() > net.source_uplink + relative_tol(net.source_uplink))
    throw std::domain_error("source uplink exceeded");
  for (int i = 0; i < n_; ++i) {
    const double u = net.peers[i].uplink;
    if (upload_of(i) > u + relative_tol(u))
      throw std::domain_error("peer uplink exceeded (peer " + std::to_string(i + 1) + ")");
    const double d = net.peers[i].downlink;
    if (d != kUnbounded && download_of(i) > d + relative_tol(d))
      throw std::domain_error("peer downlink exceeded (peer " + std::to_string(i + 1) + ")");
  }
}

RateAllocation RateAllocation::from_matrix(const std::vector<double>& row_major, int n) {
  if (static_cast<int>(row_major.size()) != n * n)
    throw std::invalid_argument("rate matrix has wrong size");
  RateAllocation alloc(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j)
        alloc.add_source_rate_depth1(i, row_major[static_cast<size_t>(i) * n + j]);
      else
        alloc.add_rate(i, j, row_major[static_cast<size_t>(i) * n + j]);
    }
  return alloc;
}

}  // namespace p2pcast
