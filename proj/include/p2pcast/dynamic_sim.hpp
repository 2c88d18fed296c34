#pragma once

#include <span>
#include <string>
#include <vector>

#include "p2pcast/model.hpp"

namespace p2pcast {

enum class DynamicMode { Retain, LeaveOnFinish };

struct JoinEvent {
  double time = 0.0;
  PeerSpec peer;
};

// Roster-level simulator state. Entries 0..n0-1 are the initial peers,
// later entries are joiners in schedule order.
struct DynamicState {
  std::vector<PeerSpec> roster;
  std::vector<double> residual;   // q_i in (0,1]; 0 once finished
  std::vector<char> active;       // joined and still downloading
  double source_pool = 0.0;       // U_s plus retained finished-peer uplinks

  double effective_downlink(int i) const {
    return roster[i].downlink < source_pool ? roster[i].downlink : source_pool;
  }
};

struct PrecedenceVerdict {
  bool precedes = false;         // the two-branch condition with budget s
  bool approx_precedes = false;  // W_i/q_i >= W_j/q_j
};

// Pairwise ordering test: should peer i be fully supported over peer j given
// that they jointly hold uplink budget s. Also reports the transitive
// W/q approximation used by the selection heuristic.
PrecedenceVerdict precedence(const DynamicState& st, int i, int j, double pairwise_budget);

struct SupportSelection {
  std::vector<int> supported;          // roster indices, selection order
  std::vector<double> epoch_weights;   // 1 for supported, 0 otherwise
};

// Sorts active peers by W/q descending (ties: q ascending, then index) and
// takes the shortest prefix whose effective downlinks cover the uplink
// budget source_pool + sum of active uplinks; all active peers when no
// prefix suffices.
SupportSelection select_support_set(const DynamicState& st);

struct EpochRecord {
  double t_start = 0.0;
  double duration = 0.0;
  std::string event;              // "finish:<ids>", "join:<ids>" or both; 1-based ids
  std::vector<int> supported;
  std::vector<double> epoch_weights;
  std::vector<double> rates;      // per roster entry; 0 if not active
};

struct DynamicTrace {
  std::vector<EpochRecord> epochs;
  std::vector<double> finish_times;      // absolute, per roster entry
  std::vector<double> original_weights;  // roster weights the WSDT uses
  double wsdt = 0.0;
  int initial_peer_count = 0;
};

// Event loop of the dynamic rateless-coding scheme: on every finish/join,
// re-select the support set, re-run the static depth-2 allocator on the
// active roster with 0/1 epoch weights, and advance to the next event.
// Retain mode pools a finished peer's uplink into the source.
DynamicTrace simulate_dynamic(const Network& net, DynamicMode mode,
                              std::span<const JoinEvent> joins = {});

}  // namespace p2pcast
