#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "p2pcast/model.hpp"

namespace p2pcast {

// Malformed document (JSON syntax, missing/ill-typed fields). Distinct from
// ScenarioError so the CLI can map the two to different exit codes.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario document:
//   {"source_uplink": 2, "file_size": 1,
//    "peers": [{"uplink": 1, "downlink": "inf", "weight": 1}, ...]}
// "downlink" accepts a number or "inf". Returns the network as written;
// callers validate.
Network load_scenario(std::istream& in);
Network load_scenario_file(const std::string& path);
std::string scenario_json(const Network& net);

}  // namespace p2pcast
