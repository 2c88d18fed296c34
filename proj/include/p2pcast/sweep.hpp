#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "p2pcast/model.hpp"

namespace p2pcast {

// Scheme labels accepted by run_sweep.
inline constexpr const char* kSweepSchemes[] = {
    "lowerbound", "extended", "depth2", "routing", "dynamic-retain", "dynamic-leave",
};

struct SweepSpec {
  std::string case_label = "I";         // "I".."VI", or "scenario" with explicit network
  std::optional<CaseId> case_id = CaseId::I;
  std::optional<Network> scenario;      // raw; validated per run with each U_s unchanged
  int n = 10;
  std::vector<double> source_uplinks;   // positive, ascending
  WeightProfile weights;
  double file_size = 1.0;
  std::vector<std::string> schemes;
};

struct SweepRow {
  std::string case_label;
  int n = 0;
  double us = 0.0;
  std::string scheme;
  double wsdt = 0.0;
  double lower_bound = 0.0;
  double ratio = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// header: case,n,us,scheme,wsdt,lower_bound,ratio ; 12 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);

std::vector<double> log_spaced(double lo, double hi, int count);

// %.12g with "inf" for unbounded values; shared by all CSV emitters.
std::string format_number(double v);

}  // namespace p2pcast
