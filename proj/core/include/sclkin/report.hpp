#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sclkin {

struct StatisticRecord {
  std::string name;
  std::string kind;        // "z" | "p" | "count" | "residual" | "value"
  double estimate = 0.0;
  double std_error = 0.0;
  double reference = 0.0;  // reference value or threshold, per kind
  double score = 0.0;      // z-score, p-value, violation count, ...
  bool pass = true;

  friend bool operator==(const StatisticRecord&, const StatisticRecord&) = default;
};

/// Structured result of one verification experiment.  Verdicts derive
/// from the thresholds baked into the records; wall_seconds is for console
/// output only and is never serialized, keeping artifacts bitwise
/// reproducible across reruns and worker counts.
struct ExperimentReport {
  int schema_version = 1;
  std::string experiment;
  std::string parameters_json = "{}";  // resolved configuration, canonical JSON
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  std::vector<StatisticRecord> statistics;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  bool pass = true;
  double wall_seconds = 0.0;

  bool equivalent(const ExperimentReport& other) const;  // ignores wall_seconds
};

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);
std::string report_summary_csv(const ExperimentReport& report);

}  // namespace sclkin
