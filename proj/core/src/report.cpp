#include "sclkin/report.hpp"

#include <sstream>

#include <json.hpp>

namespace sclkin {

using nlohmann::json;

bool ExperimentReport::equivalent(const ExperimentReport& other) const {
  return schema_version == other.schema_version && experiment == other.experiment &&
         parameters_json == other.parameters_json && seed == other.seed &&
         paths == other.paths && statistics == other.statistics &&
         warnings == other.warnings && notes == other.notes && pass == other.pass;
}

std::string report_to_json(const ExperimentReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["experiment"] = r.experiment;
  j["parameters"] = json::parse(r.parameters_json);
  j["seed"] = r.seed;
  j["paths"] = r.paths;
  json stats = json::array();
  for (const auto& s : r.statistics) {
    stats.push_back({{"name", s.name},
                     {"kind", s.kind},
                     {"estimate", s.estimate},
                     {"std_error", s.std_error},
                     {"reference", s.reference},
                     {"score", s.score},
                     {"pass", s.pass}});
  }
  j["statistics"] = std::move(stats);
  j["warnings"] = r.warnings;
  j["notes"] = r.notes;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.experiment = j.at("experiment").get<std::string>();
  r.parameters_json = j.at("parameters").dump();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.paths = j.at("paths").get<std::size_t>();
  for (const auto& s : j.at("statistics")) {
    StatisticRecord rec;
    rec.name = s.at("name").get<std::string>();
    rec.kind = s.at("kind").get<std::string>();
    rec.estimate = s.at("estimate").get<double>();
    rec.std_error = s.at("std_error").get<double>();
    rec.reference = s.at("reference").get<double>();
    rec.score = s.at("score").get<double>();
    rec.pass = s.at("pass").get<bool>();
    r.statistics.push_back(std::move(rec));
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.pass = j.at("pass").get<bool>();
  return r;
}

std::string report_summary_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "experiment,name,kind,estimate,std_error,reference,score,pass\n";
  for (const auto& s : r.statistics) {
    os << r.experiment << ',' << s.name << ',' << s.kind << ',' << s.estimate << ','
       << s.std_error << ',' << s.reference << ',' << s.score << ','
       << (s.pass ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace sclkin
