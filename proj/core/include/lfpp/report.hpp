#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace lfpp {

inline constexpr const char* kCodeVersion = "lfpp-lab 0.1.0";

// Structured result of a named experiment run. Every numeric metric carries
// its estimator type; reruns with the same (config, seed) are bit-identical,
// so wall-clock timestamps live only in the side manifest, never here.
struct ExperimentReport {
  std::string name;
  nlohmann::json config_echo;
  nlohmann::json metrics;
  nlohmann::json provenance;  // code version, kernel profile id, seeds, family
  bool pass = true;
  std::vector<std::string> failures;

  // Per-eps CSV table ("eps,metric,value,estimator").
  std::vector<std::string> csv_rows;

  void flag(bool ok, const std::string& what);
  nlohmann::json to_json() const;
  // Writes <dir>/<name>.json and, if csv_rows nonempty, <dir>/<name>.csv.
  void write(const std::string& dir) const;
};

// Wilson 95% score interval for k successes out of n.
std::pair<double, double> wilson_interval(int k, int n);

}  // namespace lfpp
