#include "lfpp/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace lfpp {

void ExperimentReport::flag(bool ok, const std::string& what) {
  if (!ok) {
    pass = false;
    failures.push_back(what);
  }
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = name;
  j["pass"] = pass;
  j["failures"] = failures;
  j["config"] = config_echo;
  j["metrics"] = metrics;
  j["provenance"] = provenance;
  return j;
}

void ExperimentReport::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  const auto json_path = std::filesystem::path(dir) / (name + ".json");
  std::ofstream js(json_path, std::ios::trunc);
  if (!js) throw std::runtime_error("report: cannot open " + json_path.string());
  js << to_json().dump(2) << "\n";
  if (!csv_rows.empty()) {
    const auto csv_path = std::filesystem::path(dir) / (name + ".csv");
    std::ofstream cs(csv_path, std::ios::trunc);
    if (!cs) throw std::runtime_error("report: cannot open " + csv_path.string());
    cs << "eps,metric,value,estimator\n";
    for (const auto& row : csv_rows) cs << row << "\n";
  }
}

std::pair<double, double> wilson_interval(int k, int n) {
  if (n <= 0) throw std::invalid_argument("wilson_interval: n must be > 0");
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double p = static_cast<double>(k) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace lfpp
