#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lfpp/conformal.hpp"
#include "lfpp/grid.hpp"
#include "lfpp/region.hpp"
#include "lfpp/scaling.hpp"

namespace lfpp {

// Sectioned key-value text config ([section] / key = value). Unknown keys are
// reported with line numbers; values keep their raw text until typed access.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& origin);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  long integer(const std::string& section, const std::string& key) const;
  long integer_or(const std::string& section, const std::string& key, long fallback) const;
  std::vector<double> numbers(const std::string& section, const std::string& key) const;
  complex complex_value(const std::string& section, const std::string& key) const;
  Region region(const std::string& section, const std::string& key) const;

  const std::string& origin() const { return origin_; }
  std::string dump() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& why) const;
};

// Field source switch for experiments: sampled GFF or a deterministic field
// (used by the exact-identity checks).
enum class FieldSource { gff, constant, zero };

struct ExperimentConfig {
  std::string name;

  // params
  double xi = 0.2;
  std::optional<double> gamma;
  std::optional<double> q;  // falls back to the scaling-table fit
  static constexpr double xi_crit_ref = 0.41;

  // grid
  double spacing = 1.0 / 128.0;
  double torus_factor = 2.0;

  // region chain W ⋐ Wt ⋐ V ⋐ U
  Region W = Region::disk({0.63, 0.0}, 0.26);
  Region Wt = Region::disk({0.63, 0.0}, 0.30);
  Region V = Region::disk({0.63, 0.0}, 0.34);
  Region U = Region::disk({0.63, 0.0}, 0.60);

  MapFamily family;

  std::vector<double> eps_schedule;  // strictly decreasing
  double eps_ref = 0.0;              // <= min(schedule)

  // thresholds
  double zeta = 0.1;
  double delta = 0.25;
  double tau = 2.0;
  double alpha = 0.9;
  double A = 4.0;
  double C = 4.0;
  double rho = 0.1;

  std::uint64_t seed = 1;
  int replicas = 20;
  int threads = 0;

  std::optional<ScalingTable> table;

  FieldSource field_source = FieldSource::gff;
  double field_constant = 0.0;

  // experiment-specific knobs kept verbatim
  ConfigFile raw;

  // Resolves Q: explicit q, else table fit, else error.
  double resolve_q() const;

  void validate() const;
};

// Builds the typed config from a parsed file; throws with line information on
// schema violations. Missing [maps] falls back to the default 3-map family.
ExperimentConfig load_experiment_config(const ConfigFile& file);

// The default family {identity, affine 2z - 0.63, (z^2+2 localized)} on the
// default region chain.
MapFamily default_map_family(double tau = 2.5);

}  // namespace lfpp
