#include "lfpp/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lfpp {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.sections_[section][key] = Entry{value, lineno};
  }
  return cfg;
}

void ConfigFile::fail(const std::string& section, const std::string& key,
                      const std::string& why) const {
  std::string where = origin_;
  const auto s = sections_.find(section);
  if (s != sections_.end()) {
    const auto k = s->second.find(key);
    if (k != s->second.end()) where += ":" + std::to_string(k->second.line);
  }
  throw std::runtime_error(where + ": [" + section + "] " + key + ": " + why);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end() || !s->second.count(key)) fail(section, key, "missing key");
  return s->second.at(key).value;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::number(const std::string& section, const std::string& key) const {
  const std::string v = get(section, key);
  try {
    std::size_t pos;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing text");
    return x;
  } catch (const std::exception&) {
    fail(section, key, "not a number: '" + v + "'");
  }
}

double ConfigFile::number_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

long ConfigFile::integer(const std::string& section, const std::string& key) const {
  const std::string v = get(section, key);
  try {
    std::size_t pos;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing text");
    return x;
  } catch (const std::exception&) {
    fail(section, key, "not an integer: '" + v + "'");
  }
}

long ConfigFile::integer_or(const std::string& section, const std::string& key,
                            long fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

std::vector<double> ConfigFile::numbers(const std::string& section,
                                        const std::string& key) const {
  std::istringstream is(get(section, key));
  std::vector<double> out;
  double x;
  while (is >> x) out.push_back(x);
  if (out.empty()) fail(section, key, "expected a list of numbers");
  return out;
}

complex ConfigFile::complex_value(const std::string& section, const std::string& key) const {
  const auto v = numbers(section, key);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  fail(section, key, "expected 're im'");
}

Region ConfigFile::region(const std::string& section, const std::string& key) const {
  std::istringstream is(get(section, key));
  std::string kind;
  is >> kind;
  try {
    if (kind == "disk") {
      double x, y, r;
      if (!(is >> x >> y >> r)) throw std::runtime_error("disk needs x y r");
      return Region::disk({x, y}, r);
    }
    if (kind == "annulus") {
      double x, y, r1, r2;
      if (!(is >> x >> y >> r1 >> r2)) throw std::runtime_error("annulus needs x y r1 r2");
      return Region::annulus({x, y}, r1, r2);
    }
    if (kind == "rect") {
      double x0, y0, x1, y1;
      if (!(is >> x0 >> y0 >> x1 >> y1)) throw std::runtime_error("rect needs x0 y0 x1 y1");
      return Region::rectangle({x0, y0}, {x1, y1});
    }
    throw std::runtime_error("unknown region kind '" + kind + "'");
  } catch (const std::exception& e) {
    fail(section, key, e.what());
  }
}

std::string ConfigFile::dump() const {
  std::ostringstream os;
  for (const auto& [sec, entries] : sections_) {
    os << "[" << sec << "]\n";
    for (const auto& [key, e] : entries) os << key << " = " << e.value << "\n";
  }
  return os.str();
}

MapFamily default_map_family(double tau) {
  MapFamily fam;
  fam.tau = tau;
  fam.V = Region::disk({0.63, 0.0}, 0.34);
  fam.U = Region::disk({0.63, 0.0}, 0.60);
  const complex c{0.63, 0.0};
  fam.maps = {identity_map(), affine_map({2, 0}, {-0.63, 0}),
              power_series_map(c, 0.6, {c * c + 2.0, 2.0 * c, complex(1, 0)})};
  return fam;
}

double ExperimentConfig::resolve_q() const {
  if (q) return *q;
  if (table) {
    if (table->q_hat) return *table->q_hat;
    return fit_exponent(*table).q_hat;
  }
  throw std::runtime_error("config: q not given and no scaling table to fit it from");
}

void ExperimentConfig::validate() const {
  if (!(xi > 0.0)) throw std::runtime_error("config: xi must be > 0");
  if (!(spacing > 0.0)) throw std::runtime_error("config: spacing must be > 0");
  if (eps_schedule.empty()) throw std::runtime_error("config: empty eps schedule");
  for (std::size_t k = 1; k < eps_schedule.size(); ++k)
    if (!(eps_schedule[k] < eps_schedule[k - 1]))
      throw std::runtime_error("config: eps schedule must be strictly decreasing");
  if (eps_ref > eps_schedule.back() * (1 + 1e-12))
    throw std::runtime_error("config: eps_ref must be <= min(schedule)");
  if (!W.compactly_inside(Wt) || !Wt.compactly_inside(V) || !V.compactly_inside(U))
    throw std::runtime_error("config: region chain must satisfy W ⋐ Wt ⋐ V ⋐ U");
  if (replicas < 1) throw std::runtime_error("config: replicas must be >= 1");
}

ExperimentConfig load_experiment_config(const ConfigFile& file) {
  ExperimentConfig cfg;
  cfg.raw = file;
  cfg.name = file.get("experiment", "name");
  cfg.seed = static_cast<std::uint64_t>(file.integer_or("experiment", "seed", 1));
  cfg.replicas = static_cast<int>(file.integer_or("experiment", "replicas", 20));
  cfg.threads = static_cast<int>(file.integer_or("experiment", "threads", 0));

  cfg.xi = file.number_or("params", "xi", 0.2);
  if (file.has("params", "gamma")) cfg.gamma = file.number("params", "gamma");
  if (file.has("params", "q")) cfg.q = file.number("params", "q");

  cfg.spacing = file.number_or("grid", "spacing", 1.0 / 128.0);
  cfg.torus_factor = file.number_or("grid", "torus_factor", 2.0);

  if (file.has("regions", "W")) cfg.W = file.region("regions", "W");
  if (file.has("regions", "Wt")) cfg.Wt = file.region("regions", "Wt");
  if (file.has("regions", "V")) cfg.V = file.region("regions", "V");
  if (file.has("regions", "U")) cfg.U = file.region("regions", "U");

  cfg.tau = file.number_or("thresholds", "tau", 2.0);
  cfg.zeta = file.number_or("thresholds", "zeta", 0.1);
  cfg.delta = file.number_or("thresholds", "delta", 0.25);
  cfg.alpha = file.number_or("thresholds", "alpha", 0.9);
  cfg.A = file.number_or("thresholds", "A", 4.0);
  cfg.C = file.number_or("thresholds", "C", 4.0);
  cfg.rho = file.number_or("thresholds", "rho", 0.1);

  if (file.has("maps", "family")) {
    cfg.family = read_map_family(file.get("maps", "family"));
  } else {
    cfg.family = default_map_family(file.number_or("maps", "tau", 2.5));
    cfg.family.V = cfg.V;
    cfg.family.U = cfg.U;
  }
  if (file.has("maps", "tau")) cfg.family.tau = file.number("maps", "tau");

  if (file.has("schedule", "eps")) {
    cfg.eps_schedule = file.numbers("schedule", "eps");
  } else {
    cfg.eps_schedule = {0.04, 0.02, 0.01};
  }
  cfg.eps_ref = file.number_or("schedule", "eps_ref", cfg.eps_schedule.back());

  if (file.has("scaling", "table")) cfg.table = read_scaling_table(file.get("scaling", "table"));

  const std::string field = file.get_or("field", "kind", "gff");
  if (field == "gff") {
    cfg.field_source = FieldSource::gff;
  } else if (field == "constant") {
    cfg.field_source = FieldSource::constant;
    cfg.field_constant = file.number_or("field", "value", 1.0);
  } else if (field == "zero") {
    cfg.field_source = FieldSource::zero;
  } else {
    throw std::runtime_error("config: [field] kind must be gff|constant|zero");
  }

  cfg.validate();
  return cfg;
}

}  // namespace lfpp
