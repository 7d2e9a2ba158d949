#include "epistock/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "epistock/errors.hpp"

namespace epistock {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw ParseError("value for " + key + " is not a number: '" + value + "'");
  }
  return d;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("value for " + key + " is not a boolean: '" + value + "'");
}

struct KeyEntry {
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

// One entry per accepted key, in canonical echo order.
std::vector<KeyEntry> build_key_table() {
  std::vector<KeyEntry> t;

  auto num = [&t](const std::string& key, auto accessor) {
    t.push_back({key,
                 [key, accessor](ScenarioConfig& c, const std::string& v) {
                   *accessor(c) = parse_double(key, v);
                 },
                 [accessor](const ScenarioConfig& c) {
                   return format_double(*accessor(const_cast<ScenarioConfig&>(c)));
                 }});
  };

  num("epidemic.r0", [](ScenarioConfig& c) { return &c.epidemic.r0; });
  num("epidemic.gamma", [](ScenarioConfig& c) { return &c.epidemic.gamma; });
  num("epidemic.r", [](ScenarioConfig& c) { return &c.epidemic.r; });
  num("epidemic.w", [](ScenarioConfig& c) { return &c.epidemic.w; });

  for (int side = 0; side < 2; ++side) {
    const bool is_a = side == 0;
    const std::string sec = is_a ? "community_a." : "community_b.";
    auto comm = [is_a](ScenarioConfig& c) -> CommunityParams& {
      return is_a ? c.community_a : c.community_b;
    };
    num(sec + "n", [comm](ScenarioConfig& c) { return &comm(c).n; });
    num(sec + "s_max", [comm](ScenarioConfig& c) { return &comm(c).s_max; });
    num(sec + "p0", [comm](ScenarioConfig& c) { return &comm(c).p0; });
    num(sec + "p_max", [comm](ScenarioConfig& c) { return &comm(c).p_max; });
    num(sec + "d0", [comm](ScenarioConfig& c) { return &comm(c).d0; });
    num(sec + "onset", [comm](ScenarioConfig& c) { return &comm(c).onset; });
  }

  num("sharing.theta", [](ScenarioConfig& c) { return &c.sharing.theta; });
  num("sharing.k_switch", [](ScenarioConfig& c) { return &c.sharing.k_switch; });
  t.push_back({"sharing.enabled",
               [](ScenarioConfig& c, const std::string& v) {
                 c.sharing.enabled = parse_bool("sharing.enabled", v);
               },
               [](const ScenarioConfig& c) {
                 return std::string(c.sharing.enabled ? "true" : "false");
               }});

  num("numerics.rel_tol", [](ScenarioConfig& c) { return &c.numerics.rel_tol; });
  num("numerics.abs_tol", [](ScenarioConfig& c) { return &c.numerics.abs_tol; });
  num("numerics.h_init", [](ScenarioConfig& c) { return &c.numerics.h_init; });
  num("numerics.h_min", [](ScenarioConfig& c) { return &c.numerics.h_min; });
  num("numerics.h_max", [](ScenarioConfig& c) { return &c.numerics.h_max; });
  num("numerics.dense_output_dt",
      [](ScenarioConfig& c) { return &c.numerics.dense_output_dt; });
  num("numerics.horizon", [](ScenarioConfig& c) { return &c.numerics.horizon; });
  t.push_back({"numerics.integrator",
               [](ScenarioConfig& c, const std::string& v) {
                 c.numerics.integrator = trim(v);
               },
               [](const ScenarioConfig& c) { return c.numerics.integrator; }});
  num("numerics.k_delay",
      [](ScenarioConfig& c) { return &c.numerics.model.k_delay; });
  num("numerics.k_stock_step",
      [](ScenarioConfig& c) { return &c.numerics.model.k_stock_step; });
  num("numerics.s_offset",
      [](ScenarioConfig& c) { return &c.numerics.model.s_offset; });
  num("numerics.k_clamp",
      [](ScenarioConfig& c) { return &c.numerics.model.k_clamp; });
  t.push_back({"numerics.demand_mode",
               [](ScenarioConfig& c, const std::string& v) {
                 const std::string m = trim(v);
                 if (m == "tracks_infected") {
                   c.numerics.model.demand_mode = DemandMode::TracksInfected;
                 } else if (m == "integrates_infected") {
                   c.numerics.model.demand_mode = DemandMode::IntegratesInfected;
                 } else {
                   throw ValidationError(
                       "numerics.demand_mode",
                       "must be tracks_infected or integrates_infected");
                 }
               },
               [](const ScenarioConfig& c) {
                 return to_string(c.numerics.model.demand_mode);
               }});

  return t;
}

const std::vector<KeyEntry>& key_table() {
  static const std::vector<KeyEntry> table = build_key_table();
  return table;
}

const KeyEntry* find_key(const std::string& key) {
  for (const auto& entry : key_table()) {
    if (entry.key == key) return &entry;
  }
  return nullptr;
}

struct Assignment {
  std::string key;
  std::string value;
};

// Accepts `[section]` headers with `key = value` lines, fully-qualified
// `section.key = value` lines, and `#`/`;` comments.
std::vector<Assignment> parse_document(const std::string& text) {
  std::vector<Assignment> out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("line " + std::to_string(lineno) +
                         ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ParseError("line " + std::to_string(lineno) + ": empty section");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected key = value, got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("line " + std::to_string(lineno) + ": empty key");
    }
    if (key.find('.') == std::string::npos) {
      if (section.empty()) {
        throw ParseError("line " + std::to_string(lineno) + ": key '" + key +
                         "' outside any section");
      }
      key = section + "." + key;
    }
    out.push_back({key, value});
  }
  return out;
}

Assignment parse_override(const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos) {
    throw ParseError("override '" + spec + "' is not of the form key=value");
  }
  Assignment a{trim(spec.substr(0, eq)), trim(spec.substr(eq + 1))};
  if (a.key.find('.') == std::string::npos) {
    throw ParseError("override key '" + a.key +
                     "' must be qualified as section.key");
  }
  return a;
}

void check_positive(const std::string& field, double v) {
  if (!(v > 0.0)) throw ValidationError(field, "must be > 0");
}

void check_finite(const std::string& field, double v) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

void validate_community(const std::string& sec, const CommunityParams& c) {
  check_positive(sec + ".n", c.n);
  check_positive(sec + ".s_max", c.s_max);
  check_positive(sec + ".p0", c.p0);
  if (!(c.p0 <= c.p_max)) {
    throw ValidationError(sec + ".p_max", "must be >= p0");
  }
  if (c.d0 != c.p0) {
    throw ValidationError(sec + ".d0",
                          "baseline demand must equal baseline production p0");
  }
  check_finite(sec + ".onset", c.onset);
}

}  // namespace

std::string to_string(DemandMode mode) {
  return mode == DemandMode::TracksInfected ? "tracks_infected"
                                            : "integrates_infected";
}

ScenarioParams ScenarioConfig::params() const {
  return ScenarioParams{epidemic, community_a, community_b, sharing,
                        numerics.model};
}

IntegratorSettings ScenarioConfig::integrator_settings() const {
  IntegratorSettings s;
  s.rel_tol = numerics.rel_tol;
  s.abs_tol = numerics.abs_tol;
  s.h_init = numerics.h_init;
  s.h_min = numerics.h_min;
  s.h_max = numerics.h_max;
  s.dense_output_dt = numerics.dense_output_dt;
  const ScenarioParams p = params();
  s.t_start = default_t_start(p);
  s.t_end = default_t_end(p, numerics.horizon);
  s.method = numerics.integrator == "rk45" ? SolverMethod::Rk45Dopri
                                           : SolverMethod::Rosenbrock2;
  s.abs_scales = default_abs_scales(p);
  return s;
}

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.community_b.onset = 180.0;
  return cfg;
}

void validate_config(const ScenarioConfig& cfg) {
  check_positive("epidemic.r0", cfg.epidemic.r0);
  check_positive("epidemic.gamma", cfg.epidemic.gamma);
  if (!(cfg.epidemic.r >= 0.0 && cfg.epidemic.r < 1.0)) {
    throw ValidationError("epidemic.r", "must lie in [0, 1)");
  }
  if (!(cfg.epidemic.w >= 0.0)) {
    throw ValidationError("epidemic.w", "must be >= 0");
  }
  validate_community("community_a", cfg.community_a);
  validate_community("community_b", cfg.community_b);
  if (!(cfg.sharing.theta >= 0.0 && cfg.sharing.theta <= 1.0)) {
    throw ValidationError("sharing.theta", "must lie in [0, 1]");
  }
  check_positive("sharing.k_switch", cfg.sharing.k_switch);

  const auto& n = cfg.numerics;
  check_positive("numerics.rel_tol", n.rel_tol);
  check_positive("numerics.abs_tol", n.abs_tol);
  if (!(n.h_min > 0.0 && n.h_min <= n.h_init && n.h_init <= n.h_max)) {
    throw ValidationError("numerics.h_init",
                          "requires 0 < h_min <= h_init <= h_max");
  }
  check_positive("numerics.dense_output_dt", n.dense_output_dt);
  check_positive("numerics.horizon", n.horizon);
  if (n.integrator != "auto" && n.integrator != "rk45" &&
      n.integrator != "rosenbrock") {
    throw ValidationError("numerics.integrator",
                          "must be auto, rk45 or rosenbrock");
  }
  check_positive("numerics.k_delay", n.model.k_delay);
  check_positive("numerics.k_stock_step", n.model.k_stock_step);
  check_positive("numerics.s_offset", n.model.s_offset);
  check_positive("numerics.k_clamp", n.model.k_clamp);
}

ScenarioConfig load_config(const std::string& text,
                           const std::vector<std::string>& overrides,
                           std::vector<std::string>* warnings) {
  std::vector<Assignment> assignments = parse_document(text);

  std::set<std::string> seen_override_keys;
  for (const auto& spec : overrides) {
    Assignment a = parse_override(spec);
    if (!seen_override_keys.insert(a.key).second && warnings != nullptr) {
      warnings->push_back("override " + a.key +
                          " given more than once; last value wins");
    }
    assignments.push_back(std::move(a));
  }

  ScenarioConfig cfg = default_config();
  std::set<std::string> assigned;
  for (const auto& a : assignments) {
    const KeyEntry* entry = find_key(a.key);
    if (entry == nullptr) throw UnknownKeyError(a.key);
    entry->set(cfg, a.value);
    assigned.insert(a.key);
  }

  // Dependent defaults: p_max tracks 4*p0 and d0 tracks p0 unless given.
  for (int side = 0; side < 2; ++side) {
    const std::string sec = side == 0 ? "community_a" : "community_b";
    CommunityParams& c = side == 0 ? cfg.community_a : cfg.community_b;
    if (assigned.count(sec + ".p0") != 0) {
      if (assigned.count(sec + ".p_max") == 0) c.p_max = 4.0 * c.p0;
      if (assigned.count(sec + ".d0") == 0) c.d0 = c.p0;
    }
  }

  validate_config(cfg);
  return cfg;
}

std::string echo_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& entry : key_table()) {
    const std::size_t dot = entry.key.find('.');
    const std::string sec = entry.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << "\n";
      out << "[" << sec << "]\n";
      section = sec;
    }
    out << entry.key.substr(dot + 1) << " = " << entry.get(cfg) << "\n";
  }
  return out.str();
}

}  // namespace epistock
