#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dws/scalar.hpp"

namespace dws {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Plain-text nested key-value document: bracketed [section.sub] headers,
// one `key = value` per line, `#` comments.
class Config {
 public:
  static Config parse_string(const std::string& text, const std::string& origin = "<string>") {
    Config cfg;
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
          throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty())
          throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
        cfg.sections_[section];  // declare even if empty
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
      cfg.sections_[section][key] = value;
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
  }

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
  bool has(const std::string& s, const std::string& k) const {
    const auto it = sections_.find(s);
    return it != sections_.end() && it->second.count(k) > 0;
  }

  std::string get_string(const std::string& s, const std::string& k) const {
    const auto it = sections_.find(s);
    if (it == sections_.end()) throw ConfigError("missing section [" + s + "]");
    const auto kt = it->second.find(k);
    if (kt == it->second.end()) throw ConfigError("missing key '" + k + "' in section [" + s + "]");
    return kt->second;
  }

  std::string get_string(const std::string& s, const std::string& k,
                         const std::string& fallback) const {
    return has(s, k) ? get_string(s, k) : fallback;
  }

  Scalar get_scalar(const std::string& s, const std::string& k) const {
    const auto text = get_string(s, k);
    const auto v = parse_scalar(text);
    if (!v) throw ConfigError("key '" + k + "' in [" + s + "]: not a number: '" + text + "'");
    return *v;
  }

  Scalar get_scalar(const std::string& s, const std::string& k, const Scalar& fallback) const {
    return has(s, k) ? get_scalar(s, k) : fallback;
  }

  double get_double(const std::string& s, const std::string& k) const {
    return get_scalar(s, k).value();
  }
  double get_double(const std::string& s, const std::string& k, double fallback) const {
    return has(s, k) ? get_double(s, k) : fallback;
  }

  long get_int(const std::string& s, const std::string& k) const {
    const Scalar v = get_scalar(s, k);
    if (!v.exact() || !v.rational().is_integer())
      throw ConfigError("key '" + k + "' in [" + s + "]: expected an integer");
    return v.rational().num();
  }
  long get_int(const std::string& s, const std::string& k, long fallback) const {
    return has(s, k) ? get_int(s, k) : fallback;
  }

  bool get_bool(const std::string& s, const std::string& k, bool fallback) const {
    if (!has(s, k)) return fallback;
    const auto v = get_string(s, k);
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError("key '" + k + "' in [" + s + "]: expected a boolean, got '" + v + "'");
  }

  // Rejects sections or keys outside the schema; points at the offender.
  void validate(const std::map<std::string, std::set<std::string>>& schema) const {
    for (const auto& [section, keys] : sections_) {
      const auto it = schema.find(section);
      if (it == schema.end()) throw ConfigError("unknown section [" + section + "]");
      for (const auto& [key, value] : keys) {
        (void)value;
        if (!it->second.count(key))
          throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
      }
    }
  }

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// The full run-configuration schema; commands require subsets of it.
inline const std::map<std::string, std::set<std::string>>& run_config_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"dissipation.b1", {"family", "mu", "r", "gamma", "c"}},
      {"dissipation.b2", {"family", "mu", "r", "gamma", "c"}},
      {"scenario", {"n", "m", "p", "q", "gamma1", "gamma2", "alpha", "beta", "s1", "s2"}},
      {"grid", {"dim", "points", "half_length"}},
      {"run",
       {"t_end", "outputs", "output_spacing", "output_start", "epsilon", "seed",
        "profile_center", "profile_width", "velocity_data", "nonlinear", "signed_form"}},
      {"checks", {"theorem", "c_max", "fit_window", "tolerance", "rtol", "fit_horizon"}},
  };
  return schema;
}

}  // namespace dws
