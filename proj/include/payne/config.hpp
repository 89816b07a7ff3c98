#pragma once

#include <map>
#include <string>
#include <vector>

namespace payne {

/// Effective parameters of one command, as validated strings keyed by flag name
/// (`refine`, `eps-list`, ...). Typed getters parse on access.
class ParameterSet {
public:
  /// Throws ConfigError for unknown keys or values that fail validation.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  /// Later sets win.
  void merge(const ParameterSet& other);

  std::string text(const std::string& key, const std::string& fallback) const;
  int integer(const std::string& key, int fallback) const;
  double real(const std::string& key, double fallback) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

/// Canonical key: lower case, '_' replaced by '-'.
std::string canonical_key(const std::string& key);

/// True when `key` (canonical) is a recognized parameter.
bool known_parameter(const std::string& key);
/// Every recognized parameter name, sorted.
std::vector<std::string> parameter_names();

/// Flat `key = value` lines; `#` starts a comment; blank lines ignored.
/// ConfigError carries the line number for syntax errors and the key for bad values.
ParameterSet parse_config(const std::string& text, const std::string& source = "<config>");
ParameterSet load_config(const std::string& path);

}  // namespace payne
