#include "payne/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "payne/errors.hpp"
#include "payne/radial_grid.hpp"

namespace payne {

namespace {

enum class Type { text, choice, integer, real, real_list, flag };

struct Spec {
  Type type;
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  bool lo_open = false;
  std::vector<std::string> choices;
  const char* range_text = "";
};

const std::map<std::string, Spec>& schema() {
  static const std::map<std::string, Spec> s = {
      {"domain", {Type::choice, 0, 0, false, {"disk", "rectangle", "polygon", "file"}}},
      {"mesh-file", {Type::text}},
      {"refine", {Type::integer, 0, 8, false, {}, "an integer in [0, 8]"}},
      {"radius", {Type::real, 0, HUGE_VAL, true, {}, "positive"}},
      {"width", {Type::real, 0, HUGE_VAL, true, {}, "positive"}},
      {"height", {Type::real, 0, HUGE_VAL, true, {}, "positive"}},
      {"nx", {Type::integer, 1, 1024, false, {}, "an integer in [1, 1024]"}},
      {"ny", {Type::integer, 1, 1024, false, {}, "an integer in [1, 1024]"}},
      {"sides", {Type::integer, 3, 64, false, {}, "an integer in [3, 64]"}},
      {"problem", {Type::choice, 0, 0, false, {"dirichlet", "neumann", "buckling", "navier"}}},
      {"order", {Type::integer, 1, 2, false, {}, "1 or 2"}},
      {"count", {Type::integer, 1, 500, false, {}, "an integer in [1, 500]"}},
      {"kind", {Type::choice, 0, 0, false, {"friedlander", "liu"}}},
      {"operator", {Type::choice, 0, 0, false, {"dtn", "ntl"}}},
      {"lmin", {Type::real}},
      {"lmax", {Type::real}},
      {"points", {Type::integer, 0, 100000, false, {}, "an integer in [0, 100000]"}},
      {"delta", {Type::real, 0, 0.1, true, {}, "in (0, 0.1]"}},
      {"lambda", {Type::real}},
      {"eps", {Type::real_list, 0, HUGE_VAL, true, {}, "positive"}},
      {"regime", {Type::choice, 0, 0, false, {"auto", "divergence", "bounded"}}},
      {"trials", {Type::integer, 0, 1e7, false, {}, "an integer in [0, 10000000]"}},
      {"seed", {Type::integer, 0, 2147483647.0, false, {}, "a non-negative integer"}},
      {"eps-list", {Type::real_list, 0, kMaxCapRadius, true, {}, "in (0, pi/2]"}},
      {"n-nodes", {Type::integer, 8, 100000, false, {}, "an integer in [8, 100000]"}},
      {"modes", {Type::integer, 2, 64, false, {}, "an integer in [2, 64]"}},
      {"threads", {Type::integer, 1, 256, false, {}, "an integer in [1, 256]"}},
      {"max-dofs", {Type::integer, 1, 1e9, false, {}, "a positive integer"}},
      {"sign-check", {Type::flag}},
  };
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::optional<double> parse_real(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(const std::string& s) {
  const std::string t = trim(s);
  long long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

bool in_range(const Spec& spec, double v) {
  if (spec.lo_open ? !(v > spec.lo) : !(v >= spec.lo)) return false;
  return v <= spec.hi;
}

std::string validate(const std::string& key, const std::string& raw) {
  const auto& s = schema();
  auto it = s.find(key);
  if (it == s.end()) throw ConfigError("unknown parameter `" + key + "`");
  const Spec& spec = it->second;
  const std::string value = trim(raw);
  auto bad = [&](const std::string& why) { return ConfigError(key + ": " + why + " (got `" + value + "`)"); };
  switch (spec.type) {
    case Type::text:
      if (value.empty()) throw bad("empty value");
      return value;
    case Type::choice:
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        std::string list;
        for (const auto& c : spec.choices) list += (list.empty() ? "" : "|") + c;
        throw bad("expected one of " + list);
      }
      return value;
    case Type::flag:
      if (value != "true" && value != "false") throw bad("expected true or false");
      return value;
    case Type::integer: {
      const auto v = parse_integer(value);
      if (!v) throw bad("not an integer");
      if (!in_range(spec, static_cast<double>(*v))) throw bad(std::string("out of range, must be ") + spec.range_text);
      return value;
    }
    case Type::real: {
      const auto v = parse_real(value);
      if (!v) throw bad("not a number");
      if (!in_range(spec, *v)) throw bad(std::string("out of range, must be ") + spec.range_text);
      return value;
    }
    case Type::real_list: {
      const auto items = split_list(value);
      if (items.empty()) throw bad("empty list");
      for (const auto& item : items) {
        const auto v = parse_real(item);
        if (!v) throw bad("`" + item + "` is not a number");
        if (!in_range(spec, *v)) throw bad("value " + item + " out of range, must be " + spec.range_text);
      }
      return value;
    }
  }
  return value;
}

}  // namespace

std::string canonical_key(const std::string& key) {
  std::string k = trim(key);
  for (char& c : k) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '_') c = '-';
  }
  return k;
}

bool known_parameter(const std::string& key) { return schema().count(key) != 0; }

std::vector<std::string> parameter_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : schema()) names.push_back(k);
  return names;
}

void ParameterSet::set(const std::string& key, const std::string& value) {
  const std::string k = canonical_key(key);
  values_[k] = validate(k, value);
}

void ParameterSet::merge(const ParameterSet& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::string ParameterSet::text(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int ParameterSet::integer(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : static_cast<int>(*parse_integer(it->second));
}

double ParameterSet::real(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : *parse_real(it->second);
}

std::vector<double> ParameterSet::reals(const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(*parse_real(item));
  return out;
}

ParameterSet parse_config(const std::string& text, const std::string& source) {
  ParameterSet p;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected `key = value`");
    const std::string key = canonical_key(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "missing key");
    try {
      p.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return p;
}

ParameterSet load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file `" + path + "`");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace payne
