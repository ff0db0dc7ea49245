#include "valveflow/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "valveflow/error.hpp"

namespace valveflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw UsageError(what + ": empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (errno != 0 || end != t.c_str() + t.size()) {
    throw UsageError(what + ": cannot read a number from '" + t + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start), what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

State parse_state(const std::string& text, const std::string& what) {
  const std::vector<double> v = parse_list(text, what);
  if (v.size() != 2) throw UsageError(what + ": a state is written rho,q");
  try {
    return State(v[0], v[1]);
  } catch (const OutOfRange& e) {
    throw UsageError(what + ": " + e.what());
  }
}

Config Config::parse(std::istream& in, const std::string& origin) {
  Config c;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(origin + ":" + std::to_string(n) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(origin + ":" + std::to_string(n) + ": empty key");
    c.kv_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value) { kv_[trim(key)] = trim(value); }

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw UsageError("expected key=value, got '" + assignment + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

bool Config::has(const std::string& key) const { return kv_.count(key) != 0; }

std::string Config::get(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw UsageError("missing configuration key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const { return parse_double(get(key), key); }

bool Config::get_bool(const std::string& key) const {
  const std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError(key + ": expected a boolean, got '" + v + "'");
}

State Config::get_state(const std::string& key) const { return parse_state(get(key), key); }

std::vector<double> Config::get_list(const std::string& key) const {
  return parse_list(get(key), key);
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double Config::get_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

bool Config::get_or(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::optional<State> Config::find_state(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_state(key);
}

}  // namespace valveflow
