#pragma once

// Flat "key = value" configuration. '#' starts a comment; states are written
// "rho,q" and lists are comma separated.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valveflow/gas.hpp"

namespace valveflow {

class Config {
 public:
  /// Throws UsageError on a malformed line; `origin` names the source in messages.
  static Config parse(std::istream& in, const std::string& origin = "<config>");
  /// Throws UsageError if the file cannot be opened.
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  /// Applies "key=value"; throws UsageError without '='.
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

  /// All getters throw UsageError on a missing key or a value that does not parse.
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  State get_state(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;

  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_or(const std::string& key, double fallback) const;
  bool get_or(const std::string& key, bool fallback) const;
  std::optional<State> find_state(const std::string& key) const;

 private:
  std::map<std::string, std::string> kv_;
};

double parse_double(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);
State parse_state(const std::string& text, const std::string& what);

}  // namespace valveflow
