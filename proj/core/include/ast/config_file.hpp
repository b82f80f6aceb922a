#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ast {

/// Plain-text key-value configuration with optional [sections].
///
///   # comment
///   [scenario]
///   dt = 0.1
///   support.car_x = -43.75, -26.25
///
/// Keys are addressed as "section.key"; keys before any section header live
/// at the top level. Lists are comma separated.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig load(const std::filesystem::path& path);
  static KeyValueConfig parse(const std::string& text);

  bool has(const std::string& key) const;
  std::optional<std::string> raw(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  /// Every key under "section." with the prefix stripped.
  std::map<std::string, std::string> section(const std::string& name) const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  /// Keys present in the file that no getter has asked for, i.e. typos or
  /// settings this program does not understand.
  std::vector<std::string> unread_keys() const;
  /// Throws ConfigError naming every unread key.
  void reject_unread_keys() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
};

}  // namespace ast
