#include "ast/config_file.hpp"

#include "ast/errors.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace ast {
namespace {

namespace pt = boost::property_tree;

KeyValueConfig from_tree(const pt::ptree& tree) {
  KeyValueConfig cfg;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      cfg.set(key, boost::algorithm::trim_copy(node.data()));
      continue;
    }
    for (const auto& [sub, leaf] : node) cfg.set(key + "." + sub, boost::algorithm::trim_copy(leaf.data()));
  }
  return cfg;
}

double parse_double(const std::string& key, const std::string& text) {
  std::string t = boost::algorithm::trim_copy(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "' as a number");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::is_any_of(","));
  for (auto& p : parts) boost::algorithm::trim(p);
  std::erase_if(parts, [](const std::string& s) { return s.empty(); });
  return parts;
}

}  // namespace

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  // Strip trailing "# ..." comments; the INI reader only accepts ';' and
  // whole-line comments.
  std::stringstream cleaned;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (const auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    cleaned << line << '\n';
  }
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(cleaned, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return from_tree(tree);
}

bool KeyValueConfig::has(const std::string& key) const { return values_.contains(key); }

std::optional<std::string> KeyValueConfig::raw(const std::string& key) const {
  read_.insert(key);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  return raw(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = raw(key);
  return v ? parse_double(key, *v) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  const double d = parse_double(key, *v);
  const auto i = static_cast<long long>(d);
  if (static_cast<double>(i) != d) throw ConfigError("config key '" + key + "': expected an integer");
  return i;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  const std::string s = boost::algorithm::to_lower_copy(*v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  const auto v = raw(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& part : split_list(*v)) out.push_back(parse_double(key, part));
  return out;
}

std::vector<std::string> KeyValueConfig::get_strings(const std::string& key,
                                                     const std::vector<std::string>& fallback) const {
  const auto v = raw(key);
  return v ? split_list(*v) : fallback;
}

std::map<std::string, std::string> KeyValueConfig::section(const std::string& name) const {
  std::map<std::string, std::string> out;
  const std::string prefix = name + ".";
  for (const auto& [k, v] : values_)
    if (k.starts_with(prefix)) {
      read_.insert(k);
      out.emplace(k.substr(prefix.size()), v);
    }
  return out;
}

std::vector<std::string> KeyValueConfig::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!read_.contains(k)) out.push_back(k);
  return out;
}

void KeyValueConfig::reject_unread_keys() const {
  const auto unread = unread_keys();
  if (unread.empty()) return;
  throw ConfigError("unknown config key" + std::string(unread.size() > 1 ? "s: " : ": ") +
                    boost::algorithm::join(unread, ", "));
}

}  // namespace ast
