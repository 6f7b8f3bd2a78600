#include "litrec/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "litrec/errors.hpp"

#ifndef LITREC_SOURCE_DATA_DIR
#define LITREC_SOURCE_DATA_DIR "data"
#endif

namespace litrec {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgumentError("config line " + std::to_string(lineno) +
                                 ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key,
                                   const std::string& fallback) const {
  auto v = get(key);
  return v ? *v : fallback;
}

std::string KeyValueConfig::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw InvalidArgumentError("missing config key: " + key);
  return *v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw InvalidArgumentError("config key " + key + ": not a number: " + *v);
  }
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    return std::stol(*v);
  } catch (const std::exception&) {
    throw InvalidArgumentError("config key " + key + ": not an integer: " + *v);
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw InvalidArgumentError("config key " + key + ": not a boolean: " + *v);
}

std::vector<std::string> KeyValueConfig::keys_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& key : order_) {
    if (key.rfind(prefix, 0) == 0) out.push_back(key);
  }
  return out;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (values_.count(key) == 0) order_.push_back(key);
  values_[key] = value;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("LITREC_DATA_DIR")) return env;
  return LITREC_SOURCE_DATA_DIR;
}

}  // namespace litrec
