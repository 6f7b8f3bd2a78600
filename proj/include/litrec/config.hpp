#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace litrec {

/// Flat key=value configuration file.
///
/// Format: one `key = value` pair per line, `#` starts a comment,
/// blank lines ignored. Keys are dotted paths (e.g. `weight.en.mlt`).
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  /// Throws InvalidArgumentError when the key is missing.
  std::string require(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// All keys with the given prefix, in file order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

/// Directory holding the shipped data files (stopword list, POS lexicon,
/// response schema). Resolution order: LITREC_DATA_DIR environment
/// variable, then the compiled-in source-tree default.
std::string default_data_dir();

}  // namespace litrec
