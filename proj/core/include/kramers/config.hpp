#pragma once

// Flat key = value experiment configuration with a typed schema.  Files may
// contain blank lines and '#' comments; unknown keys and malformed values are
// rejected with the offending key named.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kramers {

enum class ValueType { real, integer, boolean, string, real_list };

const char* to_string(ValueType t);

struct ConfigKey {
  std::string name;
  ValueType type;
  std::string default_value;
  std::string doc;
};

/// Every recognised key in canonical order.
const std::vector<ConfigKey>& config_schema();

class Config {
 public:
  /// All keys at their defaults.
  Config();

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  /// Sets one key after type-checking the value.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::string& str(const std::string& key) const;
  std::vector<double> real_list(const std::string& key) const;

  /// Cross-key constraints (exponents, grid, counts).
  void validate() const;

  /// "key = value" lines in schema order.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over the canonical lines of every result-affecting key.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace kramers
