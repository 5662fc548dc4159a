#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mprb {

// Flat `key = value` configuration with `#` comments. Keys are unique;
// a repeated key is an error. Later `set` calls override file values.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const;
  const std::string& raw(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  void erase(const std::string& key);

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

  // Same syntax as the input; sorted by key.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_;
};

}  // namespace mprb
