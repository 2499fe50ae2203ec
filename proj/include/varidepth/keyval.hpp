#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Human-editable key-value documents: one `key = value` pair per line,
// `#` starts a comment, repeated keys form lists. Used for scene specs,
// refine configs, run manifests, and machine-readable records.

namespace varidepth {

class KeyValueDoc {
public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int64_t value);
  void add(const std::string& key, const std::string& value); // allows repeats

  bool has(const std::string& key) const;
  // First value for `key`; throws FormatError when missing.
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::vector<std::string> get_all(const std::string& key) const;

  double get_double(const std::string& key) const;
  int64_t get_int(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int64_t get_int_or(const std::string& key, int64_t fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string serialize() const;
  static KeyValueDoc parse(const std::string& text);
  static KeyValueDoc load(const std::string& path);
  void save(const std::string& path) const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Whitespace-separated numeric fields of a value string.
std::vector<double> parse_numbers(const std::string& value);
std::string format_double(double x); // round-trip-safe formatting

} // namespace varidepth
