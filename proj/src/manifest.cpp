#include "varidepth/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "varidepth/error.hpp"

namespace varidepth {

uint64_t fnv1a64(const void* data, size_t size) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 14695981039346656037ULL;
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open for hashing: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  const std::string bytes = os.str();
  return fnv1a64(bytes.data(), bytes.size());
}

std::string hash_hex(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunManifest::RunManifest(std::string command, const std::vector<std::string>& args) {
  doc_.set("command", command);
  for (const std::string& a : args) doc_.add("arg", a);
}

void RunManifest::echo_config(const KeyValueDoc& cfg) {
  for (const auto& e : cfg.entries()) doc_.add("config." + e.first, e.second);
}

void RunManifest::add_input(const std::string& name, const std::string& path) {
  doc_.add("input", name + " " + hash_hex(hash_file(path)));
}

void RunManifest::add_output(const std::string& name, const std::string& path) {
  doc_.add("output", name + " " + hash_hex(hash_file(path)));
}

void RunManifest::set(const std::string& key, const std::string& value) {
  doc_.set(key, value);
}

void RunManifest::save(const std::string& path) const { doc_.save(path); }

} // namespace varidepth
