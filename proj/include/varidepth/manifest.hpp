#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varidepth/keyval.hpp"

// Run manifests: every CLI command that writes outputs also writes a manifest
// echoing the command line and resolved configuration together with content
// hashes of all inputs and outputs, so a run can be reproduced and checked
// from the manifest alone.

namespace varidepth {

uint64_t fnv1a64(const void* data, size_t size);
uint64_t hash_file(const std::string& path);
std::string hash_hex(uint64_t h);

class RunManifest {
public:
  RunManifest(std::string command, const std::vector<std::string>& args);

  void echo_config(const KeyValueDoc& cfg); // prefixes keys with "config."
  void add_input(const std::string& name, const std::string& path);
  void add_output(const std::string& name, const std::string& path);
  void set(const std::string& key, const std::string& value);

  void save(const std::string& path) const;
  const KeyValueDoc& doc() const { return doc_; }

private:
  KeyValueDoc doc_;
};

} // namespace varidepth
