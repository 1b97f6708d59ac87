#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ctrlsimp {

/// Record of one CLI run: enough to re-run it and check that the outputs
/// match. Contains no timestamps, so identical runs write identical files.
struct RunManifest {
  std::string command;
  std::map<std::string, std::vector<std::string>> flags;
  std::map<std::string, std::string> input_digests;  // path -> sha256 hex
  std::string tool_version;
  std::map<std::string, std::string> conventions;

  std::string to_json() const;
  /// Throws ParseError on malformed JSON or missing fields.
  static RunManifest from_json(std::string_view json);

  void write(const std::string& path) const;
  static RunManifest read(const std::string& path);

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string sha256_hex(std::string_view data);
/// Throws InputError if the file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace ctrlsimp
