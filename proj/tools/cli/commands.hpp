#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpam_exo/io.hpp"

namespace fpam_exo::cli {

enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitNonConvergence = 3 };

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

std::uint64_t fnv1a64(std::string_view data, std::uint64_t hash = kFnvOffset);

/// Provenance written into every output file.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config_paths;  // role -> path
  std::vector<std::pair<std::string, std::string>> overrides;     // flag -> value
  std::string out_dir;
  std::string tool_version;
  std::string input_hash;  // FNV-1a 64 over config contents and overrides, hex

  io::json to_json() const;
  std::string csv_comment() const;
};

/// Output files are staged in memory and committed together.
struct OutputSet {
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
  void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

/// Writes every file to a temporary name in `dir`, then renames them into
/// place. Nothing is left behind if a write fails.
void commit(const std::string& dir, const OutputSet& outputs);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpam_exo::cli
