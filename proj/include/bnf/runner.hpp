#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnf {

struct RunOptions {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 1;
  std::string tolerance_overrides;
  /// Recorded verbatim in the manifest.
  std::string command_line;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand, writes its tables and manifest.json into out_dir,
/// and returns the process exit code. Errors are reported on `err` with
/// their remediation hint.
int run(const std::string& subcommand, const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace bnf
