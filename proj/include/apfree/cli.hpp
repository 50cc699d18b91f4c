#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace apfree::cli {

/// Provenance record written next to every file artifact.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::string tool_version;
  std::string started_at;  // UTC, ISO 8601
  bool exact = true;
};

std::string tool_version();

/// Runs one command line (args[0] is the program name). Returns the exit
/// code: 0 success, 1 domain or input error, 2 usage error.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace apfree::cli
