#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "love/geoindex.hpp"

namespace love::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFormat = 2,
  kIntegrity = 3,
};

/// Runs one command line (without argv[0]). Never throws; all failures are
/// reported on `err` and mapped to an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "4", "2-7" or "2,4,7". Result is sorted and de-duplicated.
/// Throws DomainError on malformed or out-of-range text.
std::vector<Resolution> parse_resolution_set(const std::string& text);

/// Output path for one resolution of a build. A single-resolution build
/// uses `pattern` verbatim; otherwise "{res}" is substituted, or ".r<N>" is
/// inserted before the extension.
std::string snapshot_path(const std::string& pattern, Resolution res, bool multiple);

}  // namespace love::cli
