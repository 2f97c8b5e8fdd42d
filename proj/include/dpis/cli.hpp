#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpis {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitCapacity = 2,
  kExitTampered = 3,
  kExitMalformedInput = 4,  // key, manifest, or image
  kExitMalformedPayload = 5,
};

// Runs one `dpis` command. args excludes the program name. Reports go to out
// as key=value lines, diagnostics to err.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpis
