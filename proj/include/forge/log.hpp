#pragma once

#include <string>

namespace forge {

// Verbosity is controlled by the FORGE_VERBOSE environment variable; any
// non-empty value other than "0" enables progress logging to stderr.
bool verbose_logging();

void vlog(const std::string& msg);

}  // namespace forge
