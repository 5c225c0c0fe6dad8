#include "forge/log.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>

namespace forge {

bool verbose_logging() {
    static const bool enabled = [] {
        const char* v = std::getenv("FORGE_VERBOSE");
        return v != nullptr && *v != '\0' && std::strcmp(v, "0") != 0;
    }();
    return enabled;
}

void vlog(const std::string& msg) {
    if (verbose_logging()) std::cerr << "[forge] " << msg << '\n';
}

}  // namespace forge
