#include "qbaf/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace qbaf::log {

static Level parse_env() {
    const char* v = std::getenv("QBAF_LOG");
    if (v == nullptr) return Level::Warn;
    if (std::strcmp(v, "error") == 0) return Level::Error;
    if (std::strcmp(v, "warn") == 0) return Level::Warn;
    if (std::strcmp(v, "info") == 0) return Level::Info;
    if (std::strcmp(v, "debug") == 0) return Level::Debug;
    return Level::Warn;
}

Level threshold() {
    static const Level lvl = parse_env();
    return lvl;
}

bool enabled(Level lvl) { return static_cast<int>(lvl) <= static_cast<int>(threshold()); }

void write(Level lvl, const std::string& msg) {
    if (!enabled(lvl)) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "qbaf %s: %s\n", names[static_cast<int>(lvl)], msg.c_str());
}

}  // namespace qbaf::log
