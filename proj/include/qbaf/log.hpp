#pragma once

#include <string>

namespace qbaf::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold read once from the QBAF_LOG environment variable
/// ("error", "warn", "info" or "debug"; default "warn").
Level threshold();

bool enabled(Level lvl);

/// Writes "qbaf <level>: <msg>" to standard error when lvl is enabled.
void write(Level lvl, const std::string& msg);

inline void error(const std::string& msg) { write(Level::Error, msg); }
inline void warn(const std::string& msg) { write(Level::Warn, msg); }
inline void info(const std::string& msg) { write(Level::Info, msg); }
inline void debug(const std::string& msg) { write(Level::Debug, msg); }

}  // namespace qbaf::log
