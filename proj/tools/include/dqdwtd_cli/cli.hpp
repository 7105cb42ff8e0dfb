#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dqdwtd::cli {

/// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  ///< a cross-check or z-score bound failed
  kUsage = 2,        ///< bad flags, config keys or values
  kRuntime = 3,      ///< numerical or I/O failure
};

/// Environment variable naming the base directory for relative output paths.
inline constexpr const char* kOutputDirEnv = "DQDWTD_OUTPUT_DIR";

/**
 * \brief Flat `key=value` config: `#` starts a comment, blank lines ignored,
 * whitespace around keys and values trimmed. Throws std::runtime_error with
 * the line number on malformed lines or duplicate keys.
 */
std::map<std::string, std::string> parse_config(std::istream& in);

/// Runs the tool with args[0] the program name. CSV goes to out (or --output),
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dqdwtd::cli
