#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace misolab::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Ten significant digits, the one float format used in every output.
std::string format_number(double v);

/// Runs one miso_lab command. `args` excludes the program name. Results go to
/// `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace misolab::cli
