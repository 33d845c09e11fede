#pragma once

#include <iosfwd>

namespace npsvor {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;

// Entry point of the npsvor command line tool. Results go to `out`,
// diagnostics and logs to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace npsvor
