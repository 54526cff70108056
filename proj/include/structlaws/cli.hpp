#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace structlaws {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexamples = 1;
inline constexpr int kExitUsage = 2;

// The struct-laws command line. `in` is read for `--term -`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace structlaws
