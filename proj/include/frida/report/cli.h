#pragma once

#include <ostream>

namespace frida::report {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

// frida run|sweep|validate --config PATH [--out DIR] [--seed N]
//       [--sweep KEY=V1,V2,...]
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace frida::report
