#ifndef DIKERNEL_TOOLS_CLI_H_
#define DIKERNEL_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dikernel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

// Runs one subcommand. `args` excludes the program name. Reports go to the
// --out file when given, otherwise to `out`; diagnostics go to `err` as a
// single line.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dikernel::cli

#endif  // DIKERNEL_TOOLS_CLI_H_
