#ifndef GRAPHCOV_TOOLS_CLI_H_
#define GRAPHCOV_TOOLS_CLI_H_

#include <ostream>

namespace graphcov {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCapability = 4;

// Runs the graphcov command line. argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace graphcov

#endif  // GRAPHCOV_TOOLS_CLI_H_
