// Command-line front end.

#ifndef TSNSIM_CLI_H_
#define TSNSIM_CLI_H_

#include <iosfwd>

namespace tsnsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace tsnsim

#endif  // TSNSIM_CLI_H_
