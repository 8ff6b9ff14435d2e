#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace basicwalk::cli {

// Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRuntime = 2;

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Splices a JSON config object (--config PATH) into the argument list right
// after the subcommand words; flags given explicitly win over file values.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace basicwalk::cli
