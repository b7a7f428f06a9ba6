#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtqa::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationErrors = 1;
inline constexpr int kIoOrSchema = 2;
inline constexpr int kRejected = 3;
inline constexpr int kIncomplete = 4;

// `args` excludes the program name. Manual questions in --interactive
// mode are read from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace rtqa::cli
