// Entry point of the amtopo command line tool, callable from tests.

#ifndef AMTOPO_TOOLS_CLI_HPP
#define AMTOPO_TOOLS_CLI_HPP

#include <iosfwd>

namespace amtopo::cli {

enum ExitCode {
    kOk = 0,
    kUsage = 1,       // bad flags, unreadable files, trivial set operations without fallback
    kParse = 2,       // malformed input file
    kInvariant = 3    // a computed model failed validation
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace amtopo::cli

#endif
