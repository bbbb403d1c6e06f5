#pragma once

#include <iosfwd>

namespace decathlon {

/// Entry point of the decathlon command-line tool. Returns the process exit
/// code: 0 success, 2 when some feature could not be scored, 1 on error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace decathlon
