#pragma once

// Headless command line: gen, solve, replay, play, serve.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <iosfwd>

namespace xformplay::io {

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace xformplay::io
