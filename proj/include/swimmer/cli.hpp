#pragma once

// Command-line front end.  Kept in the library so tests can drive it
// without spawning processes.

#include <iosfwd>

namespace swimmer {

// Exit codes: 0 ok, 2 validation, 3 solver or numerical failure, 4 I/O.
// Results go to `out` as JSON; failures go to `err` as
// {"error": {"kind": ..., "message": ...}}.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swimmer
