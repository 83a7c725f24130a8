#pragma once

#include <iosfwd>

namespace treering {

/// Entry point for the `treering` tool. Returns 0 on success, 2 for usage
/// errors and 1 when a pipeline stage fails.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace treering
