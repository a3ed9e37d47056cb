#pragma once

#include <iosfwd>

namespace fracmax::cli {

/// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracmax::cli
