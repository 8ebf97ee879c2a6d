#pragma once

#include <iosfwd>

namespace qsl::cli {

/// Exit codes: 0 success, 1 invalid input or I/O failure, 2 reproduction-suite failure,
/// 3 internal error.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsl::cli
