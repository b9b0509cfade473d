#pragma once

#include <iosfwd>

namespace mfr {

/// Runs the `mfr` command line. Returns 0 on success, 1 on a domain error
/// and 2 on a usage error; diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace mfr
