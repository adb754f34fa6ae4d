#pragma once

#include <iosfwd>

namespace hyperconn {

/// Quick sanity checks against known closed-form values. Prints one line per
/// check and returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace hyperconn
