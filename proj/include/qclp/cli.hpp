#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qclp {

/// Entry point behind the qclp binary. Exit codes: 0 success (at least one
/// answer, or a clean oracle/check/validate), 1 no answer or failed check,
/// 2 usage, validation or fragment errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qclp
