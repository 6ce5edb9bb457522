#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qclp/program.hpp"

namespace qclp {

struct ParseResult {
    Program program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// Parses, validates and normalizes a program. Diagnostics carry 1-based
/// line/column positions; `file` is used only for reporting.
ParseResult parse_program(std::string_view text, const std::string& file = "<input>");

struct QueryParse {
    std::vector<RawAtom> atoms;
    HerbrandConstraint constraint;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// Parses a query in clause-body syntax against a program's signature.
/// New constants are allowed; arity conflicts are diagnostics.
QueryParse parse_query(std::string_view text, const Signature& signature,
                       const std::string& file = "<query>");

}  // namespace qclp
