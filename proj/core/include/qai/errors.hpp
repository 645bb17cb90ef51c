#pragma once

#include <stdexcept>
#include <string>

namespace qai {

/*
 * Error hierarchy. Everything the library throws derives from Error so
 * callers (the CLI in particular) can map failures onto exit codes in
 * one place.
 */

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// numeric / shape preconditions
struct DimensionMismatch : Error { using Error::Error; };
struct UnknownVariable   : Error { using Error::Error; };
struct NotHermitian      : Error { using Error::Error; };
struct NotPSD            : Error { using Error::Error; };
struct TraceTooLarge     : Error { using Error::Error; };
struct TraceNotOne       : Error { using Error::Error; };
struct EmptySet          : Error { using Error::Error; };
struct ZeroState         : Error { using Error::Error; };
struct ShapeMismatch     : Error { using Error::Error; };
struct UnsupportedDomain : Error { using Error::Error; };

// front-end diagnostics
struct SyntaxError : Error {
    int line, col;
    std::string expected;
    SyntaxError(int line_, int col_, std::string expected_)
        : Error("syntax error at " + std::to_string(line_) + ":" +
                std::to_string(col_) + ": expected " + expected_),
          line(line_), col(col_), expected(std::move(expected_)) {}
};

struct ValidationError : Error {
    std::string kind;
    int line, col;
    ValidationError(std::string kind_, int line_, int col_, const std::string& detail)
        : Error(kind_ + " at " + std::to_string(line_) + ":" +
                std::to_string(col_) + ": " + detail),
          kind(std::move(kind_)), line(line_), col(col_) {}
};

}  // namespace qai
