#pragma once

#include <stdexcept>
#include <string>

namespace relie {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero field element") {}
};

struct AmbientMismatch : Error {
    using Error::Error;
};

struct SizeLimit : Error {
    using Error::Error;
};

struct NotAbelian : Error {
    using Error::Error;
};

struct NotPNilpotent : Error {
    using Error::Error;
};

struct NotNilpotent : Error {
    using Error::Error;
};

struct NotAnIdeal : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::size_t line = 0;
    std::size_t column = 0;
    ParseError(std::size_t ln, std::size_t col, const std::string& what)
        : Error("parse error at line " + std::to_string(ln) + ", column " +
                std::to_string(col) + ": " + what),
          line(ln),
          column(col) {}
};

struct ValidationError : Error {
    using Error::Error;
};

// A mathematical identity the code relies on failed at runtime. These are
// surfaced loudly instead of being papered over.
struct InternalCheckError : Error {
    using Error::Error;
};

}  // namespace relie
