#pragma once

#include <stdexcept>
#include <string>

namespace latpar {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad parameters or malformed input.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// A configured cap (order, prime, term budget) was exceeded.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

// Broken internal contract: a failed exact-divisibility or overflow check.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

// Latin square validation failure; carries the first violation found.
// Row/column indices are reported 1-based.
class ValidationError : public InvalidArgument {
public:
    enum class Kind { DuplicateInRow, DuplicateInColumn, SymbolOutOfRange };

    ValidationError(Kind kind, int index);

    Kind kind() const { return kind_; }
    int index() const { return index_; }

private:
    Kind kind_;
    int index_;
};

}  // namespace latpar
