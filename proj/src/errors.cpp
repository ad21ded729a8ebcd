#include "latpar/errors.hpp"

namespace latpar {

namespace {

std::string format_violation(ValidationError::Kind kind, int index) {
    switch (kind) {
        case ValidationError::Kind::DuplicateInRow:
            return "duplicate symbol in row " + std::to_string(index);
        case ValidationError::Kind::DuplicateInColumn:
            return "duplicate symbol in column " + std::to_string(index);
        case ValidationError::Kind::SymbolOutOfRange:
            return "symbol out of range in row " + std::to_string(index);
    }
    return "invalid square";
}

}  // namespace

ValidationError::ValidationError(Kind kind, int index)
    : InvalidArgument(format_violation(kind, index)), kind_(kind), index_(index) {}

}  // namespace latpar
