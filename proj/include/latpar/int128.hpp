#pragma once

#include <cstdint>
#include <string>

#include "latpar/errors.hpp"

namespace latpar {

// All exact sums in the library accumulate in 128 bits. The stated input
// bounds keep every value far below 2^127, but the arithmetic is checked
// anyway; an overflow means a broken precondition, not a rounding fallback.
using int128 = __int128;

std::string to_decimal(int128 v);
int128 parse_decimal(const std::string& s);

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw InternalError("128-bit addition overflow");
    return r;
}

inline int128 checked_sub(int128 a, int128 b) {
    int128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw InternalError("128-bit subtraction overflow");
    return r;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw InternalError("128-bit multiplication overflow");
    return r;
}

int128 checked_pow(int128 base, int exp);

// Exact quotient; throws InternalError when the division leaves a remainder.
int128 exact_div(int128 num, int128 den);

int64_t checked_narrow(int128 v);

}  // namespace latpar
