#include "latpar/int128.hpp"

#include <algorithm>

namespace latpar {

std::string to_decimal(int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string digits;
    while (u != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

int128 parse_decimal(const std::string& s) {
    if (s.empty()) throw InvalidArgument("empty decimal string");
    size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw InvalidArgument("decimal string has no digits: " + s);
    int128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw InvalidArgument("bad decimal string: " + s);
        v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? -v : v;
}

int128 checked_pow(int128 base, int exp) {
    if (exp < 0) throw InvalidArgument("negative exponent");
    int128 r = 1;
    for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

int128 exact_div(int128 num, int128 den) {
    if (den == 0) throw InternalError("exact division by zero");
    if (num % den != 0) {
        throw InternalError("exact divisibility violated: " + to_decimal(num) + " / " + to_decimal(den));
    }
    return num / den;
}

int64_t checked_narrow(int128 v) {
    if (v > static_cast<int128>(INT64_MAX) || v < static_cast<int128>(INT64_MIN)) {
        throw InternalError("value does not fit in 64 bits: " + to_decimal(v));
    }
    return static_cast<int64_t>(v);
}

}  // namespace latpar
