#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "latpar/errors.hpp"

namespace latpar {

inline constexpr int kMaxPermOrder = 16;

// Permutation of {0..n-1} in one-line notation: img_[i] is the image of i.
// Internals are 0-based throughout; one_based()/from_one_based() translate
// at the I/O boundary. Values are immutable apart from next_lex(), which
// steps the lexicographic enumeration in place.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(int n);
    static Permutation from_images(std::vector<uint8_t> images);
    static Permutation from_one_based(const std::vector<int>& images);

    // The k-th power of the n-cycle mapping i to i+1 mod n. k may be any
    // integer; it is reduced mod n.
    static Permutation cyclic(int n, long long k);

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_[static_cast<size_t>(i)]; }
    const std::vector<uint8_t>& images() const { return img_; }
    std::vector<int> one_based() const;

    Permutation inverse() const;

    // Sign from the inversion count. sign_by_cycles() computes the same
    // value from the cycle decomposition and exists as an independent route
    // for cross-checking.
    int sign() const;
    int sign_by_cycles() const;

    // Rank in the lexicographic order of one-line notation, 0 = identity.
    uint64_t lex_rank() const;
    static Permutation lex_unrank(uint64_t rank, int n);

    // Advances to the lexicographic successor. Returns false (and resets to
    // the identity) after the last permutation.
    bool next_lex();

    bool operator==(const Permutation&) const = default;

private:
    std::vector<uint8_t> img_;
};

// compose(a, b) maps i to a(b(i)); b is applied first. This right-to-left
// convention is fixed here once and used by every module.
Permutation compose(const Permutation& a, const Permutation& b);

inline int sign(const Permutation& p) { return p.sign(); }

// Sign of the word values[0], values[stride], ..., read as one-line notation.
// The values must form a permutation of {0..n-1}; not validated.
int parity_sign(const uint8_t* values, int n, int stride = 1);

// Visits Sym(n) in lexicographic order of one-line notation.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& fn);

uint64_t factorial(int n);

}  // namespace latpar
