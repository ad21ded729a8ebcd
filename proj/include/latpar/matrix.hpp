#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "latpar/int128.hpp"
#include "latpar/perm.hpp"

namespace latpar {

inline constexpr int kMaxBitMatrixOrder = 16;
// Rank codes are 64-bit, so the code bijection stops at 8x8.
inline constexpr int kMaxCodeOrder = 8;

// Dense (0,1)-matrix with rows stored as bit vectors: bit j of row i is
// A(i,j). The rank code packs the grid row-major, bit i*n+j of the code
// holding A(i,j); this layout is the single wire format for codes.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(int n);  // zero matrix

    static BitMatrix from_rows(int n, const std::vector<uint16_t>& rows);
    // Rows as strings of '0'/'1', character j = column j.
    static BitMatrix from_strings(const std::vector<std::string>& rows);
    static BitMatrix unrank(uint64_t code, int n);
    static BitMatrix identity(int n);
    static BitMatrix all_ones(int n);

    uint64_t rank() const;

    int n() const { return n_; }
    bool get(int i, int j) const { return (rows_[static_cast<size_t>(i)] >> j) & 1u; }
    void set(int i, int j, bool v);
    uint16_t row(int i) const { return rows_[static_cast<size_t>(i)]; }

    int ones() const;
    int sigma0() const { return n_ * n_ - ones(); }
    bool has_zero_row_or_column() const;
    bool rows_distinct() const;

    // Representative of the row permutation class: rows sorted so that the
    // value read with column 0 as the most significant bit decreases
    // (non-strictly when rows repeat).
    BitMatrix row_canonical() const;
    bool is_row_canonical() const;

    // B with B(rows(i), cols(j)) = A(i, j).
    BitMatrix permuted(const Permutation& rows, const Permutation& cols) const;
    // Cyclic rotation: B(i+down mod n, j+right mod n) = A(i, j).
    BitMatrix rotated(int down, int right) const;
    BitMatrix transposed() const;

    std::vector<std::string> to_strings() const;
    nlohmann::json to_json() const;  // {"n": n, "code": code}
    static BitMatrix from_json(const nlohmann::json& j);

    bool operator==(const BitMatrix&) const = default;

private:
    int n_ = 0;
    std::array<uint16_t, kMaxBitMatrixOrder> rows_{};
};

// Small dense integer matrix with exact kernels. Entries are capped at
// |a| <= 65536 on input so the checked 128-bit arithmetic has headroom.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(int n);  // zero matrix

    static IntMatrix from_entries(int n, std::vector<int64_t> entries);  // row-major
    static IntMatrix from_bits(const BitMatrix& m);
    static IntMatrix identity(int n);
    static IntMatrix all_ones(int n);

    int n() const { return n_; }
    int64_t get(int i, int j) const { return a_[static_cast<size_t>(i * n_ + j)]; }
    void set(int i, int j, int64_t v);

    bool operator==(const IntMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<int64_t> a_;
};

// Permanent by Ryser's inclusion-exclusion with Gray-code subset updates.
int64_t permanent(const BitMatrix& m);
int128 permanent(const IntMatrix& m);

// Permanent as the plain sum over all n! diagonals. Slow; kept as the
// independent cross-check route. n <= 8.
int64_t permanent_naive(const BitMatrix& m);
int128 permanent_naive(const IntMatrix& m);

// Determinant by fraction-free (Bareiss) elimination, exact over Z.
int64_t determinant(const BitMatrix& m);
int128 determinant(const IntMatrix& m);

// Determinant by cofactor expansion; independent cross-check route, n <= 8.
int64_t determinant_cofactor(const BitMatrix& m);
int128 determinant_cofactor(const IntMatrix& m);

// Determinant residue in [0, p) by elimination over the field F_p.
// p must be an odd prime.
int det_mod(const BitMatrix& m, int p);

bool is_prime(int p);

}  // namespace latpar
