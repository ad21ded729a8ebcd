#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "latpar/matrix.hpp"
#include "latpar/perm.hpp"
#include "latpar/report.hpp"

namespace latpar {

// A k-left row shifted p x p (0,1)-matrix is determined by its first row b
// and the shift k: row i has bit j set iff b has bit (j + i*k) mod p set.
struct ShiftSpec {
    int p = 3;               // odd prime
    uint32_t first_row = 0;  // bit j = entry (0, j)
    int shift = 1;           // k, 0 < k < p

    int ones() const { return __builtin_popcount(first_row & ((1u << p) - 1u)); }
};

enum class ShiftDirection { Left, Down };

using Cell = std::pair<int, int>;  // (row, column)

BitMatrix build_shifted(const ShiftSpec& spec);

// Left: (i, j) -> (i, j-k mod p). Down: (i, j) -> (i+k mod p, j).
std::vector<Cell> shift_cells(const std::vector<Cell>& cells, int k, ShiftDirection dir, int p);

// A transversal of the p x p grid: cells (i, c(i)) for a permutation c,
// one cell per row and per column.
class Diagonal {
public:
    explicit Diagonal(Permutation column_of_row);
    static Diagonal main(int p);
    static Diagonal from_cells(const std::vector<Cell>& cells, int p);

    int p() const { return perm_.size(); }
    const Permutation& perm() const { return perm_; }
    int column(int row) const { return perm_(row); }
    std::vector<Cell> cells() const;
    int sign() const { return perm_.sign(); }

    bool operator==(const Diagonal&) const = default;

private:
    Permutation perm_;
};

// The k-left shift of d followed by the 1-down shift. Its p-th iterate is
// the identity, and its fixed points are exactly the constant diagonals of
// a k-left row shifted matrix.
Diagonal diagonal_map(const Diagonal& d, int k, int p);

// The p pairwise-disjoint fixed diagonals: column c0 - i*k mod p in row i,
// one diagonal per starting column c0. Diagonal c0 of build_shifted(b, k)
// carries the constant value bit c0 of b.
std::vector<Diagonal> principal_diagonals(int p, int k);

// All distinct k-left row shifted matrices over every first row b and every
// shift 0 < k < p, deduplicated, sorted by rank code. This is exactly the
// set of matrices with a nontrivial stabilizer under simultaneous cyclic
// row and column rotation (which orbit_dichotomy_check verifies).
std::vector<BitMatrix> shifted_family(int p);

// Sum of (-1)^sigma0(A) per(A) det(A)^(p-1) over shifted_family(p).
int128 shifted_family_per_det_sum(int p);

// Checks per(A) = |b| mod p and det(A) = +-|b| mod p for every first row b
// and shift k. The report's details list every (b, k) pair with residues.
VerificationReport shift_residue_check(int p);

// Verifies the structure the cyclic rotation action induces on B_p: the
// family equals the set of matrices some (nu, nu^k) with 0 < k < p fixes;
// orbits outside it have size p^2 except the all-singular equal-row and
// constant-row orbits, which contribute zero terms; sigma0/per/det are
// constant on orbits; the diagonal map has period p with the principal
// diagonals as its fixed points. Full sweep at p = 3; sampled for larger p.
VerificationReport orbit_dichotomy_check(int p);

}  // namespace latpar
