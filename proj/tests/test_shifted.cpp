#include <doctest.h>

#include <map>
#include <set>

#include "latpar/shifted.hpp"

using namespace latpar;

TEST_CASE("shifted builder on pinned inputs") {
    CHECK(build_shifted({3, 0b001, 1}) == BitMatrix::from_strings({"100", "001", "010"}));
    CHECK(build_shifted({3, 0b011, 1}) == BitMatrix::from_strings({"110", "101", "011"}));
    for (int k = 1; k < 3; ++k) {
        CHECK(build_shifted({3, 0b111, k}) == BitMatrix::all_ones(3));
    }
    CHECK_THROWS_AS(build_shifted({3, 0b001, 0}), InvalidArgument);
    CHECK_THROWS_AS(build_shifted({3, 0b001, 3}), InvalidArgument);
    CHECK_THROWS_AS(build_shifted({4, 0b001, 1}), InvalidArgument);
}

TEST_CASE("each row is the left shift of the previous one, wrapping around") {
    for (int p : {3, 5, 7}) {
        for (uint32_t b = 0; b < (1u << p); ++b) {
            for (int k = 1; k < p; ++k) {
                const BitMatrix m = build_shifted({p, b, k});
                for (int i = 0; i < p; ++i) {
                    const int prev = (i + p - 1) % p;
                    for (int j = 0; j < p; ++j) {
                        REQUIRE(m.get(i, j) == m.get(prev, (j + k) % p));
                    }
                }
                // Fixed by rotating rows down once and columns right p-k.
                REQUIRE(m.rotated(1, p - k) == m);
            }
        }
    }
}

TEST_CASE("cell shifts") {
    const std::vector<Cell> diag{{0, 0}, {1, 1}, {2, 2}};
    CHECK(shift_cells(diag, 3, ShiftDirection::Left, 3) == diag);
    CHECK(shift_cells(diag, 3, ShiftDirection::Down, 3) == diag);
    CHECK(shift_cells(shift_cells(diag, 1, ShiftDirection::Left, 3), 2, ShiftDirection::Left, 3) ==
          diag);
    CHECK(shift_cells(diag, 1, ShiftDirection::Left, 3) ==
          std::vector<Cell>{{0, 2}, {1, 0}, {2, 1}});
}

TEST_CASE("diagonal map: fixed points, period, and sign preservation") {
    for (int p : {3, 5}) {
        for (int k = 1; k < p; ++k) {
            const std::vector<Diagonal> fixed = principal_diagonals(p, k);
            CHECK(static_cast<int>(fixed.size()) == p);
            for (const Diagonal& d : fixed) CHECK(diagonal_map(d, k, p) == d);

            // The p principal diagonals partition the grid.
            std::set<Cell> cells;
            for (const Diagonal& d : fixed) {
                for (const Cell& c : d.cells()) cells.insert(c);
            }
            CHECK(static_cast<int>(cells.size()) == p * p);

            // All principal diagonals share one sign.
            for (const Diagonal& d : fixed) CHECK(d.sign() == fixed.front().sign());

            Permutation c = Permutation::identity(p);
            do {
                const Diagonal d{c};
                Diagonal cur = d;
                int first_return = 0;
                for (int step = 1; step <= p; ++step) {
                    const Diagonal next = diagonal_map(cur, k, p);
                    REQUIRE(next.sign() == cur.sign());
                    cur = next;
                    if (first_return == 0 && cur == d) first_return = step;
                }
                REQUIRE(cur == d);  // s^p is the identity
                const bool is_fixed = diagonal_map(d, k, p) == d;
                REQUIRE(first_return == (is_fixed ? 1 : p));
            } while (c.next_lex());
        }
    }
}

TEST_CASE("diagonal values of a shifted matrix are constant") {
    for (uint32_t b = 0; b < 8; ++b) {
        for (int k = 1; k < 3; ++k) {
            const BitMatrix m = build_shifted({3, b, k});
            const std::vector<Diagonal> fixed = principal_diagonals(3, k);
            for (int c0 = 0; c0 < 3; ++c0) {
                for (const Cell& cell : fixed[static_cast<size_t>(c0)].cells()) {
                    REQUIRE(m.get(cell.first, cell.second) == ((b >> c0) & 1u));
                }
            }
        }
    }
}

TEST_CASE("family size and per-weight class counts") {
    const std::vector<BitMatrix> f3 = shifted_family(3);
    CHECK(f3.size() == 14);
    const std::vector<BitMatrix> f5 = shifted_family(5);
    CHECK(f5.size() == (32 - 2) * 4 + 2);

    // Distinct matrices with a ones per row: C(p,a)(p-1) for 0 < a < p.
    for (int p : {3, 5}) {
        std::map<int, int64_t> by_weight;
        for (const BitMatrix& m : shifted_family(p)) {
            ++by_weight[__builtin_popcount(m.row(0))];
        }
        for (int a = 1; a < p; ++a) {
            int64_t binom = 1;
            for (int i = 1; i <= a; ++i) binom = binom * (p - a + i) / i;
            CHECK(by_weight[a] == binom * (p - 1));
        }
        CHECK(by_weight[0] == 1);
        CHECK(by_weight[p] == 1);
    }
}

TEST_CASE("residue check over every first row and shift") {
    {
        const BitMatrix m = build_shifted({3, 0b011, 1});
        CHECK(permanent(m) == 2);
        CHECK(determinant(m) == -2);
    }
    for (int p : {3, 5, 7}) {
        const VerificationReport rep = shift_residue_check(p);
        CHECK(rep.status == Status::Pass);
        CHECK(*rep.find_computed("pairs") == std::to_string((1 << p) * (p - 1)));
        CHECK(*rep.find_computed("failures") == "0");
        CHECK(rep.details.size() == static_cast<size_t>((1 << p) * (p - 1)));
    }
}

TEST_CASE("family-restricted alternating sum") {
    // By hand: six weight-1 members contribute +1 each, six weight-2
    // members contribute -8 each, zero and all-ones are singular.
    CHECK(shifted_family_per_det_sum(3) == -42);
    for (int p : {3, 5}) {
        // Each weight-a member's term is (-1)^(a+1) a mod p.
        for (const BitMatrix& m : shifted_family(p)) {
            const int a = __builtin_popcount(m.row(0));
            const int64_t det = determinant(m);
            if (det == 0) continue;
            int128 term = permanent(m);
            for (int i = 0; i < p - 1; ++i) term *= det;
            if (m.sigma0() & 1) term = -term;
            const int want = ((a % 2 == 1 ? a : -a) % p + p) % p;
            REQUIRE(static_cast<int>(((term % p) + p) % p) == want);
        }
        // Non-constant rows group into rotation orbits of size p with a
        // constant term value, so the family sum is p times an integer
        // whose residue is the corrected +1.
        const int128 family = shifted_family_per_det_sum(p);
        REQUIRE(family % p == 0);
        const int128 quotient = family / p;
        CHECK(static_cast<int>(((quotient % p) + p) % p) == 1);
    }
}

TEST_CASE("orbit dichotomy") {
    const VerificationReport r3 = orbit_dichotomy_check(3);
    CHECK(r3.status == Status::Pass);
    CHECK(*r3.find_computed("family_size") == "14");
    // Four small orbits live outside the family (all rows equal, or every
    // row constant); each is entirely singular.
    CHECK(*r3.find_computed("exceptional_singular_orbits") == "4");
    const VerificationReport r5 = orbit_dichotomy_check(5);
    CHECK(r5.status == Status::Pass);
    CHECK(*r5.find_computed("family_size") == "122");
    CHECK(*r5.find_computed("exceptional_singular_orbits") == "12");
}
