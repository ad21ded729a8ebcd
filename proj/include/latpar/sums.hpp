#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "latpar/int128.hpp"

namespace latpar {

struct SumOptions {
    int threads = 1;  // 0 = hardware concurrency
    uint64_t chunk_size = 1ull << 16;
    // Monotonic progress: called with (terms done, terms total) after each
    // chunk. Must be thread-safe; may be empty.
    std::function<void(uint64_t, uint64_t)> progress;
};

// Result of one exhaustive exact sum. raw_sum is the plain sum of terms;
// the scaled value is raw_sum times the sign and divided by the stated
// factor, with exact divisibility asserted (never rounded).
struct SumResult {
    std::string task;
    int n = 0;  // order, or the prime p
    int128 raw_sum = 0;
    int128 scaled_numerator = 0;
    int128 scaled_denominator = 1;
    int128 scaled_value = 0;
    std::optional<int> residue_mod_p;
    uint64_t term_count = 0;
    double elapsed_ms = 0.0;
    int threads = 1;

    nlohmann::json to_json() const;
    static SumResult from_json(const nlohmann::json& j);
    static void csv_header(std::ostream& os);
    void append_csv(std::ostream& os) const;
    std::string to_text() const;
};

// Sum over all n x n (0,1)-matrices A of (-1)^sigma0(A) det(A)^n.
// Scaled by (-1)^(n(n-1)/2) this equals L_even - L_odd. n <= 5; the 2^36
// terms of n = 6 are rejected as infeasible.
SumResult det_power_sum(int n, const SumOptions& opts = {});

// Sum over all n x n (0,1)-matrices A of (-1)^sigma0(A) per(A) det(A)^(n-1)
// for odd n <= 5. Scaled by (-1)^(n(n-1)/2) / (n!(n-1)!) this equals AT(n);
// divisibility by n!(n-1)! is asserted.
SumResult per_det_sum(int n, const SumOptions& opts = {});

// S = per_det_sum(p).raw_sum for p in {3, 5}. Asserts p | S and returns
// (S/p) mod p in [0, p). By the corrected orbit count the residue is +1;
// the printed theorem form states -1 (see drisko_report for the
// side-by-side).
SumResult drisko_residue(int p, const SumOptions& opts = {});

// Sum over row-permutation class representatives A (one p-subset of
// distinct rows each) with det(A) nonzero mod p of (-1)^sigma0(A) per(A).
// Classes with repeated rows are singular and drop out, so the iteration
// runs over the C(2^p, p) distinct-row subsets. The residue mod p is -1.
// p in {3, 5, 7}; p = 7 walks 9.5e10 classes and is impractical but legal.
SumResult class_permanent_sum(int p, const SumOptions& opts = {});

}  // namespace latpar
