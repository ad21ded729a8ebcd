#pragma once

#include <optional>
#include <vector>

#include "latpar/cache.hpp"
#include "latpar/latin.hpp"
#include "latpar/report.hpp"
#include "latpar/sums.hpp"

// Cross-module verification drivers. Each function runs every route the
// library has for one identity and returns a report comparing them; the
// CLI and the acceptance suite are thin wrappers over these.
namespace latpar::verify {

struct Options {
    int threads = 1;
    int max_order = kDefaultOrderCap;
    // Raises the polynomial-pipeline order cap from 4 to 5 and enables the
    // 2^25-term exhaustive sums at n = p = 5.
    bool extended = false;
    uint64_t seed = 12345;
    int trials = 100;
    ResultCache* cache = nullptr;
};

// L_n: exhaustive enumeration against the full coefficient of per(X)^n.
VerificationReport per_n_routes(int n, const Options& opts = {});

// L_even - L_odd: enumeration, the alternating determinant-power sum, and
// the full coefficient of det(X)^n.
VerificationReport det_n_routes(int n, const Options& opts = {});

// AT(n), odd n: enumeration, the alternating per*det^(n-1) sum, the
// per(X) det(X)^(n-1) coefficient, and the signed symbol-class sum.
VerificationReport per_det_routes(int n, const Options& opts = {});

// The residue (1/p) sum mod p with the corrected sign, the printed theorem
// value side by side, and the mod-p^2 cross-check against the sum
// restricted to the shift-invariant family.
VerificationReport drisko_report(int p, const Options& opts = {});

// Verdict for a residue-sum result given the family-restricted sum:
// discrepancy-documented when the residue matches the corrected derivation
// (+1 mod p) but not the printed form (-1 mod p); fail otherwise.
Status drisko_status(const SumResult& sum, int128 family_sum, int p);

// Row-class permanent sum residue against the paper value -1 mod p.
VerificationReport classes_report(int p, const Options& opts = {});

VerificationReport shift_residue_report(int p, const Options& opts = {});
VerificationReport orbit_report(int p, const Options& opts = {});
VerificationReport zappa_report(int n, const Options& opts = {});

// Tuple-sum coefficient against independently computed AT(n)(R_E - R_O).
VerificationReport tuple_coeff_report(int n, const Options& opts = {});

// Tuple-sum identity on identity matrices, all-ones matrices, and seeded
// random integer matrices with entries in [-3, 3].
VerificationReport tuple_identity_report(int n, const Options& opts = {});

// Every check applicable at order n (and prime p when given; defaults to n
// when n is an odd prime).
std::vector<VerificationReport> run_all(int n, std::optional<int> p, const Options& opts = {});

}  // namespace latpar::verify
