#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "latpar/int128.hpp"
#include "latpar/matrix.hpp"

namespace latpar {

inline constexpr int kMaxPolyOrder = 5;
inline constexpr std::size_t kMaxPolyTerms = 10'000'000;

enum class MatrixPolyKind { Permanent, Determinant };
enum class PipelineMode { PerN, DetN, PerDet };

// Multilinear polynomial in the n^2 cell variables X(i,j). A monomial is an
// n^2-bit mask (bit i*n+j = variable X(i,j) present); masks cannot encode a
// repeated variable, and products drop any term whose factors overlap. That
// is the square-free quotient semantics: only the coefficient of the full
// product of all n^2 variables is ever read off, and no discarded term can
// reach it. The term map is kept sorted by mask.
class SquareFreePoly {
public:
    explicit SquareFreePoly(int n);

    static SquareFreePoly one(int n);
    // The permanent or determinant of the matrix of indeterminates: one
    // monomial per permutation, coefficient +1 or the permutation sign.
    static SquareFreePoly matrix_poly(int n, MatrixPolyKind kind);

    int n() const { return n_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    uint64_t full_mask() const;

    int64_t coefficient(uint64_t mask) const;
    // Coefficient of the product of all n^2 variables; 0 when absent.
    int64_t full_coefficient() const { return coefficient(full_mask()); }

    void add_term(uint64_t mask, int64_t coeff);
    const std::map<uint64_t, int64_t>& terms() const { return terms_; }

    nlohmann::json to_json() const;  // {"n": n, "terms": [[mask, coeff], ...]}

    bool operator==(const SquareFreePoly&) const = default;

private:
    int n_ = 0;
    std::map<uint64_t, int64_t> terms_;
};

SquareFreePoly sf_multiply(const SquareFreePoly& a, const SquareFreePoly& b);

// Builds the n-fold square-free product and extracts the full-monomial
// coefficient.
//   PerN:   per(X)^n            -> L_n
//   DetN:   det(X)^n            -> (-1)^(n(n-1)/2) (L_even - L_odd)
//   PerDet: per(X) det(X)^(n-1) -> (-1)^(n(n-1)/2) n!(n-1)! AT(n), odd n
// Multiplication runs left to right with the permanent factor first; the
// result is order-independent, peak term count is not.
int64_t coeff_pipeline(int n, PipelineMode mode, int max_order = 4);

// Coefficient C of the tuple sum over sigma, rho in Sym(n)^n with rho_1
// fixed to the identity: each pair contributes sign(sigma_1) sign(sigma)
// sign(rho) when the n^2 cells (sigma_i(j), rho_j(i)) cover the grid with
// no repeat. Then (-1)^(n(n-1)/2) C / (n!(n-1)!^2) = AT(n)(R_E - R_O).
// The sum has (n!)^(2n-1) terms; n is capped to {1, 3}.
int64_t tuple_coefficient(int n);

// Like tuple_coefficient but counting every pair, with no repeated-cell
// filter. Negative control: without the square-free restriction the two
// routes must disagree for n = 3.
int64_t tuple_sum_unfiltered(int n);

// Both sides of the tuple-sum identity for a sequence of n matrices, n odd:
//   LHS: the signed tuple sum with entries (A_j)(sigma_i(j), rho_j(i));
//   RHS: (n-1)! (R_E - R_O) per(A_1) prod_{j>=2} det(A_j).
// reduced_diff supplies R_E - R_O for this n.
std::pair<int128, int128> tuple_identity_sides(const std::vector<IntMatrix>& mats,
                                               int64_t reduced_diff);

}  // namespace latpar
