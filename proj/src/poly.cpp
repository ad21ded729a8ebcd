#include "latpar/poly.hpp"

#include "latpar/errors.hpp"

namespace latpar {

namespace {

void check_poly_order(int n, int cap) {
    if (n < 1) throw InvalidArgument("order must be positive");
    if (n > cap) {
        throw ResourceError("order " + std::to_string(n) + " exceeds the polynomial cap " +
                            std::to_string(cap));
    }
}

int64_t checked_add64(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw InternalError("coefficient overflow");
    return r;
}

int64_t checked_mul64(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw InternalError("coefficient overflow");
    return r;
}

}  // namespace

SquareFreePoly::SquareFreePoly(int n) : n_(n) { check_poly_order(n, kMaxPolyOrder); }

SquareFreePoly SquareFreePoly::one(int n) {
    SquareFreePoly p(n);
    p.terms_[0] = 1;
    return p;
}

SquareFreePoly SquareFreePoly::matrix_poly(int n, MatrixPolyKind kind) {
    SquareFreePoly p(n);
    for_each_permutation(n, [&](const Permutation& pi) {
        uint64_t mask = 0;
        for (int i = 0; i < n; ++i) mask |= 1ull << (i * n + pi(i));
        p.terms_[mask] = kind == MatrixPolyKind::Permanent ? 1 : pi.sign();
    });
    return p;
}

uint64_t SquareFreePoly::full_mask() const {
    const int bits = n_ * n_;
    return bits >= 64 ? ~0ull : (1ull << bits) - 1ull;
}

int64_t SquareFreePoly::coefficient(uint64_t mask) const {
    const auto it = terms_.find(mask);
    return it == terms_.end() ? 0 : it->second;
}

void SquareFreePoly::add_term(uint64_t mask, int64_t coeff) {
    if ((mask & ~full_mask()) != 0) throw InvalidArgument("monomial mask outside the grid");
    const auto it = terms_.find(mask);
    if (it == terms_.end()) {
        if (coeff != 0) terms_[mask] = coeff;
        return;
    }
    it->second = checked_add64(it->second, coeff);
    if (it->second == 0) terms_.erase(it);
}

nlohmann::json SquareFreePoly::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [mask, coeff] : terms_) terms.push_back({mask, coeff});
    return {{"n", n_}, {"terms", terms}};
}

SquareFreePoly sf_multiply(const SquareFreePoly& a, const SquareFreePoly& b) {
    if (a.n() != b.n()) throw InvalidArgument("multiplying polynomials of different order");
    SquareFreePoly out(a.n());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            if ((ma & mb) != 0) continue;  // repeated variable, dropped
            out.add_term(ma | mb, checked_mul64(ca, cb));
        }
        if (out.term_count() > kMaxPolyTerms) {
            throw ResourceError("square-free product exceeds the term budget");
        }
    }
    return out;
}

int64_t coeff_pipeline(int n, PipelineMode mode, int max_order) {
    check_poly_order(n, std::min(max_order, kMaxPolyOrder));
    if (mode == PipelineMode::PerDet && n % 2 == 0) {
        throw InvalidArgument("the per*det^(n-1) pipeline is defined for odd order");
    }
    const SquareFreePoly per = SquareFreePoly::matrix_poly(n, MatrixPolyKind::Permanent);
    const SquareFreePoly det = SquareFreePoly::matrix_poly(n, MatrixPolyKind::Determinant);
    SquareFreePoly acc = mode == PipelineMode::DetN ? det : per;
    for (int i = 1; i < n; ++i) {
        acc = sf_multiply(acc, mode == PipelineMode::PerN ? per : det);
    }
    return acc.full_coefficient();
}

namespace {

// All of Sym(n) in lex order with cached signs, the shared table for the
// tuple sums.
struct PermTable {
    std::vector<Permutation> perms;
    std::vector<int> signs;

    explicit PermTable(int n) {
        for_each_permutation(n, [&](const Permutation& p) {
            perms.push_back(p);
            signs.push_back(p.sign());
        });
    }
    size_t size() const { return perms.size(); }
};

// Steps a tuple of table indices like an odometer, least significant last.
bool advance(std::vector<size_t>& idx, size_t base, size_t fixed_prefix) {
    for (size_t pos = idx.size(); pos-- > fixed_prefix;) {
        if (++idx[pos] < base) return true;
        idx[pos] = 0;
    }
    return false;
}

void check_tuple_order(int n) {
    if (n < 1) throw InvalidArgument("order must be positive");
    if (n % 2 == 0) throw InvalidArgument("tuple sums are defined for odd order");
    if (n > 3) {
        throw ResourceError("tuple sums have (n!)^(2n-1) terms; order " + std::to_string(n) +
                            " is out of reach");
    }
}

// Sum of sign(sigma_1) sign(sigma) sign(rho) over sigma in Sym(n)^n and rho
// in Sym(n)^n with rho_1 the identity. With the filter on, a pair only
// counts when the n^2 cells (sigma_i(j), rho_j(i)) are pairwise distinct;
// a pair aborts at the first repeated cell.
int64_t signed_tuple_count(int n, bool square_free_filter) {
    const PermTable table(n);
    const size_t base = table.size();
    int64_t total = 0;
    std::vector<size_t> sigma(static_cast<size_t>(n), 0);
    do {
        int sigma_sign = 1;
        for (size_t s : sigma) sigma_sign *= table.signs[s];
        const int outer_sign = table.signs[sigma[0]] * sigma_sign;
        std::vector<size_t> rho(static_cast<size_t>(n), 0);  // rho[0] stays the identity
        do {
            bool ok = true;
            if (square_free_filter) {
                uint64_t mask = 0;
                for (int i = 0; i < n && ok; ++i) {
                    const Permutation& si = table.perms[sigma[static_cast<size_t>(i)]];
                    for (int j = 0; j < n; ++j) {
                        const Permutation& rj = table.perms[rho[static_cast<size_t>(j)]];
                        const uint64_t bit = 1ull << (si(j) * n + rj(i));
                        if (mask & bit) {
                            ok = false;
                            break;
                        }
                        mask |= bit;
                    }
                }
            }
            if (ok) {
                int rho_sign = 1;
                for (size_t r : rho) rho_sign *= table.signs[r];
                total = checked_add64(total, outer_sign * rho_sign);
            }
        } while (advance(rho, base, 1));
    } while (advance(sigma, base, 0));
    return total;
}

}  // namespace

int64_t tuple_coefficient(int n) {
    check_tuple_order(n);
    return signed_tuple_count(n, true);
}

int64_t tuple_sum_unfiltered(int n) {
    check_tuple_order(n);
    return signed_tuple_count(n, false);
}

std::pair<int128, int128> tuple_identity_sides(const std::vector<IntMatrix>& mats,
                                               int64_t reduced_diff) {
    const int n = static_cast<int>(mats.size());
    check_tuple_order(n);
    for (const IntMatrix& m : mats) {
        if (m.n() != n) throw InvalidArgument("matrix order must match the tuple length");
    }

    const PermTable table(n);
    const size_t base = table.size();
    int128 lhs = 0;
    std::vector<size_t> sigma(static_cast<size_t>(n), 0);
    do {
        int sigma_sign = 1;
        for (size_t s : sigma) sigma_sign *= table.signs[s];
        const int outer_sign = table.signs[sigma[0]] * sigma_sign;
        std::vector<size_t> rho(static_cast<size_t>(n), 0);
        do {
            int rho_sign = 1;
            for (size_t r : rho) rho_sign *= table.signs[r];
            int128 value = outer_sign * rho_sign;
            for (int i = 0; i < n && value != 0; ++i) {
                const Permutation& si = table.perms[sigma[static_cast<size_t>(i)]];
                for (int j = 0; j < n && value != 0; ++j) {
                    const Permutation& rj = table.perms[rho[static_cast<size_t>(j)]];
                    value = checked_mul(value, mats[static_cast<size_t>(j)].get(si(j), rj(i)));
                }
            }
            lhs = checked_add(lhs, value);
        } while (advance(rho, base, 1));
    } while (advance(sigma, base, 0));

    int128 rhs = checked_mul(static_cast<int128>(factorial(n - 1)), reduced_diff);
    rhs = checked_mul(rhs, permanent(mats[0]));
    for (int j = 1; j < n; ++j) rhs = checked_mul(rhs, determinant(mats[static_cast<size_t>(j)]));
    return {lhs, rhs};
}

}  // namespace latpar
