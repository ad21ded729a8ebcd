#include "latpar/shifted.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>

#include "latpar/int128.hpp"

namespace latpar {

namespace {

void check_spec(int p, int k) {
    if (!is_prime(p) || p % 2 == 0) throw InvalidArgument("shift modulus must be an odd prime");
    if (p > kMaxCodeOrder) throw InvalidArgument("shift modulus exceeds the code cap");
    if (k <= 0 || k >= p) throw InvalidArgument("shift must satisfy 0 < k < p");
}

int mod(int v, int p) { return ((v % p) + p) % p; }

}  // namespace

BitMatrix build_shifted(const ShiftSpec& spec) {
    check_spec(spec.p, spec.shift);
    const int p = spec.p;
    if (spec.first_row >= (1u << p)) throw InvalidArgument("first row has bits outside the grid");
    BitMatrix m(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if ((spec.first_row >> mod(j + i * spec.shift, p)) & 1u) m.set(i, j, true);
        }
    }
    return m;
}

std::vector<Cell> shift_cells(const std::vector<Cell>& cells, int k, ShiftDirection dir, int p) {
    std::vector<Cell> out;
    out.reserve(cells.size());
    for (const auto& [i, j] : cells) {
        if (i < 0 || i >= p || j < 0 || j >= p) throw InvalidArgument("cell outside the grid");
        if (dir == ShiftDirection::Left) {
            out.emplace_back(i, mod(j - k, p));
        } else {
            out.emplace_back(mod(i + k, p), j);
        }
    }
    return out;
}

Diagonal::Diagonal(Permutation column_of_row) : perm_(std::move(column_of_row)) {}

Diagonal Diagonal::main(int p) { return Diagonal(Permutation::identity(p)); }

Diagonal Diagonal::from_cells(const std::vector<Cell>& cells, int p) {
    if (static_cast<int>(cells.size()) != p) throw InvalidArgument("diagonal needs one cell per row");
    std::vector<uint8_t> img(static_cast<size_t>(p));
    std::vector<bool> seen(static_cast<size_t>(p), false);
    for (const auto& [i, j] : cells) {
        if (i < 0 || i >= p || j < 0 || j >= p || seen[static_cast<size_t>(i)]) {
            throw InvalidArgument("cells do not form a diagonal");
        }
        seen[static_cast<size_t>(i)] = true;
        img[static_cast<size_t>(i)] = static_cast<uint8_t>(j);
    }
    return Diagonal(Permutation::from_images(std::move(img)));
}

std::vector<Cell> Diagonal::cells() const {
    std::vector<Cell> out;
    out.reserve(static_cast<size_t>(p()));
    for (int i = 0; i < p(); ++i) out.emplace_back(i, column(i));
    return out;
}

Diagonal diagonal_map(const Diagonal& d, int k, int p) {
    check_spec(p, k);
    if (d.p() != p) throw InvalidArgument("diagonal size mismatch");
    // Left shift by k then down shift by 1: row i of the image takes its
    // column from row i-1 of the source.
    std::vector<uint8_t> img(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) {
        img[static_cast<size_t>(i)] = static_cast<uint8_t>(mod(d.column(mod(i - 1, p)) - k, p));
    }
    return Diagonal(Permutation::from_images(std::move(img)));
}

std::vector<Diagonal> principal_diagonals(int p, int k) {
    check_spec(p, k);
    std::vector<Diagonal> out;
    out.reserve(static_cast<size_t>(p));
    for (int c0 = 0; c0 < p; ++c0) {
        std::vector<uint8_t> img(static_cast<size_t>(p));
        for (int i = 0; i < p; ++i) img[static_cast<size_t>(i)] = static_cast<uint8_t>(mod(c0 - i * k, p));
        out.emplace_back(Permutation::from_images(std::move(img)));
    }
    return out;
}

std::vector<BitMatrix> shifted_family(int p) {
    check_spec(p, 1);
    std::set<uint64_t> codes;
    for (uint32_t b = 0; b < (1u << p); ++b) {
        for (int k = 1; k < p; ++k) {
            codes.insert(build_shifted({p, b, k}).rank());
        }
    }
    std::vector<BitMatrix> out;
    out.reserve(codes.size());
    for (uint64_t code : codes) out.push_back(BitMatrix::unrank(code, p));
    return out;
}

int128 shifted_family_per_det_sum(int p) {
    int128 sum = 0;
    for (const BitMatrix& m : shifted_family(p)) {
        const int128 det = determinant(m);
        if (det == 0) continue;
        const int128 term = checked_mul(permanent(m), checked_pow(det, p - 1));
        sum = checked_add(sum, (m.sigma0() & 1) ? -term : term);
    }
    return sum;
}

VerificationReport shift_residue_check(int p) {
    const auto t0 = std::chrono::steady_clock::now();
    check_spec(p, 1);
    VerificationReport rep;
    rep.task = "shift_residue_check";
    rep.add_param("p", p);
    nlohmann::json details = nlohmann::json::array();
    int pairs = 0;
    int failures = 0;
    for (uint32_t b = 0; b < (1u << p); ++b) {
        for (int k = 1; k < p; ++k) {
            const ShiftSpec spec{p, b, k};
            const BitMatrix m = build_shifted(spec);
            const int64_t per = permanent(m);
            const int64_t det = determinant(m);
            const int a = spec.ones();
            const int per_res = mod(static_cast<int>(per % p), p);
            const int det_res = mod(static_cast<int>(det % p), p);
            const bool per_ok = per_res == a % p;
            const bool det_ok = det_res == a % p || det_res == mod(-a, p);
            if (!per_ok || !det_ok) ++failures;
            ++pairs;
            details.push_back({{"b", m.to_strings().front()},
                               {"k", k},
                               {"ones", a},
                               {"per", per},
                               {"det", det},
                               {"per_mod_p", per_res},
                               {"det_mod_p", det_res},
                               {"pass", per_ok && det_ok}});
        }
    }
    rep.details = std::move(details);
    rep.add_computed("pairs", static_cast<int128>(pairs));
    rep.add_computed("failures", static_cast<int128>(failures));
    rep.add_expected("failures", static_cast<int128>(0), Provenance::Paper);
    rep.finalize_status();
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

bool has_nontrivial_stabilizer(const BitMatrix& m) {
    for (int k = 1; k < m.n(); ++k) {
        if (m.rotated(1, k) == m) return true;
    }
    return false;
}

struct OrbitScan {
    // Orbits outside the family are full-size, except that matrices with
    // all rows equal or every row constant have the stabilizer (nu, id) or
    // (id, nu), whose powers never take the (nu, nu^k) form with 0 < k < p.
    // Those small orbits fall outside the family but are entirely singular
    // (per = det = 0), so they add nothing to any alternating sum.
    bool sizes_ok = true;
    bool invariants_ok = true;  // sigma0, per, det constant on each orbit
    bool family_orbits_small = true;
    int64_t orbits = 0;
    std::set<uint64_t> exceptional;  // min codes of small singular orbits outside the family
};

void scan_one_orbit(const BitMatrix& base, int p, const std::set<uint64_t>& family, OrbitScan& scan,
                    std::set<uint64_t>* orbit_out) {
    ++scan.orbits;
    const int sigma0 = base.sigma0();
    const int64_t per = permanent(base);
    const int64_t det = determinant(base);
    std::set<uint64_t> orbit;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const BitMatrix g = base.rotated(i, j);
            orbit.insert(g.rank());
            if (g.sigma0() != sigma0 || permanent(g) != per || determinant(g) != det) {
                scan.invariants_ok = false;
            }
        }
    }
    size_t in_family = 0;
    for (uint64_t c : orbit) in_family += family.count(c);
    const bool full_size = orbit.size() == static_cast<size_t>(p) * static_cast<size_t>(p);
    if (in_family == orbit.size()) {
        if (full_size) scan.family_orbits_small = false;
    } else if (in_family == 0) {
        if (!full_size) {
            if (per == 0 && det == 0) {
                scan.exceptional.insert(*orbit.begin());
            } else {
                scan.sizes_ok = false;
            }
        }
    } else {
        scan.sizes_ok = false;  // the family is closed under the action
    }
    if (orbit_out != nullptr) *orbit_out = std::move(orbit);
}

OrbitScan scan_orbits_full(int p, const std::set<uint64_t>& family) {
    OrbitScan scan;
    const uint64_t total = 1ull << (p * p);
    std::vector<bool> visited(total, false);
    for (uint64_t code = 0; code < total; ++code) {
        if (visited[code]) continue;
        std::set<uint64_t> orbit;
        scan_one_orbit(BitMatrix::unrank(code, p), p, family, scan, &orbit);
        for (uint64_t c : orbit) visited[c] = true;
    }
    return scan;
}

OrbitScan scan_orbits_sampled(int p, const std::set<uint64_t>& family, int samples) {
    OrbitScan scan;
    std::mt19937_64 rng(0x5eedULL + static_cast<uint64_t>(p));
    const uint64_t code_mask = (1ull << (p * p)) - 1ull;
    std::vector<uint64_t> codes;
    codes.insert(codes.end(), family.begin(), family.end());
    // All equal-row and constant-row matrices, the small orbits the
    // refined dichotomy must classify as singular.
    for (uint32_t r = 1; r + 1 < (1u << p); ++r) {
        BitMatrix equal_rows(p);
        BitMatrix constant_rows(p);
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                if ((r >> j) & 1u) equal_rows.set(i, j, true);
                if ((r >> i) & 1u) constant_rows.set(i, j, true);
            }
        }
        codes.push_back(equal_rows.rank());
        codes.push_back(constant_rows.rank());
    }
    for (int s = 0; s < samples; ++s) codes.push_back(rng() & code_mask);
    for (uint64_t code : codes) {
        scan_one_orbit(BitMatrix::unrank(code, p), p, family, scan, nullptr);
    }
    return scan;
}

}  // namespace

VerificationReport orbit_dichotomy_check(int p) {
    const auto t0 = std::chrono::steady_clock::now();
    check_spec(p, 1);
    VerificationReport rep;
    rep.task = "orbit_dichotomy";
    rep.add_param("p", p);

    const std::vector<BitMatrix> family = shifted_family(p);
    std::set<uint64_t> family_codes;
    for (const BitMatrix& m : family) family_codes.insert(m.rank());

    // The family built by construction must equal the set of matrices some
    // rotation pair (1, k) fixes.
    bool stabilizer_match = true;
    if (p == 3) {
        for (uint64_t code = 0; code < (1ull << (p * p)); ++code) {
            const bool in_family = family_codes.count(code) != 0;
            if (in_family != has_nontrivial_stabilizer(BitMatrix::unrank(code, p))) {
                stabilizer_match = false;
                break;
            }
        }
    } else {
        for (const BitMatrix& m : family) {
            if (!has_nontrivial_stabilizer(m)) stabilizer_match = false;
        }
        std::mt19937_64 rng(0xfeedULL + static_cast<uint64_t>(p));
        for (int s = 0; s < 20000; ++s) {
            const uint64_t code = rng() & ((1ull << (p * p)) - 1ull);
            const bool in_family = family_codes.count(code) != 0;
            if (in_family != has_nontrivial_stabilizer(BitMatrix::unrank(code, p))) {
                stabilizer_match = false;
                break;
            }
        }
    }

    const OrbitScan scan = p == 3 ? scan_orbits_full(p, family_codes)
                                  : scan_orbits_sampled(p, family_codes, 2000);

    // Diagonal map structure: period p, fixed points exactly the principal
    // diagonals, all other orbits of size p, sign preserved.
    bool diag_ok = true;
    for (int k = 1; k < p && diag_ok; ++k) {
        const std::vector<Diagonal> fixed = principal_diagonals(p, k);
        Permutation c = Permutation::identity(p);
        do {
            const Diagonal d{c};
            Diagonal cur = d;
            int period = 0;
            for (int step = 1; step <= p; ++step) {
                if (diagonal_map(cur, k, p).sign() != cur.sign()) diag_ok = false;
                cur = diagonal_map(cur, k, p);
                if (period == 0 && cur == d) period = step;
            }
            if (cur != d) diag_ok = false;  // s^p must be the identity
            const bool is_fixed = std::find(fixed.begin(), fixed.end(), d) != fixed.end();
            if (is_fixed != (period == 1)) diag_ok = false;
            if (!is_fixed && period != p) diag_ok = false;
        } while (c.next_lex());
    }

    // sigma0 of a shifted matrix with a ones per row is p(p-a), which for
    // odd p has the parity of a+1.
    bool parity_ok = true;
    for (const BitMatrix& m : family) {
        const int a = __builtin_popcount(m.row(0));
        if (m.sigma0() != p * (p - a)) parity_ok = false;
        if ((m.sigma0() & 1) != ((a + 1) & 1)) parity_ok = false;
    }

    const int64_t expected_family = (static_cast<int64_t>(1) << p) * (p - 1) - 2 * (p - 1) + 2;
    rep.add_computed("family_size", static_cast<int128>(family.size()));
    rep.add_computed("stabilizer_set_matches", stabilizer_match);
    rep.add_computed("orbit_sizes_ok", scan.sizes_ok);
    rep.add_computed("family_orbits_small", scan.family_orbits_small);
    rep.add_computed("orbit_invariants_ok", scan.invariants_ok);
    rep.add_computed("exceptional_singular_orbits",
                     static_cast<int128>(scan.exceptional.size()));
    rep.add_computed("diagonal_map_ok", diag_ok);
    rep.add_computed("zero_count_parity_ok", parity_ok);
    rep.add_expected("family_size", static_cast<int128>(expected_family), Provenance::Derived);
    rep.add_expected("stabilizer_set_matches", true, Provenance::Derived);
    rep.add_expected("orbit_sizes_ok", true, Provenance::Paper);
    rep.add_expected("family_orbits_small", true, Provenance::Derived);
    rep.add_expected("orbit_invariants_ok", true, Provenance::Paper);
    if (p == 3) {
        // Full sweep: the equal-row and constant-row matrices form exactly
        // 2(2^p - 2)/p small orbits outside the family.
        rep.add_expected("exceptional_singular_orbits",
                         static_cast<int128>(2 * ((1 << p) - 2) / p), Provenance::Derived);
    }
    rep.add_expected("diagonal_map_ok", true, Provenance::Paper);
    rep.add_expected("zero_count_parity_ok", true, Provenance::Derived);
    rep.note =
        "orbits outside the shifted family are full-size unless every member is singular "
        "(all rows equal or all rows constant); those contribute zero terms, so the "
        "family-restricted congruence is unaffected";
    rep.finalize_status();
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace latpar
