// Acceptance suite: every exactness claim the artifact makes, each as one
// pass/fail line. All comparisons are exact integer equality. The
// --extended flag adds the 2^25-term exhaustive sums at order 5.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latpar/cli.hpp"
#include "latpar/latin.hpp"
#include "latpar/matrix.hpp"
#include "latpar/poly.hpp"
#include "latpar/shifted.hpp"
#include "latpar/sums.hpp"
#include "latpar/verify.hpp"

using namespace latpar;

namespace {

struct Runner {
    int failures = 0;

    void criterion(const std::string& name, const std::function<bool(std::string&)>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << ": " << detail;
        std::cout << " (" << ms << " ms)\n";
        if (!ok) ++failures;
    }
};

std::string i128s(int128 v) { return to_decimal(v); }

}  // namespace

int main(int argc, char** argv) {
    bool extended = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--extended") == 0) extended = true;
    }
    Runner r;

    r.criterion("1. enumeration baselines", [](std::string& d) {
        const int64_t want_total[6] = {0, 1, 2, 12, 576, 161280};
        const int64_t want_reduced[6] = {0, 1, 1, 1, 4, 56};
        bool ok = true;
        std::ostringstream os;
        for (int n = 1; n <= 5; ++n) {
            const CountSummary cs = count_summary(n);
            ok = ok && cs.total == want_total[n];
            ok = ok && cs.reduced_total() == want_reduced[n];
            if (n == 3 || n == 5) ok = ok && cs.even == cs.odd;
            os << "L_" << n << "=" << cs.total << " R_" << n << "=" << cs.reduced_total() << " ";
        }
        d = os.str();
        return ok;
    });

    r.criterion("2. three-route agreement at n=3", [](std::string& d) {
        const CountSummary cs = count_summary(3);
        const int64_t per_coeff = coeff_pipeline(3, PipelineMode::PerN);
        const int64_t det_coeff = coeff_pipeline(3, PipelineMode::DetN);
        const int64_t pd_coeff = coeff_pipeline(3, PipelineMode::PerDet);
        const SumResult dsum = det_power_sum(3);
        const SumResult psum = per_det_sum(3);
        const int64_t class_sum = symbol_signed_class_sum(3);
        const bool ok = per_coeff == 12 && cs.total == 12 && det_coeff == 0 && dsum.raw_sum == 0 &&
                        pd_coeff == 12 && psum.raw_sum == 12 && class_sum == 12 &&
                        psum.scaled_value == -1 && cs.alon_tarsi() == -1;
        d = "per=" + std::to_string(per_coeff) + " det=" + std::to_string(det_coeff) +
            " per_det=" + std::to_string(pd_coeff) + " sum_raw=" + i128s(psum.raw_sum) +
            " class_sum=" + std::to_string(class_sum) + " AT(3)=" + i128s(psum.scaled_value);
        return ok;
    });

    r.criterion("3. determinant-power sum matches enumeration at n=4", [](std::string& d) {
        const SumResult sum = det_power_sum(4);
        const CountSummary cs = count_summary(4);
        d = "sum=" + i128s(sum.scaled_value) + " enumerated=" + std::to_string(cs.even_minus_odd());
        return sum.scaled_value == cs.even_minus_odd();
    });

    r.criterion("4. AT(p) congruence for p=3,5" + std::string(extended ? " (extended)" : ""),
                [extended](std::string& d) {
                    const int64_t at3 = count_summary(3).alon_tarsi();
                    const int64_t at5 = count_summary(5).alon_tarsi();
                    bool ok = ((at3 % 3) + 3) % 3 == 2;
                    ok = ok && ((at5 % 5) + 5) % 5 == 1;
                    d = "AT(3)=" + std::to_string(at3) + " AT(5)=" + std::to_string(at5);
                    if (extended) {
                        SumOptions o;
                        o.threads = 8;
                        const SumResult sum5 = per_det_sum(5, o);
                        ok = ok && sum5.scaled_value == at5;
                        d += " sum_route=" + i128s(sum5.scaled_value);
                    }
                    return ok;
                });

    r.criterion("5. row-class permanent sum residue -1 mod p for p=3,5", [](std::string& d) {
        const SumResult s3 = class_permanent_sum(3);
        const SumResult s5 = class_permanent_sum(5);
        d = "p=3: residue=" + std::to_string(*s3.residue_mod_p) + " over " +
            std::to_string(s3.term_count) + " classes; p=5: residue=" +
            std::to_string(*s5.residue_mod_p) + " over " + std::to_string(s5.term_count) +
            " classes";
        return *s3.residue_mod_p == 2 && s3.term_count == 56 && *s5.residue_mod_p == 4 &&
               s5.term_count == 201376;
    });

    r.criterion("6. shifted-matrix residues for p=3,5,7", [](std::string& d) {
        std::ostringstream os;
        bool ok = true;
        for (int p : {3, 5, 7}) {
            const VerificationReport rep = shift_residue_check(p);
            ok = ok && rep.status == Status::Pass;
            os << "p=" << p << ":" << *rep.find_computed("pairs") << " pairs ";
        }
        d = os.str();
        return ok;
    });

    r.criterion("7. orbit structure at p=3", [](std::string& d) {
        const VerificationReport rep = orbit_dichotomy_check(3);
        d = "family_size=" + *rep.find_computed("family_size") +
            " contributing orbits outside it are full-size; " +
            *rep.find_computed("exceptional_singular_orbits") +
            " singular equal-row/constant-row orbits are the only exceptions";
        return rep.status == Status::Pass && *rep.find_computed("family_size") == "14" &&
               *rep.find_computed("exceptional_singular_orbits") == "4";
    });

    r.criterion("8. residue sum with documented sign discrepancy, p=3" +
                    std::string(extended ? " and p=5 (extended)" : ""),
                [extended](std::string& d) {
                    const SumResult s = drisko_residue(3);
                    const int128 family = shifted_family_per_det_sum(3);
                    const Status st = verify::drisko_status(s, family, 3);
                    bool ok = s.raw_sum == 12 && s.scaled_value == 4 && *s.residue_mod_p == 1 &&
                              st == Status::DiscrepancyDocumented;
                    // Orbit cross-check: the full sum and the family sum
                    // agree mod 9, both landing on 3.
                    ok = ok && ((s.raw_sum % 9) + 9) % 9 == 3 && ((family % 9) + 9) % 9 == 3 &&
                         family == -42;
                    d = "raw=" + i128s(s.raw_sum) + " quotient=" + i128s(s.scaled_value) +
                        " residue=" + std::to_string(*s.residue_mod_p) + " family=" +
                        i128s(family);
                    if (extended) {
                        SumOptions o;
                        o.threads = 8;
                        const SumResult s5 = drisko_residue(5, o);
                        const int128 family5 = shifted_family_per_det_sum(5);
                        ok = ok && *s5.residue_mod_p == 1 &&
                             verify::drisko_status(s5, family5, 5) == Status::DiscrepancyDocumented;
                        d += " p5_residue=" + std::to_string(*s5.residue_mod_p);
                    }
                    return ok;
                });

    r.criterion("9. tuple identity at n=3", [](std::string& d) {
        const int64_t rdiff = count_summary(3).reduced_diff();
        std::vector<IntMatrix> mats(3, IntMatrix::identity(3));
        const auto [lid, rid] = tuple_identity_sides(mats, rdiff);
        mats.assign(3, IntMatrix::all_ones(3));
        const auto [lones, rones] = tuple_identity_sides(mats, rdiff);
        bool ok = lid == 2 && rid == 2 && lones == 0 && rones == 0;
        std::mt19937_64 rng(12345);
        std::uniform_int_distribution<int> entry(-3, 3);
        int matched = 0;
        for (int t = 0; t < 100; ++t) {
            for (auto& m : mats) {
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) m.set(i, j, entry(rng));
                }
            }
            const auto [lhs, rhs] = tuple_identity_sides(mats, rdiff);
            if (lhs == rhs) ++matched;
        }
        ok = ok && matched == 100;
        d = "identity=" + i128s(lid) + " all_ones=" + i128s(lones) + " random_matched=" +
            std::to_string(matched) + "/100";
        return ok;
    });

    r.criterion("10. tuple coefficient at n=3", [](std::string& d) {
        const int64_t coeff = tuple_coefficient(3);
        const CountSummary cs = count_summary(3);
        const int64_t product = cs.alon_tarsi() * cs.reduced_diff();
        const int64_t implied = -coeff / (6 * 2 * 2);  // (-1)^3 C / (3! 2! 2!)
        d = "C=" + std::to_string(coeff) + " implied=" + std::to_string(implied) +
            " AT*Rdiff=" + std::to_string(product);
        return coeff == 24 && implied == product;
    });

    r.criterion("11. engineering properties", [](std::string& d) {
        bool ok = true;
        for (uint64_t code = 0; code < 512; ++code) {
            const BitMatrix m = BitMatrix::unrank(code, 3);
            ok = ok && permanent(m) == permanent_naive(m);
            ok = ok && determinant(m) == determinant_cofactor(m);
        }
        std::mt19937_64 rng(77);
        for (int t = 0; t < 10000; ++t) {
            const BitMatrix m4 = BitMatrix::unrank(rng() & 0xffff, 4);
            const BitMatrix m5 = BitMatrix::unrank(rng() & 0x1ffffff, 5);
            ok = ok && permanent(m4) == permanent_naive(m4) &&
                 determinant(m4) == determinant_cofactor(m4);
            ok = ok && permanent(m5) == permanent_naive(m5) &&
                 determinant(m5) == determinant_cofactor(m5);
        }
        const int128 base_sum = det_power_sum(4).raw_sum;
        const int128 base_pd = per_det_sum(3).raw_sum;
        for (int threads : {1, 2, 8}) {
            SumOptions o;
            o.threads = threads;
            o.chunk_size = 1u << 10;
            ok = ok && det_power_sum(4, o).raw_sum == base_sum;
            ok = ok && per_det_sum(3, o).raw_sum == base_pd;
        }
        for (int t = 0; t < 1000; ++t) {
            const uint64_t code = rng() & 0xffff;
            ok = ok && BitMatrix::unrank(code, 4).rank() == code;
        }
        std::vector<LatinSquare> a;
        std::vector<LatinSquare> b;
        for_each_square(4, Filter::All, [&](const LatinSquare& sq) { a.push_back(sq); });
        for_each_square(4, Filter::All, [&](const LatinSquare& sq) { b.push_back(sq); });
        ok = ok && a == b;
        d = "kernel oracles, parallel sums, rank round-trip, enumeration determinism";
        return ok;
    });

    if (extended) {
        r.criterion("extended: three-route agreement at n=5", [](std::string& d) {
            const CountSummary cs = count_summary(5, 8);
            SumOptions o;
            o.threads = 8;
            const SumResult dsum = det_power_sum(5, o);
            const int64_t per_coeff = coeff_pipeline(5, PipelineMode::PerN, 5);
            const int64_t det_coeff = coeff_pipeline(5, PipelineMode::DetN, 5);
            const int64_t pd_coeff = coeff_pipeline(5, PipelineMode::PerDet, 5);
            const SumResult psum = per_det_sum(5, o);
            const int64_t class_sum = symbol_signed_class_sum(5);
            bool ok = per_coeff == cs.total;
            ok = ok && dsum.scaled_value == cs.even_minus_odd() && det_coeff == dsum.raw_sum;
            ok = ok && psum.scaled_value == cs.alon_tarsi() && pd_coeff == psum.raw_sum;
            ok = ok && class_sum == 2880 * cs.alon_tarsi();  // (-1)^10 5! 4! AT(5)
            d = "L_5=" + std::to_string(cs.total) + " AT(5)=" + std::to_string(cs.alon_tarsi()) +
                " raw=" + i128s(psum.raw_sum);
            return ok;
        });
    }

    std::cout << (r.failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << "\n";
    return r.failures == 0 ? 0 : 1;
}
