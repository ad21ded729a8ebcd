#include "latpar/sums.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <thread>
#include <vector>

#include "latpar/matrix.hpp"

namespace latpar {

namespace {

// Largest |det| of an n x n (0,1)-matrix, n <= 5. The sum kernels assert
// it so the fixed-width term arithmetic is visibly safe.
constexpr int64_t kDetBound[6] = {1, 1, 1, 2, 3, 5};

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// (-1)^(n(n-1)/2)
int half_turn_sign(int n) { return (n % 4 == 0 || n % 4 == 1) ? 1 : -1; }

int64_t int_pow(int64_t base, int exp) {
    int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Partitions [0, total) into contiguous chunks handed to workers through a
// shared counter. Addition over exact integers commutes, so the result is
// bit-identical for any worker count or schedule.
template <class ChunkFn>
int128 parallel_range_sum(uint64_t total, const SumOptions& opts, int workers, ChunkFn chunk_fn) {
    const uint64_t chunk = opts.chunk_size == 0 ? (1ull << 16) : opts.chunk_size;
    if (workers <= 1) {
        int128 acc = 0;
        for (uint64_t lo = 0; lo < total; lo += chunk) {
            const uint64_t hi = std::min(total, lo + chunk);
            acc = checked_add(acc, chunk_fn(lo, hi));
            if (opts.progress) opts.progress(hi, total);
        }
        return acc;
    }
    std::atomic<uint64_t> next{0};
    std::atomic<uint64_t> done{0};
    std::vector<int128> partial(static_cast<size_t>(workers), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            int128 acc = 0;
            for (;;) {
                const uint64_t lo = next.fetch_add(chunk);
                if (lo >= total) break;
                const uint64_t hi = std::min(total, lo + chunk);
                acc = checked_add(acc, chunk_fn(lo, hi));
                const uint64_t d = done.fetch_add(hi - lo) + (hi - lo);
                if (opts.progress) opts.progress(d, total);
            }
            partial[static_cast<size_t>(w)] = acc;
        });
    }
    for (auto& th : pool) th.join();
    int128 acc = 0;
    for (int128 v : partial) acc = checked_add(acc, v);
    return acc;
}

void check_sum_order(int n) {
    if (n < 1) throw InvalidArgument("order must be positive");
    if (n > 5) {
        throw ResourceError("the sum over 2^(n^2) matrices is infeasible beyond order 5");
    }
}

int128 det_power_chunk(uint64_t lo, uint64_t hi, int n) {
    int128 acc = 0;
    for (uint64_t code = lo; code < hi; ++code) {
        const BitMatrix m = BitMatrix::unrank(code, n);
        if (m.has_zero_row_or_column()) continue;
        const int64_t det = determinant(m);
        if (det == 0) continue;
        if (det > kDetBound[n] || det < -kDetBound[n]) {
            throw InternalError("determinant bound violated");
        }
        const int64_t term = int_pow(det, n);
        const int sigma0_odd = (n * n - __builtin_popcountll(code)) & 1;
        acc += sigma0_odd ? -static_cast<int128>(term) : static_cast<int128>(term);
    }
    return acc;
}

int128 per_det_chunk(uint64_t lo, uint64_t hi, int n) {
    int128 acc = 0;
    for (uint64_t code = lo; code < hi; ++code) {
        const BitMatrix m = BitMatrix::unrank(code, n);
        if (m.has_zero_row_or_column()) continue;
        const int64_t det = determinant(m);
        if (det == 0) continue;
        if (det > kDetBound[n] || det < -kDetBound[n]) {
            throw InternalError("determinant bound violated");
        }
        const int64_t term = permanent(m) * int_pow(det, n - 1);
        const int sigma0_odd = (n * n - __builtin_popcountll(code)) & 1;
        acc += sigma0_odd ? -static_cast<int128>(term) : static_cast<int128>(term);
    }
    return acc;
}

uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
    }
    return r;
}

// Ascending k-subset of {0..N-1} with the given rank in lexicographic
// order.
std::array<int, 8> combination_unrank(uint64_t rank, int N, int k) {
    std::array<int, 8> c{};
    int v = 0;
    for (int pos = 0; pos < k; ++pos) {
        for (;; ++v) {
            const uint64_t block = binomial(N - 1 - v, k - 1 - pos);
            if (rank < block) break;
            rank -= block;
        }
        c[static_cast<size_t>(pos)] = v++;
    }
    return c;
}

bool combination_next(std::array<int, 8>& c, int N, int k) {
    int i = k - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == N - k + i) --i;
    if (i < 0) return false;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
    return true;
}

}  // namespace

SumResult det_power_sum(int n, const SumOptions& opts) {
    check_sum_order(n);
    const auto t0 = std::chrono::steady_clock::now();
    SumResult r;
    r.task = "det_power_sum";
    r.n = n;
    r.threads = resolve_threads(opts.threads);
    r.term_count = 1ull << (n * n);
    r.raw_sum = parallel_range_sum(r.term_count, opts, r.threads,
                                   [n](uint64_t lo, uint64_t hi) { return det_power_chunk(lo, hi, n); });
    r.scaled_numerator = half_turn_sign(n) * r.raw_sum;
    r.scaled_denominator = 1;
    r.scaled_value = r.scaled_numerator;
    r.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

SumResult per_det_sum(int n, const SumOptions& opts) {
    check_sum_order(n);
    if (n % 2 == 0) throw InvalidArgument("the per*det^(n-1) sum is defined for odd order");
    const auto t0 = std::chrono::steady_clock::now();
    SumResult r;
    r.task = "per_det_sum";
    r.n = n;
    r.threads = resolve_threads(opts.threads);
    r.term_count = 1ull << (n * n);
    r.raw_sum = parallel_range_sum(r.term_count, opts, r.threads,
                                   [n](uint64_t lo, uint64_t hi) { return per_det_chunk(lo, hi, n); });
    r.scaled_numerator = half_turn_sign(n) * r.raw_sum;
    r.scaled_denominator = checked_mul(static_cast<int128>(factorial(n)),
                                       static_cast<int128>(factorial(n - 1)));
    r.scaled_value = exact_div(r.scaled_numerator, r.scaled_denominator);
    r.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

SumResult drisko_residue(int p, const SumOptions& opts) {
    if (!is_prime(p) || p % 2 == 0) throw InvalidArgument("p must be an odd prime");
    if (p > 5) throw ResourceError("the residue sum needs 2^(p^2) terms; p > 5 is infeasible");
    const auto t0 = std::chrono::steady_clock::now();
    SumResult inner = per_det_sum(p, opts);
    SumResult r;
    r.task = "drisko_residue";
    r.n = p;
    r.threads = inner.threads;
    r.term_count = inner.term_count;
    r.raw_sum = inner.raw_sum;
    r.scaled_numerator = inner.raw_sum;
    r.scaled_denominator = p;
    r.scaled_value = exact_div(r.raw_sum, p);  // divisibility is a hard requirement
    r.residue_mod_p = static_cast<int>(((r.scaled_value % p) + p) % p);
    r.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

SumResult class_permanent_sum(int p, const SumOptions& opts) {
    if (!is_prime(p) || p % 2 == 0) throw InvalidArgument("p must be an odd prime");
    if (p > 7) throw ResourceError("row-class sum supports p <= 7");
    const auto t0 = std::chrono::steady_clock::now();
    const int N = 1 << p;
    const uint64_t total = binomial(N, p);

    SumResult r;
    r.task = "class_permanent_sum";
    r.n = p;
    r.threads = resolve_threads(opts.threads);
    r.term_count = total;

    auto chunk_fn = [p, N](uint64_t lo, uint64_t hi) {
        std::array<int, 8> comb = combination_unrank(lo, N, p);
        int128 acc = 0;
        std::vector<uint16_t> rows(static_cast<size_t>(p));
        for (uint64_t idx = lo; idx < hi; ++idx) {
            for (int i = 0; i < p; ++i) rows[static_cast<size_t>(i)] = static_cast<uint16_t>(comb[static_cast<size_t>(i)]);
            const BitMatrix m = BitMatrix::from_rows(p, rows);
            if (det_mod(m, p) != 0) {
                const int64_t per = permanent(m);
                acc += (m.sigma0() & 1) ? -static_cast<int128>(per) : static_cast<int128>(per);
            }
            if (idx + 1 < hi && !combination_next(comb, N, p)) break;
        }
        return acc;
    };
    r.raw_sum = parallel_range_sum(total, opts, r.threads, chunk_fn);
    r.scaled_numerator = r.raw_sum;
    r.scaled_denominator = 1;
    r.scaled_value = r.raw_sum;
    r.residue_mod_p = static_cast<int>(((r.raw_sum % p) + p) % p);
    r.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

nlohmann::json SumResult::to_json() const {
    nlohmann::json j = {{"task", task},
                        {"n", n},
                        {"raw_sum", to_decimal(raw_sum)},
                        {"scaled_numerator", to_decimal(scaled_numerator)},
                        {"scaled_denominator", to_decimal(scaled_denominator)},
                        {"scaled_value", to_decimal(scaled_value)},
                        {"term_count", term_count},
                        {"elapsed_ms", elapsed_ms},
                        {"threads", threads}};
    if (residue_mod_p.has_value()) {
        j["residue_mod_p"] = *residue_mod_p;
    } else {
        j["residue_mod_p"] = nullptr;
    }
    return j;
}

SumResult SumResult::from_json(const nlohmann::json& j) {
    SumResult r;
    r.task = j.at("task").get<std::string>();
    r.n = j.at("n").get<int>();
    r.raw_sum = parse_decimal(j.at("raw_sum").get<std::string>());
    r.scaled_numerator = parse_decimal(j.at("scaled_numerator").get<std::string>());
    r.scaled_denominator = parse_decimal(j.at("scaled_denominator").get<std::string>());
    r.scaled_value = parse_decimal(j.at("scaled_value").get<std::string>());
    if (!j.at("residue_mod_p").is_null()) r.residue_mod_p = j.at("residue_mod_p").get<int>();
    r.term_count = j.at("term_count").get<uint64_t>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    r.threads = j.at("threads").get<int>();
    return r;
}

void SumResult::csv_header(std::ostream& os) {
    os << "task,n,raw_sum,scaled_numerator,scaled_denominator,scaled_value,residue_mod_p,"
          "term_count,elapsed_ms,threads\n";
}

void SumResult::append_csv(std::ostream& os) const {
    os << task << "," << n << "," << to_decimal(raw_sum) << "," << to_decimal(scaled_numerator)
       << "," << to_decimal(scaled_denominator) << "," << to_decimal(scaled_value) << ","
       << (residue_mod_p.has_value() ? std::to_string(*residue_mod_p) : std::string()) << ","
       << term_count << "," << elapsed_ms << "," << threads << "\n";
}

std::string SumResult::to_text() const {
    std::string s = task + " n=" + std::to_string(n) + "\n";
    s += "    raw_sum = " + to_decimal(raw_sum) + "\n";
    s += "    scaled_value = " + to_decimal(scaled_value) + " (= " + to_decimal(scaled_numerator) +
         " / " + to_decimal(scaled_denominator) + ")\n";
    if (residue_mod_p.has_value()) {
        s += "    residue mod " + std::to_string(n) + " = " + std::to_string(*residue_mod_p) + "\n";
    }
    s += "    terms = " + std::to_string(term_count) + ", threads = " + std::to_string(threads) +
         ", elapsed_ms = " + std::to_string(elapsed_ms) + "\n";
    return s;
}

}  // namespace latpar
