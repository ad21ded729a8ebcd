#include "latpar/matrix.hpp"

#include <algorithm>

namespace latpar {

namespace {

void check_order(int n, int cap, const char* what) {
    if (n < 1) throw InvalidArgument(std::string(what) + ": order must be positive");
    if (n > cap) {
        throw InvalidArgument(std::string(what) + ": order " + std::to_string(n) + " exceeds cap " +
                              std::to_string(cap));
    }
}

// Row value with column 0 as the most significant bit; the key for the
// canonical row order.
uint32_t display_value(uint16_t row, int n) {
    uint32_t v = 0;
    for (int j = 0; j < n; ++j) v = (v << 1) | ((row >> j) & 1u);
    return v;
}

}  // namespace

BitMatrix::BitMatrix(int n) : n_(n) { check_order(n, kMaxBitMatrixOrder, "BitMatrix"); }

BitMatrix BitMatrix::from_rows(int n, const std::vector<uint16_t>& rows) {
    BitMatrix m(n);
    if (static_cast<int>(rows.size()) != n) throw InvalidArgument("BitMatrix: wrong row count");
    const uint32_t limit = n < 16 ? (1u << n) : 0x10000u;
    for (int i = 0; i < n; ++i) {
        if (rows[static_cast<size_t>(i)] >= limit) throw InvalidArgument("BitMatrix: row bits out of range");
        m.rows_[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)];
    }
    return m;
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
    const int n = static_cast<int>(rows.size());
    BitMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n) {
            throw InvalidArgument("BitMatrix: ragged row string");
        }
        for (int j = 0; j < n; ++j) {
            const char c = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (c != '0' && c != '1') throw InvalidArgument("BitMatrix: row strings must be 0/1");
            if (c == '1') m.set(i, j, true);
        }
    }
    return m;
}

BitMatrix BitMatrix::unrank(uint64_t code, int n) {
    check_order(n, kMaxCodeOrder, "BitMatrix::unrank");
    const int bits = n * n;
    if (bits < 64 && code >= (1ull << bits)) throw InvalidArgument("BitMatrix::unrank: code out of range");
    BitMatrix m(n);
    const uint16_t row_mask = static_cast<uint16_t>((1u << n) - 1u);
    for (int i = 0; i < n; ++i) {
        m.rows_[static_cast<size_t>(i)] = static_cast<uint16_t>((code >> (i * n)) & row_mask);
    }
    return m;
}

BitMatrix BitMatrix::identity(int n) {
    BitMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::all_ones(int n) {
    BitMatrix m(n);
    for (int i = 0; i < n; ++i) m.rows_[static_cast<size_t>(i)] = static_cast<uint16_t>((1u << n) - 1u);
    return m;
}

uint64_t BitMatrix::rank() const {
    if (n_ > kMaxCodeOrder) throw InvalidArgument("BitMatrix::rank: order exceeds code cap");
    uint64_t code = 0;
    for (int i = 0; i < n_; ++i) code |= static_cast<uint64_t>(rows_[static_cast<size_t>(i)]) << (i * n_);
    return code;
}

void BitMatrix::set(int i, int j, bool v) {
    const uint16_t bit = static_cast<uint16_t>(1u << j);
    if (v) {
        rows_[static_cast<size_t>(i)] |= bit;
    } else {
        rows_[static_cast<size_t>(i)] &= static_cast<uint16_t>(~bit);
    }
}

int BitMatrix::ones() const {
    int c = 0;
    for (int i = 0; i < n_; ++i) c += __builtin_popcount(rows_[static_cast<size_t>(i)]);
    return c;
}

bool BitMatrix::has_zero_row_or_column() const {
    uint16_t col_or = 0;
    for (int i = 0; i < n_; ++i) {
        if (rows_[static_cast<size_t>(i)] == 0) return true;
        col_or |= rows_[static_cast<size_t>(i)];
    }
    return col_or != static_cast<uint16_t>((1u << n_) - 1u);
}

bool BitMatrix::rows_distinct() const {
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            if (rows_[static_cast<size_t>(i)] == rows_[static_cast<size_t>(j)]) return false;
        }
    }
    return true;
}

BitMatrix BitMatrix::row_canonical() const {
    BitMatrix m = *this;
    std::sort(m.rows_.begin(), m.rows_.begin() + n_, [this](uint16_t a, uint16_t b) {
        return display_value(a, n_) > display_value(b, n_);
    });
    return m;
}

bool BitMatrix::is_row_canonical() const { return *this == row_canonical(); }

BitMatrix BitMatrix::permuted(const Permutation& rows, const Permutation& cols) const {
    if (rows.size() != n_ || cols.size() != n_) throw InvalidArgument("permutation order mismatch");
    BitMatrix m(n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (get(i, j)) m.set(rows(i), cols(j), true);
        }
    }
    return m;
}

BitMatrix BitMatrix::rotated(int down, int right) const {
    return permuted(Permutation::cyclic(n_, down), Permutation::cyclic(n_, right));
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix m(n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (get(i, j)) m.set(j, i, true);
        }
    }
    return m;
}

std::vector<std::string> BitMatrix::to_strings() const {
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        std::string s(static_cast<size_t>(n_), '0');
        for (int j = 0; j < n_; ++j) {
            if (get(i, j)) s[static_cast<size_t>(j)] = '1';
        }
        out.push_back(std::move(s));
    }
    return out;
}

nlohmann::json BitMatrix::to_json() const { return {{"n", n_}, {"code", rank()}}; }

BitMatrix BitMatrix::from_json(const nlohmann::json& j) {
    return unrank(j.at("code").get<uint64_t>(), j.at("n").get<int>());
}

IntMatrix::IntMatrix(int n) : n_(n), a_(static_cast<size_t>(n * n), 0) {
    check_order(n, kMaxBitMatrixOrder, "IntMatrix");
}

IntMatrix IntMatrix::from_entries(int n, std::vector<int64_t> entries) {
    IntMatrix m(n);
    if (entries.size() != static_cast<size_t>(n * n)) throw InvalidArgument("IntMatrix: wrong entry count");
    for (int64_t v : entries) {
        if (v > 65536 || v < -65536) throw InvalidArgument("IntMatrix: entry magnitude exceeds 2^16");
    }
    m.a_ = std::move(entries);
    return m;
}

IntMatrix IntMatrix::from_bits(const BitMatrix& b) {
    IntMatrix m(b.n());
    for (int i = 0; i < b.n(); ++i) {
        for (int j = 0; j < b.n(); ++j) m.set(i, j, b.get(i, j) ? 1 : 0);
    }
    return m;
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

IntMatrix IntMatrix::all_ones(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m.set(i, j, 1);
    }
    return m;
}

void IntMatrix::set(int i, int j, int64_t v) {
    if (v > 65536 || v < -65536) throw InvalidArgument("IntMatrix: entry magnitude exceeds 2^16");
    a_[static_cast<size_t>(i * n_ + j)] = v;
}

int64_t permanent(const BitMatrix& m) {
    const int n = m.n();
    // Row sums over the current column subset, updated one flipped column
    // per Gray-code step. Terms fit 128 bits for n <= 16 (sums <= 16,
    // products <= 16^16); the result is at most 16! and narrows safely.
    int32_t cnt[kMaxBitMatrixOrder] = {0};
    int128 acc = 0;
    uint32_t subset = 0;
    const uint32_t end = 1u << n;
    for (uint32_t k = 1; k < end; ++k) {
        const int j = __builtin_ctz(k);
        const uint32_t bit = 1u << j;
        subset ^= bit;
        const int delta = (subset & bit) ? 1 : -1;
        for (int i = 0; i < n; ++i) cnt[i] += delta * ((m.row(i) >> j) & 1);
        int128 prod = 1;
        for (int i = 0; i < n; ++i) prod *= cnt[i];
        const int par = (n - __builtin_popcount(subset)) & 1;
        acc += par ? -prod : prod;
    }
    return checked_narrow(acc);
}

int128 permanent(const IntMatrix& m) {
    const int n = m.n();
    int128 cnt[kMaxBitMatrixOrder] = {0};
    int128 acc = 0;
    uint32_t subset = 0;
    const uint32_t end = 1u << n;
    for (uint32_t k = 1; k < end; ++k) {
        const int j = __builtin_ctz(k);
        const uint32_t bit = 1u << j;
        subset ^= bit;
        for (int i = 0; i < n; ++i) {
            cnt[i] = (subset & bit) ? checked_add(cnt[i], m.get(i, j)) : checked_sub(cnt[i], m.get(i, j));
        }
        int128 prod = 1;
        for (int i = 0; i < n; ++i) prod = checked_mul(prod, cnt[i]);
        const int par = (n - __builtin_popcount(subset)) & 1;
        acc = checked_add(acc, par ? -prod : prod);
    }
    return acc;
}

namespace {

template <typename T>
T naive_permanent_impl(const T* a, int n) {
    // Depth-first over rows, tracking used columns.
    T total = 0;
    uint32_t used = 0;
    T partial[kMaxBitMatrixOrder + 1];
    int col[kMaxBitMatrixOrder];
    partial[0] = 1;
    int i = 0;
    col[0] = -1;
    while (i >= 0) {
        int j = col[i] + 1;
        while (j < n && ((used >> j) & 1u)) ++j;
        if (j >= n) {
            --i;
            if (i >= 0) used &= ~(1u << col[i]);
            continue;
        }
        col[i] = j;
        used |= 1u << j;
        partial[i + 1] = partial[i] * a[i * n + j];
        if (i + 1 == n) {
            total += partial[i + 1];
            used &= ~(1u << j);
            continue;
        }
        ++i;
        col[i] = -1;
    }
    return total;
}

}  // namespace

int64_t permanent_naive(const BitMatrix& m) {
    check_order(m.n(), 8, "permanent_naive");
    int64_t a[64];
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) a[i * m.n() + j] = m.get(i, j) ? 1 : 0;
    }
    return naive_permanent_impl(a, m.n());
}

int128 permanent_naive(const IntMatrix& m) {
    check_order(m.n(), 8, "permanent_naive");
    int128 a[64];
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) a[i * m.n() + j] = m.get(i, j);
    }
    return naive_permanent_impl(a, m.n());
}

namespace {

// Fraction-free elimination; every division is exact by the Bareiss
// identity. Entry type must hold the largest minor.
template <typename T, typename Mul, typename Sub>
T bareiss_determinant(T* a, int n, Mul mul, Sub sub) {
    T prev = 1;
    int sgn = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (a[k * n + k] == 0) {
            int pivot = -1;
            for (int r = k + 1; r < n; ++r) {
                if (a[r * n + k] != 0) {
                    pivot = r;
                    break;
                }
            }
            if (pivot < 0) return 0;
            for (int j = k; j < n; ++j) std::swap(a[k * n + j], a[pivot * n + j]);
            sgn = -sgn;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                const T num = sub(mul(a[i * n + j], a[k * n + k]), mul(a[i * n + k], a[k * n + j]));
                a[i * n + j] = num / prev;
            }
            a[i * n + k] = 0;
        }
        prev = a[k * n + k];
    }
    return sgn > 0 ? a[n * n - 1] : -a[n * n - 1];
}

}  // namespace

int64_t determinant(const BitMatrix& m) {
    // 0/1 entries keep every minor within the Hadamard bound n^(n/2), far
    // inside 64 bits for n <= 16.
    const int n = m.n();
    int64_t a[kMaxBitMatrixOrder * kMaxBitMatrixOrder];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i * n + j] = m.get(i, j) ? 1 : 0;
    }
    return bareiss_determinant(
        a, n, [](int64_t x, int64_t y) { return x * y; },
        [](int64_t x, int64_t y) { return x - y; });
}

int128 determinant(const IntMatrix& m) {
    const int n = m.n();
    std::vector<int128> a(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[static_cast<size_t>(i * n + j)] = m.get(i, j);
    }
    return bareiss_determinant(
        a.data(), n, [](int128 x, int128 y) { return checked_mul(x, y); },
        [](int128 x, int128 y) { return checked_sub(x, y); });
}

namespace {

template <typename T>
T cofactor_impl(const T* a, int n, uint32_t cols, int row, int full_n) {
    if (row == full_n) return 1;
    T total = 0;
    int seen = 0;
    for (int j = 0; j < full_n; ++j) {
        if ((cols >> j) & 1u) continue;
        const T entry = a[row * full_n + j];
        if (entry != 0) {
            const T sub = cofactor_impl(a, n, cols | (1u << j), row + 1, full_n);
            total += (seen & 1) ? -entry * sub : entry * sub;
        }
        ++seen;
    }
    return total;
}

}  // namespace

int64_t determinant_cofactor(const BitMatrix& m) {
    check_order(m.n(), 8, "determinant_cofactor");
    int64_t a[64];
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) a[i * m.n() + j] = m.get(i, j) ? 1 : 0;
    }
    return cofactor_impl(a, m.n(), 0, 0, m.n());
}

int128 determinant_cofactor(const IntMatrix& m) {
    check_order(m.n(), 8, "determinant_cofactor");
    int128 a[64];
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) a[i * m.n() + j] = m.get(i, j);
    }
    return cofactor_impl(a, m.n(), 0, 0, m.n());
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

int det_mod(const BitMatrix& m, int p) {
    if (p < 3 || !is_prime(p)) throw InvalidArgument("det_mod: modulus must be an odd prime");
    const int n = m.n();
    int64_t a[kMaxBitMatrixOrder * kMaxBitMatrixOrder];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i * n + j] = m.get(i, j) ? 1 : 0;
    }
    int64_t det = 1;
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r) {
            if (a[r * n + k] % p != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return 0;
        if (pivot != k) {
            for (int j = k; j < n; ++j) std::swap(a[k * n + j], a[pivot * n + j]);
            det = p - det;
        }
        const int64_t pk = a[k * n + k] % p;
        det = det * pk % p;
        // Multiplicative inverse by Fermat.
        int64_t inv = 1, base = pk, e = p - 2;
        while (e > 0) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        for (int i = k + 1; i < n; ++i) {
            const int64_t factor = a[i * n + k] % p * inv % p;
            if (factor == 0) continue;
            for (int j = k; j < n; ++j) {
                a[i * n + j] = ((a[i * n + j] - factor * a[k * n + j]) % p + p) % p;
            }
        }
    }
    return static_cast<int>(det % p);
}

}  // namespace latpar
